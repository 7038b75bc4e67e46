"""Figure rendering for the CLI report paths (written next to the data files)."""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
from matplotlib.colors import BoundaryNorm, ListedColormap

from .procedures import (
    CLASS_EA_NOT_EB,
    CLASS_EB,
    CLASS_NONINVERTIBLE,
    CLASS_NOT_EA,
    AuditReport,
    Procedure1Result,
    RegionGrid,
)

_CLASS_ORDER = [CLASS_NOT_EA, CLASS_EA_NOT_EB, CLASS_EB, CLASS_NONINVERTIBLE]
_CLASS_COLORS = ["#4878a8", "#e8a33d", "#c44e52", "#777777"]


def plot_trajectory(result: Procedure1Result, path) -> Path:
    """Survival probability and the two entanglement measures over time,
    with the first reported death/revival pair marked."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    ts = [p.t for p in result.points]
    fig, (ax1, ax2) = plt.subplots(2, 1, sharex=True, figsize=(7.5, 5.5))
    ax1.plot(ts, [p.P for p in result.points], color="#555555")
    ax1.set_ylabel("survival probability P(t)")
    ax1.set_yscale("log")
    ax1.grid(alpha=0.3)
    ax2.plot(ts, [p.concurrence for p in result.points], label="concurrence")
    ax2.plot(ts, [p.negativity for p in result.points], label="negativity", ls="--")
    if result.pairs:
        q = result.pairs[0]
        for ax in (ax1, ax2):
            ax.axvline(q.t_i, color="#c44e52", lw=0.8)
            ax.axvline(q.t_f, color="#55a868", lw=0.8)
        ax2.annotate("death", (q.t_i, 0.5), rotation=90, fontsize=8, color="#c44e52")
        ax2.annotate("revived", (q.t_f, 0.5), rotation=90, fontsize=8, color="#55a868")
    ax2.set_xlabel("t  [1/gamma0]")
    ax2.set_ylabel("entanglement")
    ax2.legend(loc="upper right")
    ax2.grid(alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def plot_region(grid: RegionGrid, path) -> Path:
    """Classification map of the damping plane (gamma horizontal, n vertical)."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    codes = {label: k for k, label in enumerate(_CLASS_ORDER)}
    mat = [[codes[grid.cells[i][j].label] for i in range(len(grid.gamma_axis))]
           for j in range(len(grid.n_axis))]
    cmap = ListedColormap(_CLASS_COLORS)
    norm = BoundaryNorm([-0.5, 0.5, 1.5, 2.5, 3.5], cmap.N)
    fig, ax = plt.subplots(figsize=(6.5, 5.0))
    mesh = ax.pcolormesh(grid.gamma_axis, grid.n_axis, mat, cmap=cmap, norm=norm,
                         shading="nearest")
    cbar = fig.colorbar(mesh, ticks=[0, 1, 2, 3])
    cbar.ax.set_yticklabels(_CLASS_ORDER)
    ax.set_xlabel("damping gamma")
    ax.set_ylabel("environment excitation n")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def plot_pipeline(report: AuditReport, path) -> Path:
    """Both bookkeeping columns per pipeline stage: the conserved cut value
    and the part accessible in the system."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    stages = [r.stage for r in report.stages]
    x = range(len(stages))
    fig, ax = plt.subplots(figsize=(6.5, 4.0))
    ax.bar([i - 0.18 for i in x], [r.full_cut_negativity for r in report.stages],
           width=0.36, label="joint-cut negativity", color="#4878a8")
    ax.bar([i + 0.18 for i in x], [r.ab_negativity for r in report.stages],
           width=0.36, label="system negativity", color="#e8a33d")
    ax.set_xticks(list(x))
    ax.set_xticklabels(stages, rotation=15)
    ax.set_ylabel("negativity")
    ax.legend()
    ax.grid(axis="y", alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path
