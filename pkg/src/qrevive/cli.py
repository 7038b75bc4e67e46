"""Command-line front door.

Subcommands: trajectory, procedure1, procedure2, scan, verify.  Outputs are
CSV for plotting plus JSON for lossless regression; every file embeds the
fully resolved configuration (flags override an optional JSON config file,
which overrides built-in defaults).  Exit codes: 0 success, 1 validation or
configuration error, 2 mathematical precondition failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .channels import CavityParams, GadParams, apply, gad, invertibility_zeros, tensor
from .entanglement import SearchBudget, negativity
from .errors import MathError, ValidationError
from .linalg import frobenius_distance
from .procedures import (
    conservation_audit,
    gad_region_scan,
    nonpositivity_witness,
    procedure1_trajectory,
    procedure2_channel_level,
    procedure2_stinespring,
    revival_factor,
)
from .serialize import matrix_to_pairs, state_to_json, write_csv, write_json
from .states import bell_phi_plus
from .verification import Tolerances, run_verification

TRAJECTORY_HEADER = ["t", "P", "concurrence", "negativity", "invertible"]
SCAN_HEADER = ["gamma", "n", "class", "choi_min_pt_eig", "ea_min_pt_eig"]

DEFAULTS = {
    "trajectory": {
        "gamma0": 1.0, "lam": 0.1, "t_max": 60.0, "t_steps": 400,
        "seed": 0, "out": "trajectory", "format": "csv", "plot": False,
    },
    "procedure1": {
        "gamma0": 1.0, "lam": 0.1, "t_max": 60.0, "t_steps": 400,
        "witness_samples": 1000,
        "seed": 0, "out": "procedure1", "format": "json", "plot": False,
    },
    "procedure2": {
        "gamma": 0.7, "n": 0.5,
        "seed": 0, "out": "procedure2", "format": "json", "plot": False,
    },
    "scan": {
        "grid": 40, "ea_samples": 500,
        "seed": 0, "out": "scan", "format": "csv", "plot": False,
    },
    "verify": {
        "seed": 0, "out": "", "psd_slack": 1e-10,
    },
}


class _Parser(argparse.ArgumentParser):
    """Usage errors are configuration errors: exit 1, not argparse's 2."""

    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"error: {message}\n")
        raise SystemExit(1)


def _add_common(sp, *, formats=("csv", "json")):
    sp.add_argument("--seed", type=int, default=None, help="master RNG seed")
    sp.add_argument("--out", default=None, help="output path base (extension is added)")
    sp.add_argument("--format", choices=formats, default=None, help="primary output format")
    sp.add_argument("--config", default=None, help="JSON config file (flags override it)")
    sp.add_argument("--plot", action="store_true", default=None,
                    help="also render figures next to the data files")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="qrevive",
                     description="Local qubit channels, their inverses, and the "
                                 "entanglement they make accessible again.")
    parser.add_argument("--version", action="version", version=f"qrevive {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("trajectory",
                        help="evolve the maximally entangled pair under local "
                             "cavity decay and tabulate P, concurrence, negativity")
    sp.add_argument("--gamma0", type=float, default=None, help="atom-reservoir coupling rate")
    sp.add_argument("--lambda", dest="lam", type=float, default=None,
                    help="reservoir spectral width")
    sp.add_argument("--t-max", dest="t_max", type=float, default=None)
    sp.add_argument("--t-steps", dest="t_steps", type=int, default=None)
    _add_common(sp)

    sp = sub.add_parser("procedure1",
                        help="death/revival pairs with their revival maps and a "
                             "non-positivity witness")
    sp.add_argument("--gamma0", type=float, default=None)
    sp.add_argument("--lambda", dest="lam", type=float, default=None)
    sp.add_argument("--t-max", dest="t_max", type=float, default=None)
    sp.add_argument("--t-steps", dest="t_steps", type=int, default=None)
    sp.add_argument("--witness-samples", dest="witness_samples", type=int, default=None)
    _add_common(sp)

    sp = sub.add_parser("procedure2",
                        help="run the inverse-damping protocol on the maximally "
                             "entangled pair and audit the bookkeeping")
    sp.add_argument("--gamma", type=float, default=None, help="damping strength in [0, 1)")
    sp.add_argument("--n", type=float, default=None, help="environment excitation in [0, 1]")
    _add_common(sp)

    sp = sub.add_parser("scan",
                        help="classify the (gamma, n) damping plane into "
                             "non-invertible / breaking / annihilating regions")
    sp.add_argument("--grid", type=int, default=None, help="grid points per axis")
    sp.add_argument("--ea-samples", dest="ea_samples", type=int, default=None,
                    help="annihilation search samples per cell")
    _add_common(sp)

    sp = sub.add_parser("verify", help="run the library invariant suites")
    sp.add_argument("--psd-slack", dest="psd_slack", type=float, default=None,
                    help="positivity slack used by the state-validation group")
    sp.add_argument("--seed", type=int, default=None)
    sp.add_argument("--out", default=None, help="write the JSON report here")
    sp.add_argument("--config", default=None)
    return parser


def resolve_config(command: str, args: argparse.Namespace) -> dict:
    """defaults < config file < explicit flags; unknown file keys are errors."""
    cfg = dict(DEFAULTS[command])
    path = getattr(args, "config", None)
    if path:
        try:
            loaded = json.loads(Path(path).read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise ValidationError(f"cannot read config file {path}: {exc}") from exc
        if not isinstance(loaded, dict):
            raise ValidationError("config file must hold a JSON object")
        for key, value in loaded.items():
            norm = key.replace("-", "_")
            if norm not in cfg:
                raise ValidationError(f"unknown config field '{key}' for {command}")
            cfg[norm] = value
    for key in cfg:
        value = getattr(args, key, None)
        if value is not None:
            cfg[key] = value
    cfg["seed"] = int(cfg["seed"])
    return cfg


def _metadata(command: str, cfg: dict) -> dict:
    return {"tool": "qrevive", "version": __version__,
            "command": command, "config": cfg}


def _pair_summary(q) -> dict:
    return {
        "t_i": q.t_i, "t_f": q.t_f,
        "concurrence_i": q.concurrence_i, "concurrence_f": q.concurrence_f,
        # separability at t_i under both readings: the threshold used by the
        # pair search and strict zero
        "dead_at_zero_tolerance": q.concurrence_i == 0.0,
        "negativity_i": q.negativity_i, "negativity_f": q.negativity_f,
        "full_cut_negativity": q.full_cut_negativity,
        "reproduction_residual": q.reproduction_residual,
    }


def _run_trajectory(cfg: dict):
    p = CavityParams(gamma0=float(cfg["gamma0"]), lam=float(cfg["lam"]))
    if cfg["t_steps"] < 2:
        raise ValidationError(f"t_steps must be >= 2, got {cfg['t_steps']}")
    if cfg["t_max"] <= 0:
        raise ValidationError(f"t_max must be positive, got {cfg['t_max']}")
    grid = np.linspace(0.0, float(cfg["t_max"]), int(cfg["t_steps"]))
    result = procedure1_trajectory(bell_phi_plus(), p, grid)
    zeros = []
    n = 1
    while True:
        t_n = invertibility_zeros(p, n)[-1]
        if t_n > cfg["t_max"]:
            break
        zeros.append(t_n)
        n += 1
    return p, result, zeros


def cmd_trajectory(cfg: dict) -> int:
    _, result, zeros = _run_trajectory(cfg)
    rows = [(pt.t, pt.P, pt.concurrence, pt.negativity, pt.invertible)
            for pt in result.points]
    sidecar = {
        "metadata": _metadata("trajectory", cfg),
        "exceeding_pairs": [_pair_summary(q) for q in result.pairs],
        "invertibility_zeros": zeros,
    }
    out = Path(cfg["out"])
    written = []
    if cfg["format"] == "csv":
        written.append(write_csv(out.with_suffix(".csv"), TRAJECTORY_HEADER, rows))
        written.append(write_json(out.with_suffix(".json"), sidecar))
    else:
        sidecar["points"] = [dict(zip(TRAJECTORY_HEADER, row)) for row in rows]
        written.append(write_json(out.with_suffix(".json"), sidecar))
    if cfg["plot"]:
        from .plotting import plot_trajectory

        written.append(plot_trajectory(result, out.with_suffix(".png")))
    print(f"trajectory: {len(rows)} points, {len(result.pairs)} exceeding pairs -> "
          + ", ".join(str(w) for w in written))
    return 0


def cmd_procedure1(cfg: dict) -> int:
    p, result, zeros = _run_trajectory(cfg)
    pairs = [_pair_summary(q) for q in result.pairs]
    selected = None
    for q in result.pairs:
        if q.reproduction_residual <= 1e-8:
            psi = revival_factor(p, q.t_i, q.t_f)
            witness, min_eig = nonpositivity_witness(
                psi, int(cfg["witness_samples"]), cfg["seed"])
            selected = dict(_pair_summary(q))
            selected["witness_amplitudes"] = matrix_to_pairs(
                witness.amplitudes.reshape(1, -1))
            selected["witness_min_output_eigenvalue"] = min_eig
            selected["revival_factor_is_cp"] = psi.is_cp
            selected["revival_factor_is_tp"] = psi.is_tp
            break
    payload = {
        "metadata": _metadata("procedure1", cfg),
        "exceeding_pairs": pairs,
        "selected_pair": selected,
        "invertibility_zeros": zeros,
    }
    out = Path(cfg["out"])
    written = [write_json(out.with_suffix(".json"), payload)]
    if cfg["format"] == "csv":
        rows = [(pt.t, pt.P, pt.concurrence, pt.negativity, pt.invertible)
                for pt in result.points]
        written.append(write_csv(out.with_suffix(".csv"), TRAJECTORY_HEADER, rows))
    if cfg["plot"]:
        from .plotting import plot_trajectory

        written.append(plot_trajectory(result, out.with_suffix(".png")))
    found = "none" if selected is None else (
        f"t_i={selected['t_i']:.4f}, t_f={selected['t_f']:.4f}, "
        f"witness eigenvalue {selected['witness_min_output_eigenvalue']:.3e}")
    print(f"procedure1: {len(pairs)} exceeding pairs, selected pair: {found} -> "
          + ", ".join(str(w) for w in written))
    return 0


def cmd_procedure2(cfg: dict) -> int:
    g = GadParams(gamma=float(cfg["gamma"]), n=float(cfg["n"]))
    rho = bell_phi_plus()
    lhs, rhs = procedure2_channel_level(rho, g)
    pipeline = procedure2_stinespring(rho, g)
    audit = conservation_audit(pipeline)
    e = gad(g)
    direct_forward = apply(tensor(e, e), rho)

    states = {
        "rho_AB": pipeline.rho_AB,
        "rho_full": pipeline.rho_full,
        "rho_full_prime": pipeline.rho_full_prime,
        "rho_AB_prime": pipeline.rho_AB_prime,
        "rho_full_dprime": pipeline.rho_full_dprime,
        "rho_AB_dprime": pipeline.rho_AB_dprime,
    }
    ent = {}
    for name, s in states.items():
        cut = (0, 1) if len(s.dims) == 4 else (0,)
        ent[name] = {"negativity": negativity(s, cut),
                     "cut": "AE_A|BE_B" if len(s.dims) == 4 else "A|B"}
    payload = {
        "metadata": _metadata("procedure2", cfg),
        "states": {k: state_to_json(v) for k, v in states.items()},
        "entanglement": ent,
        "residuals": {
            "channel_lhs_vs_rhs": frobenius_distance(lhs, rhs),
            "stinespring_vs_channel_rhs": frobenius_distance(
                pipeline.rho_AB_dprime.matrix, rhs),
            "stinespring_vs_channel_lhs": frobenius_distance(
                pipeline.rho_AB_dprime.matrix, lhs),
            "forward_stage_vs_channel": frobenius_distance(
                pipeline.rho_AB_prime.matrix, direct_forward),
        },
        "audit": {
            "passed": audit.passed(),
            "stages": [{"stage": r.stage,
                        "full_cut_negativity": r.full_cut_negativity,
                        "ab_negativity": r.ab_negativity} for r in audit.stages],
            "checks": [{"name": c.name, "kind": c.kind, "value": c.value,
                        "passed": c.passed()} for c in audit.checks],
        },
    }
    out = Path(cfg["out"])
    written = [write_json(out.with_suffix(".json"), payload)]
    if cfg["format"] == "csv":
        rows = [(r.stage, r.full_cut_negativity, r.ab_negativity)
                for r in audit.stages]
        written.append(write_csv(out.with_suffix(".csv"),
                                 ["stage", "full_cut_negativity", "ab_negativity"],
                                 rows))
    if cfg["plot"]:
        from .plotting import plot_pipeline

        written.append(plot_pipeline(audit, out.with_suffix(".png")))
    print(f"procedure2: audit {'passed' if audit.passed() else 'FAILED'}, "
          f"system negativity {ent['rho_AB']['negativity']:.4f} -> "
          f"{ent['rho_AB_prime']['negativity']:.4f} -> "
          f"{ent['rho_AB_dprime']['negativity']:.4f} -> "
          + ", ".join(str(w) for w in written))
    return 0


def cmd_scan(cfg: dict) -> int:
    if cfg["grid"] < 2:
        raise ValidationError(f"grid must be >= 2, got {cfg['grid']}")
    axes = np.linspace(0.0, 1.0, int(cfg["grid"]))
    budget = SearchBudget(samples=int(cfg["ea_samples"]))
    grid = gad_region_scan(axes, axes, budget, cfg["seed"])
    rows = [(c.gamma, c.n, c.label, c.choi_min_pt_eig, c.ea_min_pt_eig)
            for row in grid.cells for c in row]
    counts: dict[str, int] = {}
    for c in grid.flat():
        counts[c.label] = counts.get(c.label, 0) + 1
    meta = {"metadata": _metadata("scan", cfg), "class_counts": counts}
    out = Path(cfg["out"])
    written = []
    if cfg["format"] == "csv":
        written.append(write_csv(out.with_suffix(".csv"), SCAN_HEADER, rows))
        written.append(write_json(out.with_suffix(".json"), meta))
    else:
        meta["cells"] = [dict(zip(SCAN_HEADER, row)) for row in rows]
        written.append(write_json(out.with_suffix(".json"), meta))
    if cfg["plot"]:
        from .plotting import plot_region

        written.append(plot_region(grid, out.with_suffix(".png")))
    print(f"scan: {len(rows)} cells, counts {counts} -> "
          + ", ".join(str(w) for w in written))
    return 0


def cmd_verify(cfg: dict) -> int:
    tol = Tolerances(psd_slack=float(cfg["psd_slack"]))
    report = run_verification(seed=cfg["seed"], tolerances=tol)
    payload = {"metadata": _metadata("verify", cfg), **report}
    if cfg["out"]:
        path = write_json(Path(cfg["out"]).with_suffix(".json"), payload)
        print(f"verify: report -> {path}")
    else:
        sys.stdout.write(json.dumps(payload, indent=2, sort_keys=True) + "\n")
    for g in report["groups"]:
        status = "PASS" if g["passed"] else "FAIL"
        print(f"{status} {g['name']} residual={g['residual']:.3e} "
              f"tol={g['tolerance']:.1e}", file=sys.stderr)
    return 0 if report["passed"] else 1


DISPATCH = {
    "trajectory": cmd_trajectory,
    "procedure1": cmd_procedure1,
    "procedure2": cmd_procedure2,
    "scan": cmd_scan,
    "verify": cmd_verify,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        cfg = resolve_config(args.command, args)
        return DISPATCH[args.command](cfg)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except MathError as exc:
        sys.stdout.write(json.dumps(
            {"error": {"type": type(exc).__name__, "message": str(exc)}},
            indent=2, sort_keys=True) + "\n")
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
