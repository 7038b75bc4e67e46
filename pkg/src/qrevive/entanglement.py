"""Entanglement measures and channel classifiers.

Negativity is the workhorse measure (computable across any cut);
concurrence is the two-qubit display measure.  Channel classifiers:
entanglement breaking decided exactly through the Choi state's partial
transpose, entanglement annihilation certified at a search resolution by
Haar sampling plus simplex refinement over pure product-space inputs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize

from .channels import Channel, apply, identity_channel, tensor
from .errors import BadCut, BudgetTooSmall, NotCP, ValidationError, WrongDims
from .linalg import Y
from .states import (
    DensityMatrix,
    PureState,
    bell_phi_plus,
    derived_rng,
    partial_trace,
    partial_transpose_matrix,
)

#: Partial-transpose eigenvalues in [-PT_CLAMP, 0) count as eigensolver noise.
PT_CLAMP = 1e-10

#: A state whose partial transpose dips below this is certified entangled.
EA_WITNESS_TOL = -1e-9

#: Documented minimum sample count for the annihilation search.
MIN_EA_SAMPLES = 100


def _split_cut(dims: tuple[int, ...], cut) -> tuple[tuple[int, ...], tuple[int, ...]]:
    n = len(dims)
    if isinstance(cut, (int, np.integer)):
        cut = (int(cut),)
    first = tuple(sorted(int(i) for i in cut))
    if len(set(first)) != len(first) or any(i < 0 or i >= n for i in first):
        raise BadCut(f"cut {cut} is not a valid subsystem subset of 0..{n - 1}")
    second = tuple(i for i in range(n) if i not in first)
    if not first or not second:
        raise BadCut("cut must split the register into two nonempty groups")
    return first, second


def pt_eigenvalues(rho: DensityMatrix, cut) -> np.ndarray:
    """Ascending spectrum of the partial transpose across the cut."""
    _, second = _split_cut(rho.dims, cut)
    pt = partial_transpose_matrix(rho.matrix, rho.dims, second)
    return np.linalg.eigvalsh(pt)


def negativity(rho: DensityMatrix, cut) -> float:
    """Sum of |negative eigenvalues| of the partial transpose across cut.

    Eigenvalues in [-1e-10, 0) are clamped to zero, so negativity == 0 is
    exactly the PPT verdict used everywhere else in the package.
    """
    w = pt_eigenvalues(rho, cut)
    neg = w[w < -PT_CLAMP]
    return float(-neg.sum()) if neg.size else 0.0


def is_ppt(rho: DensityMatrix, cut) -> bool:
    return negativity(rho, cut) == 0.0


_YY = np.kron(Y, Y)


def concurrence(rho: DensityMatrix) -> float:
    """Wootters concurrence of a two-qubit state.

    max(0, l1 - l2 - l3 - l4) with l_i the descending square roots of the
    eigenvalues of rho (Y x Y) rho* (Y x Y).
    """
    if rho.dims != (2, 2):
        raise WrongDims(f"concurrence needs dims (2, 2), got {rho.dims}")
    m = rho.matrix
    rho_tilde = _YY @ np.conj(m) @ _YY
    w = np.linalg.eigvals(m @ rho_tilde)
    # tiny negative real parts are roundoff on a nonnegative spectrum
    lam = np.sqrt(np.clip(np.sort(w.real)[::-1], 0.0, None))
    return float(max(0.0, lam[0] - lam[1] - lam[2] - lam[3]))


@dataclass(frozen=True)
class EntanglementReport:
    """Measures and PPT verdict for one state and one bipartition."""

    negativity: float
    is_ppt: bool
    bipartition: str
    concurrence: float | None = None


def entanglement_report(rho: DensityMatrix, cut) -> EntanglementReport:
    first, second = _split_cut(rho.dims, cut)
    neg = negativity(rho, first)
    conc = concurrence(rho) if rho.dims == (2, 2) else None
    label = f"{list(first)}|{list(second)}"
    return EntanglementReport(negativity=neg, is_ppt=neg == 0.0,
                              bipartition=label, concurrence=conc)


# ---------------------------------------------------------------------------
# channel classifiers
# ---------------------------------------------------------------------------

def _require_qubit_channel(e: Channel):
    if e.in_dim != 2 or e.out_dim != 2:
        raise WrongDims("classifier defined for single-qubit channels")
    if not e.is_cp:
        raise NotCP("classifier requires a completely positive channel")
    if not e.is_tp:
        raise ValidationError("classifier requires a trace-preserving channel")


def choi_state(e: Channel) -> DensityMatrix:
    """(e (x) id)[phi+]: separable iff the channel is entanglement breaking."""
    out = apply(tensor(e, identity_channel(2)), bell_phi_plus())
    return DensityMatrix(out, (2, 2))


@dataclass(frozen=True)
class EbReport:
    is_eb: bool
    choi_min_pt_eigenvalue: float
    choi_negativity: float

    def __bool__(self):
        return self.is_eb


def is_entanglement_breaking(e: Channel) -> EbReport:
    """Decide entanglement breaking through the Choi state (exact in 2x2)."""
    _require_qubit_channel(e)
    state = choi_state(e)
    w = pt_eigenvalues(state, (0,))
    neg = w[w < -PT_CLAMP]
    return EbReport(
        is_eb=neg.size == 0,
        choi_min_pt_eigenvalue=float(w[0]),
        choi_negativity=float(-neg.sum()) if neg.size else 0.0,
    )


@dataclass(frozen=True)
class SearchBudget:
    """Sampling and refinement budget for the annihilation search.

    Minima: samples >= 100; the refinement knobs may be zero (sampling only).
    """

    samples: int = 2000
    refine_restarts: int = 10
    refine_max_iter: int = 200

    def __post_init__(self):
        if self.samples < MIN_EA_SAMPLES:
            raise BudgetTooSmall(
                f"need at least {MIN_EA_SAMPLES} samples, got {self.samples}"
            )
        if self.refine_restarts < 0 or self.refine_max_iter < 0:
            raise BudgetTooSmall("refinement knobs must be nonnegative")


@dataclass(frozen=True)
class EaCertificate:
    """Outcome of the annihilation search; never a proof, only a resolution."""

    verdict: str  # "annihilating_at_resolution" | "not_annihilating"
    min_pt_eigenvalue: float
    samples_used: int
    refinement_steps: int
    witness: PureState | None = None

    @property
    def is_annihilating(self) -> bool:
        return self.verdict == "annihilating_at_resolution"


def _chart_state(x: np.ndarray) -> np.ndarray:
    """Six real parameters -> normalized two-qubit amplitudes (exact norm)."""
    t1, t2, t3, p1, p2, p3 = x
    s1, s2 = math.sin(t1), math.sin(t2)
    return np.array(
        [
            math.cos(t1),
            s1 * math.cos(t2) * np.exp(1j * p1),
            s1 * s2 * math.cos(t3) * np.exp(1j * p2),
            s1 * s2 * math.sin(t3) * np.exp(1j * p3),
        ],
        dtype=complex,
    )


def _chart_params(psi: np.ndarray) -> np.ndarray:
    """Inverse chart (up to global phase)."""
    if abs(psi[0]) > 1e-12:
        psi = psi * np.exp(-1j * np.angle(psi[0]))
    r = np.abs(psi)
    t1 = math.atan2(math.sqrt(r[1] ** 2 + r[2] ** 2 + r[3] ** 2), r[0])
    t2 = math.atan2(math.sqrt(r[2] ** 2 + r[3] ** 2), r[1])
    t3 = math.atan2(r[3], r[2])
    return np.array([t1, t2, t3, np.angle(psi[1]), np.angle(psi[2]), np.angle(psi[3])])


def _pt_min_eigs(superop: np.ndarray, psis: np.ndarray) -> np.ndarray:
    """Min PT eigenvalue of map[|psi><psi|] for a batch of two-qubit kets."""
    rhos = psis[:, :, None] * np.conj(psis[:, None, :])
    vecs = rhos.transpose(0, 2, 1).reshape(-1, 16)  # column-stacking per row
    outs = (vecs @ superop.T).reshape(-1, 4, 4).transpose(0, 2, 1)
    pts = outs.reshape(-1, 2, 2, 2, 2).transpose(0, 1, 4, 3, 2).reshape(-1, 4, 4)
    pts = 0.5 * (pts + np.conj(pts.transpose(0, 2, 1)))
    return np.linalg.eigvalsh(pts)[:, 0]


def is_entanglement_annihilating(e: Channel,
                                 budget: SearchBudget | None = None,
                                 seed: int = 0,
                                 *key: int) -> EaCertificate:
    """Search for a pure two-qubit input whose image under e (x) e stays NPT.

    Convexity reduces the search to pure inputs: the image of a mixture is
    the mixture of pure-input images, so if every pure image is separable
    the channel annihilates all entanglement.  Haar samples (one derived
    generator per sample index, so results are schedule-independent) feed a
    Nelder-Mead polish of the worst candidates; the verdict is taken at the
    -1e-9 resolution of the partial-transpose spectrum.
    """
    _require_qubit_channel(e)
    budget = budget or SearchBudget()

    pair = tensor(e, e)
    superop = pair.superop

    n = budget.samples
    psis = np.empty((n, 4), dtype=complex)
    for i in range(n):
        rng = derived_rng(seed, *key, i)
        v = rng.standard_normal(4) + 1j * rng.standard_normal(4)
        psis[i] = v / np.linalg.norm(v)
    mins = _pt_min_eigs(superop, psis)

    best_idx = int(np.argmin(mins))
    best_val = float(mins[best_idx])
    best_psi = psis[best_idx]
    steps = 0

    if best_val >= EA_WITNESS_TOL and budget.refine_restarts > 0:
        # sampling found nothing: polish the worst candidates before certifying
        def objective(x):
            return float(_pt_min_eigs(superop, _chart_state(x)[None, :])[0])

        order = np.argsort(mins)[: budget.refine_restarts]
        for idx in order:
            res = minimize(objective, _chart_params(psis[idx]),
                           method="Nelder-Mead",
                           options={"maxiter": budget.refine_max_iter,
                                    "xatol": 1e-10, "fatol": 1e-12})
            steps += int(res.nit)
            if res.fun < best_val:
                best_val = float(res.fun)
                best_psi = _chart_state(res.x)
            if best_val < EA_WITNESS_TOL:
                break

    if best_val < EA_WITNESS_TOL:
        return EaCertificate(
            verdict="not_annihilating",
            min_pt_eigenvalue=best_val,
            samples_used=n,
            refinement_steps=steps,
            witness=PureState(best_psi, (2, 2)),
        )
    return EaCertificate(
        verdict="annihilating_at_resolution",
        min_pt_eigenvalue=best_val,
        samples_used=n,
        refinement_steps=steps,
    )


# ---------------------------------------------------------------------------
# inaccessible entanglement
# ---------------------------------------------------------------------------

SYSTEM_CUT = (0, 1)    # (env_A, A) | (B, env_B) on the four-qubit register
AB_SUBSYSTEMS = (1, 2)


def inaccessible_entanglement(rho_full: DensityMatrix) -> float:
    """Negativity across the (env_A A | B env_B) cut minus the negativity of
    the reduced AB state: entanglement present in the full register but not
    visible in the system alone.  Nonnegative up to eigensolver noise."""
    if rho_full.dims != (2, 2, 2, 2):
        raise WrongDims(f"expected a four-qubit register, got dims {rho_full.dims}")
    full = negativity(rho_full, SYSTEM_CUT)
    reduced = partial_trace(rho_full, AB_SUBSYSTEMS)
    return full - negativity(reduced, (0,))
