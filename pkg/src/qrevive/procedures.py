"""End-to-end pipelines: revival maps, the inverse-channel protocol, the
damping-parameter region scan, and the entanglement bookkeeping audit.

Four-qubit layouts use the factor order (env_A, A, B, env_B); the
separated-parties cut is {0,1} | {2,3} and the system sits at {1,2}.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .channels import (
    CavityParams,
    Channel,
    GadParams,
    apply,
    cavity_channel,
    compose,
    decay_probability,
    gad,
    gad_dilation_unitary,
    identity_channel,
    invert,
    tensor,
)
from .entanglement import (
    AB_SUBSYSTEMS,
    SYSTEM_CUT,
    SearchBudget,
    concurrence,
    is_entanglement_annihilating,
    is_entanglement_breaking,
    negativity,
)
from .errors import BadTimes, NonInvertible, RangeError, WrongDims
from .linalg import dag, frobenius_distance, kron
from .states import (
    DensityMatrix,
    PureState,
    derived_rng,
    min_eigenvalue,
    partial_trace,
    product_state,
    thermal_env_state,
)

#: Below this survival probability the cavity map counts as non-invertible.
INVERTIBILITY_THRESHOLD = 1e-10

#: Candidate revival start times must keep the superoperator this well conditioned.
CANDIDATE_COND_CAP = 1e8


# ---------------------------------------------------------------------------
# first procedure: invert the reduced dynamics at t_i, evolve to t_f
# ---------------------------------------------------------------------------

def revival_factor(p: CavityParams, t_i: float, t_f: float) -> Channel:
    """Single-qubit map E(t_f) o E(t_i)^{-1}; trace preserving, generally
    not even positive once t_i lies past an entanglement death point."""
    if t_i < 0 or t_f < t_i:
        raise BadTimes(f"need 0 <= t_i <= t_f, got t_i={t_i}, t_f={t_f}")
    if decay_probability(t_i, p) <= INVERTIBILITY_THRESHOLD:
        raise NonInvertible(
            f"survival probability at t_i={t_i} is below {INVERTIBILITY_THRESHOLD}"
        )
    return compose(cavity_channel(t_f, p), invert(cavity_channel(t_i, p)))


def revival_map(p: CavityParams, t_i: float, t_f: float) -> Channel:
    """Two-qubit revival map: the same local factor on each side."""
    psi = revival_factor(p, t_i, t_f)
    return tensor(psi, psi)


def nonpositivity_witness(e: Channel, samples: int = 1000,
                          seed: int = 0, *key: int) -> tuple[PureState, float]:
    """Sample pure inputs and return the one with the lowest output eigenvalue.

    A value below zero exhibits non-positivity of the map.
    """
    d = e.in_dim
    best_val = np.inf
    best_psi = None
    for i in range(samples):
        rng = derived_rng(seed, *key, i)
        v = rng.standard_normal(d) + 1j * rng.standard_normal(d)
        v /= np.linalg.norm(v)
        out = apply(e, np.outer(v, np.conj(v)))
        val = min_eigenvalue(out)
        if val < best_val:
            best_val = val
            best_psi = v
    return PureState(best_psi, (d,)), float(best_val)


@dataclass(frozen=True)
class TrajectoryPoint:
    t: float
    P: float
    concurrence: float
    negativity: float
    invertible: bool


@dataclass(frozen=True)
class ExceedingPair:
    """A death instant t_i and a later instant t_f where the system state is
    again entangled; the attached revival map carries rho(t_i) to rho(t_f)."""

    t_i: float
    t_f: float
    concurrence_i: float
    concurrence_f: float
    negativity_i: float
    negativity_f: float
    full_cut_negativity: float  # conserved across the joint unitary evolution
    revival: Channel
    reproduction_residual: float


@dataclass(frozen=True)
class Procedure1Result:
    params: CavityParams
    points: list[TrajectoryPoint]
    pairs: list[ExceedingPair]
    death_tol: float
    exceed_threshold: float


def _evolve(rho0: DensityMatrix, p: CavityParams, t: float) -> DensityMatrix:
    e = cavity_channel(t, p)
    return DensityMatrix(apply(tensor(e, e), rho0), (2, 2))


def procedure1_trajectory(rho0: DensityMatrix,
                          p: CavityParams,
                          t_grid: Sequence[float],
                          candidates: Sequence[float] | None = None,
                          death_tol: float = 1e-6,
                          exceed_threshold: float = 0.01,
                          cond_cap: float = CANDIDATE_COND_CAP) -> Procedure1Result:
    """Evolve rho0 under the local cavity dynamics and report every pair
    (t_i, t_f) on the candidate list where entanglement has died at t_i yet
    exceeds the threshold at t_f.

    Candidate start times additionally require P(t_i) above the
    invertibility threshold and a superoperator condition number below
    cond_cap, which keeps the attached revival maps numerically meaningful
    near (but not at) the zeros of P.
    """
    if rho0.dims != (2, 2):
        raise WrongDims(f"initial state must be two qubits, got dims {rho0.dims}")
    t_grid = [float(t) for t in t_grid]
    candidates = t_grid if candidates is None else [float(t) for t in candidates]

    points = []
    for t in t_grid:
        P = decay_probability(t, p)
        rho_t = _evolve(rho0, p, t)
        points.append(TrajectoryPoint(
            t=t, P=P,
            concurrence=concurrence(rho_t),
            negativity=negativity(rho_t, (0,)),
            invertible=P > INVERTIBILITY_THRESHOLD,
        ))

    full_cut = negativity(rho0, (0,))  # equals the conserved joint-cut value

    cand = []
    for t in candidates:
        P = decay_probability(t, p)
        rho_t = _evolve(rho0, p, t)
        cand.append((t, P, concurrence(rho_t), negativity(rho_t, (0,)), rho_t))

    starts = [c for c in cand
              if c[2] <= death_tol
              and c[1] > INVERTIBILITY_THRESHOLD
              and np.linalg.cond(cavity_channel(c[0], p).superop) <= cond_cap]
    ends = [c for c in cand if c[2] >= exceed_threshold]

    pairs = []
    inv_cache: dict[float, Channel] = {}
    for (t_i, P_i, c_i, n_i, rho_i) in starts:
        if t_i not in inv_cache:
            inv_cache[t_i] = invert(cavity_channel(t_i, p))
        inv_i = inv_cache[t_i]
        for (t_f, P_f, c_f, n_f, rho_f) in ends:
            if t_f <= t_i:
                continue
            psi = compose(cavity_channel(t_f, p), inv_i)
            rev = tensor(psi, psi)
            residual = frobenius_distance(apply(rev, rho_i), rho_f.matrix)
            pairs.append(ExceedingPair(
                t_i=t_i, t_f=t_f,
                concurrence_i=c_i, concurrence_f=c_f,
                negativity_i=n_i, negativity_f=n_f,
                full_cut_negativity=full_cut,
                revival=rev,
                reproduction_residual=residual,
            ))
    return Procedure1Result(params=p, points=points, pairs=pairs,
                            death_tol=death_tol, exceed_threshold=exceed_threshold)


# ---------------------------------------------------------------------------
# second procedure: undo one local damping leg
# ---------------------------------------------------------------------------

def procedure2_channel_level(rho: DensityMatrix,
                             g: GadParams) -> tuple[np.ndarray, np.ndarray]:
    """Channel-level identity behind the protocol.

    lhs = (E^{-1} (x) id)[(E (x) E)[rho]],  rhs = (id (x) E)[rho]; the two are
    equal whenever the damping map E is invertible (gamma < 1).
    """
    if rho.dims != (2, 2):
        raise WrongDims(f"expected a two-qubit state, got dims {rho.dims}")
    if g.gamma >= 1.0:
        raise NonInvertible("damping map is not invertible at gamma = 1")
    e = gad(g)
    ident = identity_channel(2)
    both = apply(tensor(e, e), rho)
    lhs = apply(tensor(invert(e), ident), both)
    rhs = apply(tensor(ident, e), rho)
    return lhs, rhs


@dataclass(frozen=True)
class PipelineStates:
    """The states along the physical realization of the inverse map.

    rho_full is the initial joint state omega (x) rho_AB (x) omega; primes
    follow the two unitary stages (forward damping on both pairs, then the
    inverse leg on env_A + A alone).
    """

    rho_AB: DensityMatrix
    rho_full: DensityMatrix
    rho_full_prime: DensityMatrix
    rho_AB_prime: DensityMatrix
    rho_full_dprime: DensityMatrix
    rho_AB_dprime: DensityMatrix


def procedure2_stinespring(rho: DensityMatrix, g: GadParams) -> PipelineStates:
    """Realize (E^{-1} (x) id) physically: dilate both dampings to pair
    unitaries, run them forward, then run the env_A + A unitary backwards.

    The exchange unitary is symmetric under swapping its two qubits, so the
    same 4x4 block serves the (env_A, A) pair and the (B, env_B) pair.
    """
    if rho.dims != (2, 2):
        raise WrongDims(f"expected a two-qubit state, got dims {rho.dims}")
    if g.gamma >= 1.0:
        raise NonInvertible("damping map is not invertible at gamma = 1")

    omega = thermal_env_state(g.n)
    rho_full = product_state(omega, rho, omega)

    u_pair = gad_dilation_unitary(g.gamma)
    eye4 = np.eye(4, dtype=complex)

    u_forward = kron(u_pair, u_pair)
    m_prime = u_forward @ rho_full.matrix @ dag(u_forward)
    full_prime = DensityMatrix(m_prime, (2, 2, 2, 2))
    ab_prime = partial_trace(full_prime, AB_SUBSYSTEMS)

    u_back = kron(dag(u_pair), eye4)
    m_dprime = u_back @ m_prime @ dag(u_back)
    full_dprime = DensityMatrix(m_dprime, (2, 2, 2, 2))
    ab_dprime = partial_trace(full_dprime, AB_SUBSYSTEMS)

    return PipelineStates(
        rho_AB=rho,
        rho_full=rho_full,
        rho_full_prime=full_prime,
        rho_AB_prime=ab_prime,
        rho_full_dprime=full_dprime,
        rho_AB_dprime=ab_dprime,
    )


# ---------------------------------------------------------------------------
# damping-parameter region scan
# ---------------------------------------------------------------------------

CLASS_NONINVERTIBLE = "NONINVERTIBLE"
CLASS_EB = "EB"
CLASS_EA_NOT_EB = "EA_NOT_EB"
CLASS_NOT_EA = "NOT_EA"


@dataclass(frozen=True)
class RegionCell:
    gamma: float
    n: float
    label: str
    invertible: bool
    is_eb: bool
    is_ea: bool
    choi_min_pt_eig: float
    ea_min_pt_eig: float
    witness: PureState | None = None


@dataclass(frozen=True)
class RegionGrid:
    gamma_axis: np.ndarray
    n_axis: np.ndarray
    cells: list[list[RegionCell]]  # cells[i][j] at (gamma_axis[i], n_axis[j])
    seed: int
    budget: SearchBudget

    def flat(self) -> list[RegionCell]:
        return [c for row in self.cells for c in row]


def _classify(invertible: bool, eb: bool, ea: bool) -> str:
    if not invertible:
        return CLASS_NONINVERTIBLE
    if eb:
        return CLASS_EB
    if ea:
        return CLASS_EA_NOT_EB
    return CLASS_NOT_EA


def gad_region_scan(gamma_axis: Sequence[float],
                    n_axis: Sequence[float],
                    budget: SearchBudget | None = None,
                    seed: int = 0,
                    cond_cap: float = 1e12) -> RegionGrid:
    """Classify every (gamma, n) cell of the damping plane.

    Per cell: invertibility (gamma < 1 with a condition-number gate),
    entanglement breaking through the Choi state, annihilation through the
    certified search with a per-cell derived seed.  The breaking-implies-
    annihilating inclusion is left to the classifiers rather than imposed,
    so it stays a testable property of the scan.
    """
    budget = budget or SearchBudget(samples=500)
    gamma_axis = np.asarray([float(g) for g in gamma_axis])
    n_axis = np.asarray([float(n) for n in n_axis])
    if gamma_axis.min() < 0 or gamma_axis.max() > 1 or n_axis.min() < 0 or n_axis.max() > 1:
        raise RangeError("scan grid must lie within [0, 1] x [0, 1]")

    cells: list[list[RegionCell]] = []
    for i, gamma in enumerate(gamma_axis):
        row = []
        for j, n in enumerate(n_axis):
            e = gad(GadParams(float(gamma), float(n)))
            invertible = gamma < 1.0 and np.linalg.cond(e.superop) <= cond_cap
            eb = is_entanglement_breaking(e)
            cert = is_entanglement_annihilating(e, budget, seed, i, j)
            row.append(RegionCell(
                gamma=float(gamma), n=float(n),
                label=_classify(invertible, eb.is_eb, cert.is_annihilating),
                invertible=invertible,
                is_eb=eb.is_eb,
                is_ea=cert.is_annihilating,
                choi_min_pt_eig=eb.choi_min_pt_eigenvalue,
                ea_min_pt_eig=cert.min_pt_eigenvalue,
                witness=cert.witness,
            ))
        cells.append(row)
    return RegionGrid(gamma_axis=gamma_axis, n_axis=n_axis, cells=cells,
                      seed=seed, budget=budget)


# ---------------------------------------------------------------------------
# conservation audit
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class AuditCheck:
    """One bookkeeping check: equalities carry |defect| in `value`,
    inequalities carry the signed margin (passing means value >= -tol)."""

    name: str
    kind: str  # "residual" | "margin"
    value: float

    def passed(self, tol: float = 1e-9) -> bool:
        return self.value <= tol if self.kind == "residual" else self.value >= -tol


@dataclass(frozen=True)
class StageRow:
    """Both bookkeeping columns for one pipeline stage."""

    stage: str
    full_cut_negativity: float
    ab_negativity: float


@dataclass(frozen=True)
class AuditReport:
    stages: list[StageRow]
    checks: list[AuditCheck]

    def passed(self, tol: float = 1e-9) -> bool:
        return all(c.passed(tol) for c in self.checks)

    def max_residual(self) -> float:
        vals = [c.value if c.kind == "residual" else -c.value for c in self.checks]
        return max(vals) if vals else 0.0


def _stage_rows(named_fulls: list[tuple[str, DensityMatrix]]) -> list[StageRow]:
    rows = []
    for name, full in named_fulls:
        if full.dims != (2, 2, 2, 2):
            raise WrongDims(f"stage '{name}' is not a four-qubit state")
        ab = partial_trace(full, AB_SUBSYSTEMS)
        rows.append(StageRow(
            stage=name,
            full_cut_negativity=negativity(full, SYSTEM_CUT),
            ab_negativity=negativity(ab, (0,)),
        ))
    return rows


def conservation_audit(pipeline: PipelineStates | Sequence[DensityMatrix]) -> AuditReport:
    """Audit the entanglement bookkeeping along a four-qubit evolution.

    The cut negativity between (env_A A) and (B env_B) must stay constant
    under the pairwise-local unitaries, must majorize the reduced system
    negativity at every stage (partial trace is a local operation), and for
    a product-environment start must equal the system negativity exactly.
    """
    if isinstance(pipeline, PipelineStates):
        named = [("initial", pipeline.rho_full),
                 ("after_forward", pipeline.rho_full_prime),
                 ("after_inverse_leg", pipeline.rho_full_dprime)]
        rows = _stage_rows(named)
        ab0 = negativity(pipeline.rho_AB, (0,))
        checks = [
            AuditCheck("ancilla_attachment_equality", "residual",
                       abs(rows[0].full_cut_negativity - ab0)),
            AuditCheck("local_unitary_invariance", "residual",
                       max(abs(rows[1].full_cut_negativity - rows[0].full_cut_negativity),
                           abs(rows[2].full_cut_negativity - rows[1].full_cut_negativity))),
            AuditCheck("full_cut_constancy", "residual",
                       max(abs(r.full_cut_negativity - ab0) for r in rows)),
        ]
    else:
        named = [(f"stage_{k}", s) for k, s in enumerate(pipeline)]
        if not named:
            raise WrongDims("audit needs at least one four-qubit state")
        rows = _stage_rows(named)
        ref = rows[0].full_cut_negativity
        checks = [
            AuditCheck("full_cut_constancy", "residual",
                       max(abs(r.full_cut_negativity - ref) for r in rows)),
        ]

    checks.append(AuditCheck(
        "partial_trace_monotonicity", "margin",
        min(r.full_cut_negativity - r.ab_negativity for r in rows)))
    checks.append(AuditCheck(
        "inaccessible_nonnegativity", "margin",
        min(r.full_cut_negativity - r.ab_negativity for r in rows)))
    return AuditReport(stages=rows, checks=checks)
