"""Density matrices over qubit registers with subsystem bookkeeping.

A DensityMatrix carries the ordered subsystem dimensions next to its
matrix; partial trace / partial transpose address subsystems by index.
The four-qubit simulations in :mod:`qrevive.procedures` fix the factor
order (env_A, A, B, env_B), so the system bipartition is {0,1} | {2,3}.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import BadIndex, RangeError, ValidationError, WrongDims
from .linalg import as_matrix, dag, kron_all

HERM_TOL = 1e-10
TRACE_TOL = 1e-10
PSD_SLACK = 1e-10
NORM_TOL = 1e-12


def derived_rng(seed: int, *key: int) -> np.random.Generator:
    """Generator seeded deterministically from (seed, *key).

    Sampling loops derive one generator per work item from the master seed
    and the item index, so results do not depend on evaluation order.
    """
    return np.random.default_rng((int(seed),) + tuple(int(k) for k in key))


def _check_dims(dims: Sequence[int], size: int) -> tuple[int, ...]:
    dims = tuple(int(d) for d in dims)
    if not dims or any(d < 2 for d in dims):
        raise WrongDims(f"subsystem dimensions must all be >= 2, got {dims}")
    prod = int(np.prod(dims))
    if prod != size:
        raise WrongDims(f"dims {dims} multiply to {prod}, matrix size is {size}")
    return dims


@dataclass(frozen=True)
class StateDiagnostics:
    """Result of validate(): a verdict plus the three defect numbers."""

    passed: bool
    hermiticity_defect: float
    trace_defect: float
    min_eigenvalue: float


@dataclass(frozen=True)
class DensityMatrix:
    """Positive unit-trace Hermitian matrix tagged with subsystem dims."""

    matrix: np.ndarray
    dims: tuple[int, ...]

    def __post_init__(self):
        m = as_matrix(self.matrix, square=True)
        dims = _check_dims(self.dims, m.shape[0])
        object.__setattr__(self, "matrix", m)
        object.__setattr__(self, "dims", dims)
        diag = validate_matrix(m)
        if not diag.passed:
            raise ValidationError(
                "not a density matrix: hermiticity defect "
                f"{diag.hermiticity_defect:.2e}, trace defect "
                f"{diag.trace_defect:.2e}, min eigenvalue {diag.min_eigenvalue:.2e}"
            )

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.matrix, dtype=dtype)


@dataclass(frozen=True)
class PureState:
    """State vector with subsystem dims; unit norm enforced at construction."""

    amplitudes: np.ndarray
    dims: tuple[int, ...]

    def __post_init__(self):
        v = np.asarray(self.amplitudes, dtype=complex).reshape(-1)
        if not np.all(np.isfinite(v)):
            raise ValidationError("amplitudes contain NaN or Inf")
        dims = _check_dims(self.dims, v.size)
        norm = float(np.linalg.norm(v))
        if abs(norm - 1.0) > NORM_TOL:
            raise ValidationError(f"norm {norm} deviates from 1 by more than {NORM_TOL}")
        object.__setattr__(self, "amplitudes", v)
        object.__setattr__(self, "dims", dims)

    def to_density(self) -> DensityMatrix:
        return DensityMatrix(np.outer(self.amplitudes, np.conj(self.amplitudes)), self.dims)


def validate_matrix(m: np.ndarray) -> StateDiagnostics:
    """Density-matrix diagnostics for a bare matrix; never raises."""
    m = np.asarray(m, dtype=complex)
    herm = float(np.max(np.abs(m - dag(m))))
    trace = float(abs(np.trace(m) - 1.0))
    w = np.linalg.eigvalsh(0.5 * (m + dag(m)))
    min_eig = float(w[0])
    passed = herm <= HERM_TOL and trace <= TRACE_TOL and min_eig >= -PSD_SLACK
    return StateDiagnostics(passed, herm, trace, min_eig)


def validate(rho: DensityMatrix | np.ndarray) -> StateDiagnostics:
    """Pass/fail verdict with (hermiticity defect, trace defect, min eigenvalue)."""
    m = rho.matrix if isinstance(rho, DensityMatrix) else rho
    return validate_matrix(m)


def maximally_entangled(d: int) -> PureState:
    """(1/sqrt(d)) sum_j |jj> on a d x d bipartite register."""
    if d < 2:
        raise RangeError(f"local dimension must be >= 2, got {d}")
    v = np.zeros(d * d, dtype=complex)
    v[:: d + 1] = 1.0 / np.sqrt(d)
    return PureState(v, (d, d))


def bell_phi_plus() -> DensityMatrix:
    """Two-qubit |phi+><phi+| as a density matrix."""
    return maximally_entangled(2).to_density()


def thermal_env_state(n: float) -> DensityMatrix:
    """diag(1-n, n): qubit environment with excited-state population n."""
    if not 0.0 <= n <= 1.0:
        raise RangeError(f"population n must lie in [0, 1], got {n}")
    return DensityMatrix(np.diag([1.0 - n, n]).astype(complex), (2,))


def werner(p: float) -> DensityMatrix:
    """p |phi+><phi+| + (1-p) I/4; the calibration family for the measures."""
    if not 0.0 <= p <= 1.0:
        raise RangeError(f"mixing parameter p must lie in [0, 1], got {p}")
    phi = bell_phi_plus().matrix
    return DensityMatrix(p * phi + (1.0 - p) * np.eye(4) / 4.0, (2, 2))


def random_pure(dims: Sequence[int], seed: int, *key: int) -> PureState:
    """Haar-random pure state; deterministic for fixed (seed, *key)."""
    dims = tuple(int(d) for d in dims)
    n = int(np.prod(dims))
    rng = derived_rng(seed, *key)
    v = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    return PureState(v / np.linalg.norm(v), dims)


def random_density(dims: Sequence[int], seed: int, *key: int) -> DensityMatrix:
    """Random full-rank mixed state: trace out an equal-size purifying ancilla."""
    dims = tuple(int(d) for d in dims)
    n = int(np.prod(dims))
    rng = derived_rng(seed, *key)
    g = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    m = g @ dag(g)
    return DensityMatrix(m / np.trace(m), dims)


def product_state(*factors: DensityMatrix) -> DensityMatrix:
    """Tensor product of density matrices, dims concatenated in order."""
    mat = kron_all(*(f.matrix for f in factors))
    dims = tuple(d for f in factors for d in f.dims)
    return DensityMatrix(mat, dims)


def _as_tensor(mat: np.ndarray, dims: Sequence[int]) -> np.ndarray:
    dims = tuple(dims)
    return mat.reshape(dims + dims)


def _check_indices(indices: Iterable[int], n: int) -> tuple[int, ...]:
    idx = tuple(int(i) for i in indices)
    if not idx:
        raise BadIndex("empty subsystem index set")
    if len(set(idx)) != len(idx):
        raise BadIndex(f"repeated subsystem index in {idx}")
    if any(i < 0 or i >= n for i in idx):
        raise BadIndex(f"subsystem index out of range 0..{n - 1}: {idx}")
    return idx


def partial_trace_matrix(mat: np.ndarray, dims: Sequence[int],
                         keep: Iterable[int]) -> np.ndarray:
    """Trace out all subsystems not in `keep`; kept dims stay in order."""
    dims = tuple(dims)
    n = len(dims)
    keep = sorted(_check_indices(keep, n))
    t = _as_tensor(np.asarray(mat, dtype=complex), dims)
    row = list(range(n))
    col = list(range(n, 2 * n))
    for i in range(n):
        if i not in keep:
            col[i] = row[i]  # contract the traced subsystem
    out_axes = [row[i] for i in keep] + [n + i for i in keep]
    t = np.einsum(t, row + col, out_axes)
    d_keep = int(np.prod([dims[i] for i in keep]))
    return t.reshape(d_keep, d_keep)


def partial_trace(rho: DensityMatrix, keep: Iterable[int]) -> DensityMatrix:
    keep = sorted(_check_indices(keep, len(rho.dims)))
    mat = partial_trace_matrix(rho.matrix, rho.dims, keep)
    return DensityMatrix(mat, tuple(rho.dims[i] for i in keep))


def partial_transpose_matrix(mat: np.ndarray, dims: Sequence[int],
                             subsystems: int | Iterable[int]) -> np.ndarray:
    """Transpose the chosen tensor factors of a (possibly non-PSD) matrix."""
    dims = tuple(dims)
    n = len(dims)
    if isinstance(subsystems, (int, np.integer)):
        subsystems = (int(subsystems),)
    subs = _check_indices(subsystems, n)
    t = _as_tensor(np.asarray(mat, dtype=complex), dims)
    axes = list(range(2 * n))
    for i in subs:
        axes[i], axes[n + i] = axes[n + i], axes[i]
    d = int(np.prod(dims))
    return t.transpose(axes).reshape(d, d)


def partial_transpose(rho: DensityMatrix, subsystem: int | Iterable[int]) -> np.ndarray:
    return partial_transpose_matrix(rho.matrix, rho.dims, subsystem)


def bloch_vector(rho: DensityMatrix | np.ndarray) -> np.ndarray:
    """(x, y, z) expectation values of a single-qubit state."""
    m = rho.matrix if isinstance(rho, DensityMatrix) else np.asarray(rho)
    if m.shape != (2, 2):
        raise WrongDims(f"expected a 2x2 matrix, got {m.shape}")
    from .linalg import PAULIS

    return np.array([np.trace(p @ m).real for p in PAULIS[1:]])


def min_eigenvalue(mat: np.ndarray) -> float:
    """Smallest eigenvalue of the Hermitian part (diagnostic helper)."""
    m = np.asarray(mat, dtype=complex)
    return float(np.linalg.eigvalsh(0.5 * (m + dag(m)))[0])


__all__ = [
    "DensityMatrix",
    "PureState",
    "StateDiagnostics",
    "bell_phi_plus",
    "bloch_vector",
    "derived_rng",
    "maximally_entangled",
    "min_eigenvalue",
    "partial_trace",
    "partial_trace_matrix",
    "partial_transpose",
    "partial_transpose_matrix",
    "product_state",
    "random_density",
    "random_pure",
    "thermal_env_state",
    "validate",
    "validate_matrix",
    "werner",
]
