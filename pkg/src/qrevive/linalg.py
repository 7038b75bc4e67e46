"""Dense complex linear algebra used by every other module.

All matrices are numpy arrays of dtype complex128 in row-major (C) order.
Every equality assertion elsewhere in the package goes through
:func:`frobenius_distance`; no module rolls its own comparison.
"""

from __future__ import annotations

import numpy as np

from .errors import DimensionCap, NonHermitian, NoConvergence, ShapeMismatch, Singular

#: Largest admissible row/column count of a Kronecker product result.
KRON_DIM_CAP = 4096

#: Hermiticity test threshold (max-norm of h - h^dagger).
HERMITICITY_TOL = 1e-10

#: Inversion is refused above this 2-norm condition number.
CONDITION_CAP = 1e12

I2 = np.eye(2, dtype=complex)
X = np.array([[0, 1], [1, 0]], dtype=complex)
Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
Z = np.array([[1, 0], [0, -1]], dtype=complex)

#: Single-qubit Pauli basis in the fixed order used by transfer matrices.
PAULIS = (I2, X, Y, Z)


def as_matrix(a, *, square: bool = False) -> np.ndarray:
    """Coerce input to a finite complex 2-D array, raising on NaN/Inf."""
    m = np.asarray(a, dtype=complex)
    if m.ndim != 2:
        raise ShapeMismatch(f"expected a 2-D matrix, got ndim={m.ndim}")
    if not np.all(np.isfinite(m)):
        raise ShapeMismatch("matrix contains NaN or Inf entries")
    if square and m.shape[0] != m.shape[1]:
        raise ShapeMismatch(f"expected a square matrix, got shape {m.shape}")
    return m


def dag(a: np.ndarray) -> np.ndarray:
    """Conjugate transpose."""
    return np.conj(a.T)


def kron(a, b, *, cap: int = KRON_DIM_CAP) -> np.ndarray:
    """Kronecker product a (x) b with the left factor as the slow index.

    Raises DimensionCap when the product would exceed `cap` rows or columns;
    the cap keeps accidental exponential blowups from allocating memory.
    """
    a = as_matrix(a)
    b = as_matrix(b)
    rows = a.shape[0] * b.shape[0]
    cols = a.shape[1] * b.shape[1]
    if rows > cap or cols > cap:
        raise DimensionCap(
            f"kron result {rows}x{cols} exceeds the dimension cap {cap}"
        )
    return np.kron(a, b)


def kron_all(*mats, cap: int = KRON_DIM_CAP) -> np.ndarray:
    """Left-to-right Kronecker product of several matrices."""
    out = as_matrix(mats[0])
    for m in mats[1:]:
        out = kron(out, m, cap=cap)
    return out


def hermitian_eigen(h) -> tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition of a Hermitian matrix.

    Returns (eigenvalues ascending, eigenvector columns). The input must be
    Hermitian to within HERMITICITY_TOL in the max norm.
    """
    h = as_matrix(h, square=True)
    defect = float(np.max(np.abs(h - dag(h)))) if h.size else 0.0
    if defect > HERMITICITY_TOL:
        raise NonHermitian(f"max |h - h^dagger| = {defect:.3e} > {HERMITICITY_TOL}")
    try:
        vals, vecs = np.linalg.eigh(h)
    except np.linalg.LinAlgError as exc:  # iteration cap inside LAPACK
        raise NoConvergence(str(exc)) from exc
    return vals.real, vecs


def eigvalsh(h) -> np.ndarray:
    """Eigenvalues only, same Hermiticity contract as hermitian_eigen."""
    return hermitian_eigen(h)[0]


def invert(a) -> tuple[np.ndarray, float]:
    """Matrix inverse plus its 2-norm condition number.

    Raises Singular when the smallest singular value is below
    1e-14 * ||a||_2 or the condition number exceeds CONDITION_CAP.
    """
    a = as_matrix(a, square=True)
    s = np.linalg.svd(a, compute_uv=False)
    smax = float(s[0])
    smin = float(s[-1])
    if smax == 0.0 or smin < 1e-14 * smax:
        raise Singular(f"smallest singular value {smin:.3e} below 1e-14 * ||a||")
    cond = smax / smin
    if cond > CONDITION_CAP:
        raise Singular(f"condition number {cond:.3e} exceeds {CONDITION_CAP:.0e}")
    return np.linalg.inv(a), cond


def frobenius_distance(a, b) -> float:
    """Frobenius norm of (a - b); the package-wide equality metric."""
    a = as_matrix(a)
    b = as_matrix(b)
    if a.shape != b.shape:
        raise ShapeMismatch(f"shape mismatch: {a.shape} vs {b.shape}")
    return float(np.linalg.norm(a - b))


def frobenius_norm(a) -> float:
    return float(np.linalg.norm(as_matrix(a)))


def is_hermitian(a, tol: float = HERMITICITY_TOL) -> bool:
    a = np.asarray(a)
    return a.shape[0] == a.shape[1] and float(np.max(np.abs(a - dag(a)))) <= tol
