"""Linear maps on operators: representations, algebra, and named channels.

The canonical representation is the superoperator acting on
column-vectorized operators (vec stacks columns, so vec(A rho B) =
(B^T kron A) vec(rho)).  Choi matrix, Kraus operators and the Pauli
transfer matrix are derived views, computed eagerly at construction so a
Channel is immutable and cheap to share between threads.

Conventions:

* Choi matrix  J = sum_{kl} |k><l| (x) E[|k><l|]  (input factor first,
  unnormalized: J = d * (id (x) E)[phi+]).  E is CP iff J >= 0 and trace
  preserving iff the partial trace of J over the output factor is the
  identity.
* Pauli transfer matrix  R[i, j] = Tr(sigma_i E[sigma_j]) / 2  with the
  Pauli order (I, X, Y, Z); composition of maps is matrix multiplication
  of their PTMs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    DimensionCap,
    DimensionMismatch,
    NonInvertible,
    NotCP,
    RangeError,
    Singular,
    ValidationError,
)
from .linalg import PAULIS, dag, frobenius_distance, kron
from .linalg import invert as matrix_invert
from .states import DensityMatrix, partial_trace_matrix, thermal_env_state

CP_TOL = 1e-10       # Choi min eigenvalue above -CP_TOL counts as CP
TP_TOL = 1e-10       # max-norm defect of Tr_out(Choi) - I
HP_TOL = 1e-10       # max-norm defect of Choi - Choi^dagger
KRAUS_CUTOFF = 1e-12  # Choi eigenvalues below this are dropped from the Kraus set
SUPEROP_DIM_CAP = 4096


def vec(m: np.ndarray) -> np.ndarray:
    """Column-stacking vectorization."""
    return np.asarray(m, dtype=complex).reshape(-1, order="F")


def unvec(v: np.ndarray, rows: int, cols: int | None = None) -> np.ndarray:
    cols = rows if cols is None else cols
    return np.asarray(v, dtype=complex).reshape(rows, cols, order="F")


def superop_from_kraus(ops) -> np.ndarray:
    """S = sum_i conj(K_i) kron K_i."""
    ops = [np.asarray(k, dtype=complex) for k in ops]
    out_d, in_d = ops[0].shape
    s = np.zeros((out_d * out_d, in_d * in_d), dtype=complex)
    for k in ops:
        s += np.kron(np.conj(k), k)
    return s


def choi_from_superop(s: np.ndarray, in_dim: int, out_dim: int) -> np.ndarray:
    # S[(j,i),(l,k)] = E[|k><l|]_{ij}  ->  J[(k,i),(l,j)]; the axis
    # permutation (3,1,2,0) is an involution, so the inverse reshuffle
    # is the same code.
    s4 = s.reshape(out_dim, out_dim, in_dim, in_dim)
    j4 = s4.transpose(3, 1, 2, 0)
    d = in_dim * out_dim
    return j4.reshape(d, d)


def superop_from_choi(j: np.ndarray, in_dim: int, out_dim: int) -> np.ndarray:
    j4 = j.reshape(in_dim, out_dim, in_dim, out_dim)
    s4 = j4.transpose(3, 1, 2, 0)
    return s4.reshape(out_dim * out_dim, in_dim * in_dim)


def kraus_from_choi(j: np.ndarray, in_dim: int, out_dim: int,
                    cutoff: float = KRAUS_CUTOFF) -> list[np.ndarray]:
    """Eigen-decompose the Choi matrix; one Kraus operator per eigenvalue."""
    w, v = np.linalg.eigh(0.5 * (j + dag(j)))
    scale = max(float(w[-1]), 1.0)
    ops = []
    for lam, col in zip(w, v.T):
        if lam > cutoff * scale:
            ops.append(math.sqrt(float(lam)) * col.reshape(in_dim, out_dim).T)
    return ops


@dataclass(frozen=True)
class KrausRep:
    """Operator-sum view sum_i K_i rho K_i^dagger."""

    operators: tuple[np.ndarray, ...]

    def completeness_defect(self) -> float:
        """max-norm of sum K^dagger K - I (zero for a TP channel)."""
        in_d = self.operators[0].shape[1]
        acc = sum(dag(k) @ k for k in self.operators)
        return float(np.max(np.abs(acc - np.eye(in_d))))


@dataclass(frozen=True)
class PauliTransfer:
    """Real 4x4 transfer matrix of a single-qubit Hermiticity-preserving map."""

    matrix: np.ndarray

    @property
    def determinant(self) -> float:
        return float(np.linalg.det(self.matrix))


def _pauli_vec_basis() -> np.ndarray:
    return np.column_stack([vec(p) for p in PAULIS])


_PAULI_T = _pauli_vec_basis()


def ptm_from_superop(s: np.ndarray) -> np.ndarray:
    return (dag(_PAULI_T) @ s @ _PAULI_T) / 2.0


def superop_from_ptm(r: np.ndarray) -> np.ndarray:
    return _PAULI_T @ np.asarray(r, dtype=complex) @ dag(_PAULI_T) / 2.0


class Channel:
    """A linear map on operators, held as a superoperator with cached views.

    Not every Channel is a physical channel: inverses and the revival maps
    are trace-preserving and Hermiticity-preserving but not CP, and the
    flags record exactly that.
    """

    def __init__(self, superop: np.ndarray, in_dim: int, out_dim: int):
        superop = np.asarray(superop, dtype=complex)
        if superop.shape != (out_dim * out_dim, in_dim * in_dim):
            raise DimensionMismatch(
                f"superoperator shape {superop.shape} does not match "
                f"in_dim={in_dim}, out_dim={out_dim}"
            )
        self.in_dim = int(in_dim)
        self.out_dim = int(out_dim)
        self.superop = superop
        self.choi = choi_from_superop(superop, self.in_dim, self.out_dim)

        herm_defect = float(np.max(np.abs(self.choi - dag(self.choi))))
        self.is_hermitian_preserving = herm_defect <= HP_TOL

        tr_out = partial_trace_matrix(
            self.choi, (self.in_dim, self.out_dim), keep=(0,)
        )
        self.is_tp = float(np.max(np.abs(tr_out - np.eye(self.in_dim)))) <= TP_TOL

        if self.is_hermitian_preserving:
            w = np.linalg.eigvalsh(0.5 * (self.choi + dag(self.choi)))
            self.choi_min_eigenvalue = float(w[0])
            self.is_cp = self.choi_min_eigenvalue >= -CP_TOL
        else:
            self.choi_min_eigenvalue = float("nan")
            self.is_cp = False

        self._kraus = None
        if self.is_cp:
            ops = kraus_from_choi(self.choi, self.in_dim, self.out_dim)
            self._kraus = KrausRep(tuple(ops))

        self._ptm = None
        if self.in_dim == 2 and self.out_dim == 2 and self.is_hermitian_preserving:
            r = ptm_from_superop(superop)
            self._ptm = PauliTransfer(r.real.copy())

    # -- views -------------------------------------------------------------

    @property
    def kraus(self) -> KrausRep | None:
        return self._kraus

    @property
    def ptm(self) -> PauliTransfer | None:
        return self._ptm

    def __repr__(self):
        tags = []
        if self.is_cp:
            tags.append("CP")
        if self.is_tp:
            tags.append("TP")
        if self.is_hermitian_preserving and not self.is_cp:
            tags.append("HP")
        return (f"Channel({self.in_dim}->{self.out_dim}, "
                f"{'+'.join(tags) if tags else 'general'})")


# ---------------------------------------------------------------------------
# constructors
# ---------------------------------------------------------------------------

def channel_from_kraus(ops) -> Channel:
    ops = [np.asarray(k, dtype=complex) for k in ops]
    out_d, in_d = ops[0].shape
    if any(k.shape != (out_d, in_d) for k in ops):
        raise DimensionMismatch("Kraus operators must share one shape")
    return Channel(superop_from_kraus(ops), in_d, out_d)


def channel_from_choi(j: np.ndarray, in_dim: int, out_dim: int) -> Channel:
    return Channel(superop_from_choi(np.asarray(j, dtype=complex), in_dim, out_dim),
                   in_dim, out_dim)


def channel_from_ptm(r: np.ndarray) -> Channel:
    r = np.asarray(r, dtype=float)
    if r.shape != (4, 4):
        raise DimensionMismatch(f"PTM must be 4x4, got {r.shape}")
    return Channel(superop_from_ptm(r), 2, 2)


def channel_from_action(action, in_dim: int, out_dim: int | None = None) -> Channel:
    """Build the superoperator by applying `action` to every matrix unit."""
    out_dim = in_dim if out_dim is None else out_dim
    s = np.zeros((out_dim * out_dim, in_dim * in_dim), dtype=complex)
    for l in range(in_dim):
        for k in range(in_dim):
            unit = np.zeros((in_dim, in_dim), dtype=complex)
            unit[k, l] = 1.0
            s[:, l * in_dim + k] = vec(np.asarray(action(unit), dtype=complex))
    return Channel(s, in_dim, out_dim)


def identity_channel(dim: int = 2) -> Channel:
    return Channel(np.eye(dim * dim, dtype=complex), dim, dim)


def transpose_map(dim: int = 2) -> Channel:
    """Transposition; the canonical positive-but-not-CP map."""
    return channel_from_action(lambda m: m.T, dim)


# ---------------------------------------------------------------------------
# algebra
# ---------------------------------------------------------------------------

def apply(e: Channel, rho) -> np.ndarray:
    """Apply the map to a density matrix or any operator of matching size."""
    m = rho.matrix if isinstance(rho, DensityMatrix) else np.asarray(rho, dtype=complex)
    if m.shape != (e.in_dim, e.in_dim):
        raise DimensionMismatch(
            f"operator shape {m.shape} does not match channel input dim {e.in_dim}"
        )
    return unvec(e.superop @ vec(m), e.out_dim)


def compose(f: Channel, g: Channel) -> Channel:
    """f after g."""
    if g.out_dim != f.in_dim:
        raise DimensionMismatch(
            f"cannot compose: inner dims {g.out_dim} vs {f.in_dim}"
        )
    return Channel(f.superop @ g.superop, g.in_dim, f.out_dim)


def tensor(f: Channel, g: Channel) -> Channel:
    """Factor-wise product: tensor(f, g)[a (x) b] = f[a] (x) g[b].

    The first factor is the slower-varying index, matching the subsystem
    convention of :mod:`qrevive.states`.
    """
    in_d = f.in_dim * g.in_dim
    out_d = f.out_dim * g.out_dim
    if out_d * out_d > SUPEROP_DIM_CAP or in_d * in_d > SUPEROP_DIM_CAP:
        raise DimensionCap(
            f"tensor superoperator {out_d * out_d}x{in_d * in_d} exceeds cap "
            f"{SUPEROP_DIM_CAP}"
        )
    # S[(j,i),(l,k)] factorizes over the two subsystems; interleave indices.
    sf = f.superop.reshape(f.out_dim, f.out_dim, f.in_dim, f.in_dim)
    sg = g.superop.reshape(g.out_dim, g.out_dim, g.in_dim, g.in_dim)
    s = np.einsum("abcd,efgh->aebfcgdh", sf, sg)
    return Channel(s.reshape(out_d * out_d, in_d * in_d), in_d, out_d)


def invert(e: Channel) -> Channel:
    """Linear inverse of the map; trace-preserving but generally not CP."""
    if e.in_dim != e.out_dim:
        raise NonInvertible("only square maps can be inverted")
    try:
        inv, _cond = matrix_invert(e.superop)
    except Singular as exc:
        raise NonInvertible(f"superoperator is numerically singular: {exc}") from exc
    return Channel(inv, e.out_dim, e.in_dim)


def is_cp(e: Channel) -> bool:
    return e.is_cp


def is_tp(e: Channel) -> bool:
    return e.is_tp


def kraus_view(e: Channel) -> KrausRep:
    if not e.is_cp:
        raise NotCP("Kraus view requires a completely positive map")
    return e.kraus


def choi_view(e: Channel) -> np.ndarray:
    return e.choi


def ptm_view(e: Channel) -> PauliTransfer:
    if e.ptm is None:
        raise ValidationError(
            "PTM view requires a Hermiticity-preserving single-qubit map"
        )
    return e.ptm


def channel_distance(f: Channel, g: Channel) -> float:
    return frobenius_distance(f.superop, g.superop)


# ---------------------------------------------------------------------------
# cavity amplitude-decay channel
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CavityParams:
    """Strong-coupling cavity parameters: coupling gamma0, spectral width lam.

    Both rates are in the same inverse-time unit; strong coupling
    (2 gamma0 > lam) keeps D = sqrt(2 gamma0 lam - lam^2) real.
    """

    gamma0: float = 1.0
    lam: float = 0.1

    def __post_init__(self):
        if self.gamma0 <= 0 or self.lam <= 0:
            raise RangeError("gamma0 and lam must be positive")
        if 2.0 * self.gamma0 <= self.lam:
            raise RangeError(
                f"strong coupling requires 2*gamma0 > lam, got "
                f"gamma0={self.gamma0}, lam={self.lam}"
            )

    @property
    def D(self) -> float:
        return math.sqrt(2.0 * self.gamma0 * self.lam - self.lam**2)


def decay_probability(t: float, p: CavityParams) -> float:
    """P(t) = exp(-lam t) [cos(t D / 2) + (lam / D) sin(t D / 2)]^2."""
    if t < 0:
        raise RangeError(f"time must be nonnegative, got {t}")
    u = t * p.D / 2.0
    bracket = math.cos(u) + (p.lam / p.D) * math.sin(u)
    return math.exp(-p.lam * t) * bracket * bracket


def invertibility_zeros(p: CavityParams, n_max: int) -> list[float]:
    """The discrete times t_n = (2/D) [n pi - arctan(D / lam)], n = 1..n_max,
    where P vanishes and the cavity channel stops being invertible."""
    if n_max < 1:
        raise RangeError(f"n_max must be >= 1, got {n_max}")
    shift = math.atan(p.D / p.lam)
    return [(2.0 / p.D) * (n * math.pi - shift) for n in range(1, n_max + 1)]


def cavity_channel(t: float, p: CavityParams) -> Channel:
    """Single-qubit reduced dynamics of a two-level atom in a lossy cavity.

    Entry-wise action (with P = P(t), s = sqrt(P)):

        out[0,0] = rho[1,1] * P
        out[0,1] = rho[1,0] * s
        out[1,0] = rho[0,1] * s
        out[1,1] = rho[0,0] + rho[1,1] * (1 - P)

    implemented literally; note the population that decays sits at index 1
    of the input and the off-diagonals trade places, so at P = 1 the map is
    conjugation by X rather than the identity.  The map is CP and TP for
    every t >= 0.
    """
    P = decay_probability(t, p)
    s = math.sqrt(P)

    def action(rho):
        return np.array(
            [[rho[1, 1] * P, rho[1, 0] * s],
             [rho[0, 1] * s, rho[0, 0] + rho[1, 1] * (1.0 - P)]],
            dtype=complex,
        )

    return channel_from_action(action, 2)


# ---------------------------------------------------------------------------
# generalized amplitude damping
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GadParams:
    """Damping strength gamma and environment excitation n, both in [0, 1]."""

    gamma: float
    n: float = 0.0

    def __post_init__(self):
        if not 0.0 <= self.gamma <= 1.0:
            raise RangeError(f"gamma must lie in [0, 1], got {self.gamma}")
        if not 0.0 <= self.n <= 1.0:
            raise RangeError(f"n must lie in [0, 1], got {self.n}")


def gad_kraus(p: GadParams) -> list[np.ndarray]:
    g, n = p.gamma, p.n
    sg = math.sqrt(g)
    s1g = math.sqrt(1.0 - g)
    a = math.sqrt(1.0 - n)
    b = math.sqrt(n)
    return [
        a * np.array([[1, 0], [0, s1g]], dtype=complex),
        a * np.array([[0, sg], [0, 0]], dtype=complex),
        b * np.array([[s1g, 0], [0, 1]], dtype=complex),
        b * np.array([[0, 0], [sg, 0]], dtype=complex),
    ]


def gad(p: GadParams) -> Channel:
    """Generalized amplitude damping: relax toward diag(1-n, n) at rate gamma.

    Transfer-matrix action: X, Y shrink by sqrt(1-gamma), Z by (1-gamma),
    and the identity picks up gamma (1-2n) Z.  Invertible iff gamma != 1.
    """
    return channel_from_kraus(gad_kraus(p))


def gad_dilation_unitary(gamma: float) -> np.ndarray:
    """Two-qubit excitation-exchange unitary realizing the damping step.

    Basis order |system, environment>; the middle block rotates the
    single-excitation subspace {|01>, |10>} with amplitude i sqrt(gamma).
    """
    if not 0.0 <= gamma <= 1.0:
        raise RangeError(f"gamma must lie in [0, 1], got {gamma}")
    c = math.sqrt(1.0 - gamma)
    s = 1j * math.sqrt(gamma)
    return np.array(
        [[1, 0, 0, 0],
         [0, c, s, 0],
         [0, s, c, 0],
         [0, 0, 0, 1]],
        dtype=complex,
    )


def stinespring_apply(gamma: float, n: float, rho) -> DensityMatrix:
    """Run the damping step as system + environment unitary, then discard
    the environment: Tr_E [ U (rho (x) omega) U^dagger ] with omega the
    thermal qubit diag(1-n, n).  Agrees with apply(gad(...)) exactly."""
    m = rho.matrix if isinstance(rho, DensityMatrix) else np.asarray(rho, dtype=complex)
    if m.shape != (2, 2):
        raise DimensionMismatch(f"expected a single-qubit state, got {m.shape}")
    omega = thermal_env_state(n).matrix
    u = gad_dilation_unitary(gamma)
    big = u @ kron(m, omega) @ dag(u)
    out = partial_trace_matrix(big, (2, 2), keep=(0,))
    return DensityMatrix(out, (2,))
