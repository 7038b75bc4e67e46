import numpy as np
import pytest

from qrevive import linalg
from qrevive.errors import DimensionCap, NonHermitian, ShapeMismatch, Singular
from qrevive.linalg import I2, X, Y, Z


def test_kron_identity():
    assert np.array_equal(linalg.kron(I2, I2), np.eye(4))


def test_kron_x_z_block_structure():
    # expanding the block definition by hand: X (x) Z places +/-Z blocks
    # on the antidiagonal
    expected = np.zeros((4, 4), dtype=complex)
    expected[0, 2] = 1
    expected[1, 3] = -1
    expected[2, 0] = 1
    expected[3, 1] = -1
    assert np.array_equal(linalg.kron(X, Z), expected)


def test_kron_diagonal():
    assert np.array_equal(linalg.kron(Z, I2), np.diag([1, 1, -1, -1]).astype(complex))


def test_kron_dimension_cap():
    big = np.eye(70)
    with pytest.raises(DimensionCap):
        linalg.kron(big, big)  # 4900 > 4096
    linalg.kron(big, big, cap=5000)


def test_kron_associativity_random():
    rng = np.random.default_rng(42)
    for _ in range(25):
        a = rng.standard_normal((2, 3)) + 1j * rng.standard_normal((2, 3))
        b = rng.standard_normal((3, 2)) + 1j * rng.standard_normal((3, 2))
        c = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
        lhs = linalg.kron(linalg.kron(a, b), c)
        rhs = linalg.kron(a, linalg.kron(b, c))
        assert linalg.frobenius_distance(lhs, rhs) <= 1e-12


def test_kron_rejects_nonfinite():
    bad = np.array([[1.0, np.nan], [0.0, 1.0]])
    with pytest.raises(ShapeMismatch):
        linalg.kron(bad, I2)


def test_eigen_pauli_z():
    vals, _ = linalg.hermitian_eigen(Z)
    assert np.allclose(vals, [-1.0, 1.0])


def test_eigen_pauli_x_eigenvectors():
    vals, vecs = linalg.hermitian_eigen(X)
    assert np.allclose(vals, [-1.0, 1.0])
    minus = np.array([1, -1]) / np.sqrt(2)
    plus = np.array([1, 1]) / np.sqrt(2)
    # columns match up to phase
    assert min(np.linalg.norm(vecs[:, 0] - minus), np.linalg.norm(vecs[:, 0] + minus)) < 1e-9
    assert min(np.linalg.norm(vecs[:, 1] - plus), np.linalg.norm(vecs[:, 1] + plus)) < 1e-9


def test_eigen_degenerate():
    vals, vecs = linalg.hermitian_eigen(np.diag([3.0, 3.0]))
    assert np.allclose(vals, [3.0, 3.0])
    assert np.allclose(vecs @ linalg.dag(vecs), np.eye(2), atol=1e-9)


def test_eigen_rejects_nonhermitian():
    with pytest.raises(NonHermitian):
        linalg.hermitian_eigen(np.array([[0.0, 1.0], [0.0, 0.0]]))


def test_eigen_reconstruction_random():
    rng = np.random.default_rng(7)
    for _ in range(100):
        d = int(rng.integers(2, 17))
        g = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
        h = (g + g.conj().T) / 2
        vals, vecs = linalg.hermitian_eigen(h)
        rebuilt = vecs @ np.diag(vals) @ linalg.dag(vecs)
        assert linalg.frobenius_distance(rebuilt, h) <= 1e-9 * max(np.linalg.norm(h), 1e-12)
        assert np.all(np.diff(vals) >= -1e-12)
        assert linalg.frobenius_distance(vecs @ linalg.dag(vecs), np.eye(d)) <= 1e-9


def test_invert_identity():
    inv, cond = linalg.invert(np.eye(4))
    assert np.allclose(inv, np.eye(4))
    assert abs(cond - 1.0) < 1e-12


def test_invert_diagonal():
    inv, cond = linalg.invert(np.diag([2.0, 4.0]))
    assert np.allclose(inv, np.diag([0.5, 0.25]))
    assert abs(cond - 2.0) < 1e-12


def test_invert_zero_row_singular():
    a = np.array([[1.0, 2.0], [0.0, 0.0]])
    with pytest.raises(Singular):
        linalg.invert(a)


def test_invert_roundtrip_random():
    rng = np.random.default_rng(3)
    checked = 0
    while checked < 50:
        d = int(rng.integers(2, 9))
        a = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
        if np.linalg.cond(a) >= 1e6:
            continue
        checked += 1
        inv, _ = linalg.invert(a)
        assert linalg.frobenius_distance(a @ inv, np.eye(d)) <= 1e-8


def test_frobenius_distance_values():
    assert linalg.frobenius_distance(I2, I2) == 0.0
    assert abs(linalg.frobenius_distance(Z, -Z) - 2 * np.sqrt(2)) < 1e-14
    assert abs(linalg.frobenius_distance(X, np.zeros((2, 2))) - np.sqrt(2)) < 1e-14


def test_frobenius_shape_mismatch():
    with pytest.raises(ShapeMismatch):
        linalg.frobenius_distance(I2, np.eye(3))


def test_pauli_constants():
    for p in (X, Y, Z):
        assert np.allclose(p @ p, I2)
    assert np.allclose(X @ Y, 1j * Z)
