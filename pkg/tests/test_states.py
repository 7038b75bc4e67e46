import numpy as np
import pytest

from qrevive import states as st
from qrevive.errors import BadIndex, RangeError, ValidationError, WrongDims


def test_validate_maximally_mixed():
    diag = st.validate_matrix(np.eye(2) / 2)
    assert diag.passed
    assert abs(diag.min_eigenvalue - 0.5) < 1e-12


def test_validate_negative_eigenvalue():
    diag = st.validate_matrix(np.diag([1.2, -0.2]))
    assert not diag.passed
    assert abs(diag.min_eigenvalue + 0.2) < 1e-12


def test_validate_pure_projector():
    proj = np.zeros((2, 2), dtype=complex)
    proj[0, 0] = 1.0
    diag = st.validate_matrix(proj)
    assert diag.passed
    assert abs(diag.min_eigenvalue) < 1e-12


def test_density_matrix_rejects_bad_input():
    with pytest.raises(ValidationError):
        st.DensityMatrix(np.diag([1.2, -0.2]).astype(complex), (2,))
    with pytest.raises(WrongDims):
        st.DensityMatrix(np.eye(4) / 4, (2,))


def test_maximally_entangled_d2():
    psi = st.maximally_entangled(2)
    assert psi.dims == (2, 2)
    assert np.allclose(psi.amplitudes, np.array([1, 0, 0, 1]) / np.sqrt(2))


def test_maximally_entangled_d3():
    psi = st.maximally_entangled(3)
    expected = np.zeros(9)
    expected[[0, 4, 8]] = 1 / np.sqrt(3)
    assert np.allclose(psi.amplitudes, expected)
    reduced = st.partial_trace(psi.to_density(), [0])
    assert np.allclose(reduced.matrix, np.eye(3) / 3)


def test_partial_trace_bell_marginal():
    rho = st.bell_phi_plus()
    assert np.allclose(st.partial_trace(rho, [1]).matrix, np.eye(2) / 2)


def test_partial_trace_product():
    a = st.random_density([2], 1)
    b = st.random_density([2], 2)
    prod = st.product_state(a, b)
    assert np.allclose(st.partial_trace(prod, [0]).matrix, a.matrix)
    assert np.allclose(st.partial_trace(prod, [1]).matrix, b.matrix)


def test_partial_trace_environment_sandwich():
    rho_ab = st.random_density([2, 2], 5)
    omega = st.thermal_env_state(0.3)
    full = st.product_state(omega, rho_ab, omega)
    assert full.dims == (2, 2, 2, 2)
    back = st.partial_trace(full, [1, 2])
    assert np.allclose(back.matrix, rho_ab.matrix, atol=1e-12)


def test_partial_trace_reordering():
    rho = st.random_density([2, 2, 2, 2], 9)
    stepwise = st.partial_trace(st.partial_trace(rho, [0, 1, 3]), [0, 1])
    direct = st.partial_trace(rho, [0, 1])
    assert np.allclose(stepwise.matrix, direct.matrix, atol=1e-12)


def test_partial_trace_outputs_validate():
    for k in range(10):
        rho = st.random_pure([2, 2, 2], 11, k).to_density()
        for keep in ([0], [1], [0, 2]):
            assert st.validate(st.partial_trace(rho, keep)).passed


def test_partial_trace_bad_index():
    rho = st.bell_phi_plus()
    with pytest.raises(BadIndex):
        st.partial_trace(rho, [2])
    with pytest.raises(BadIndex):
        st.partial_trace(rho, [])


def test_partial_transpose_product_stays_psd():
    a = st.random_density([2], 21)
    b = st.random_density([2], 22)
    prod = st.product_state(a, b)
    pt = st.partial_transpose(prod, 1)
    assert np.allclose(pt, np.kron(a.matrix, b.matrix.T))
    assert np.linalg.eigvalsh(pt)[0] >= -1e-12


def test_partial_transpose_bell():
    pt = st.partial_transpose(st.bell_phi_plus(), 1)
    assert abs(np.linalg.eigvalsh(pt)[0] + 0.5) < 1e-12


def test_partial_transpose_involution_trace_hermiticity():
    rho = st.random_density([2, 2], 30)
    pt = st.partial_transpose(rho, 0)
    assert np.allclose(st.partial_transpose_matrix(pt, (2, 2), 0), rho.matrix)
    assert abs(np.trace(pt) - 1.0) < 1e-12
    assert np.max(np.abs(pt - pt.conj().T)) < 1e-12


def test_thermal_env_state():
    assert np.allclose(st.thermal_env_state(0.0).matrix, np.diag([1.0, 0.0]))
    assert np.allclose(st.thermal_env_state(1.0).matrix, np.diag([0.0, 1.0]))
    assert np.allclose(st.thermal_env_state(0.3).matrix, np.diag([0.7, 0.3]))
    with pytest.raises(RangeError):
        st.thermal_env_state(1.2)


def test_random_pure_deterministic():
    a = st.random_pure([2, 2], 123, 4)
    b = st.random_pure([2, 2], 123, 4)
    assert np.array_equal(a.amplitudes, b.amplitudes)
    c = st.random_pure([2, 2], 123, 5)
    assert not np.allclose(a.amplitudes, c.amplitudes)


def test_random_pure_norm():
    for k in range(20):
        psi = st.random_pure([2, 2, 2], 77, k)
        assert abs(np.linalg.norm(psi.amplitudes) - 1.0) <= 1e-12


def test_random_pure_bloch_symmetry():
    acc = np.zeros(3)
    n = 10_000
    for i in range(n):
        acc += st.bloch_vector(st.random_pure([2], 2024, i).to_density())
    assert np.linalg.norm(acc / n) <= 0.05


def test_random_pure_density_validates():
    for k in range(20):
        assert st.validate(st.random_pure([2, 2], 31, k).to_density()).passed


def test_werner_endpoints():
    assert np.allclose(st.werner(0.0).matrix, np.eye(4) / 4)
    assert np.allclose(st.werner(1.0).matrix, st.bell_phi_plus().matrix)
    with pytest.raises(RangeError):
        st.werner(-0.1)


def test_werner_half_spectrum():
    # diagonalizing in the Bell basis: one eigenvalue p + (1-p)/4, three (1-p)/4
    vals = np.linalg.eigvalsh(st.werner(0.5).matrix)
    assert np.allclose(np.sort(vals), [0.125, 0.125, 0.125, 0.625])


def test_derived_rng_is_order_independent():
    direct = st.derived_rng(9, 3).standard_normal(4)
    again = st.derived_rng(9, 3).standard_normal(4)
    assert np.array_equal(direct, again)
    other = st.derived_rng(9, 4).standard_normal(4)
    assert not np.allclose(direct, other)
