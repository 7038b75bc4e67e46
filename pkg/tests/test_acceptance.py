"""Acceptance suite: every criterion pinned at its stated tolerance.

Each test prints one PASS line once its assertions hold; run with
`pytest tests/test_acceptance.py -v -s` to see them.
"""

import math

import numpy as np
import pytest

from qrevive import channels as ch
from qrevive import entanglement as ent
from qrevive import procedures as pr
from qrevive import states as st
from qrevive.errors import NonInvertible
from qrevive.linalg import dag, frobenius_distance, kron

CAVITY = ch.CavityParams(gamma0=1.0, lam=0.1)
SCAN_SEED = 202


def _report(num, text):
    print(f"[acceptance] criterion {num}: PASS - {text}")


@pytest.fixture(scope="module")
def region_scan():
    axes = np.linspace(0.0, 1.0, 40)
    return pr.gad_region_scan(axes, axes, ent.SearchBudget(samples=500),
                              seed=SCAN_SEED)


def test_criterion_1_inverse_leg_triple_agreement():
    # 100 random states x 20 random parameter pairs, gamma <= 0.95:
    # channel-level lhs, channel-level rhs and the dilated pipeline output
    # agree pairwise within Frobenius 1e-9.
    rng = np.random.default_rng(11)
    params = [ch.GadParams(0.95 * float(rng.random()), float(rng.random()))
              for _ in range(20)]
    states = [st.random_density([2, 2], 12, k) for k in range(100)]
    worst = 0.0
    for g in params:
        for rho in states:
            lhs, rhs = pr.procedure2_channel_level(rho, g)
            dprime = pr.procedure2_stinespring(rho, g).rho_AB_dprime.matrix
            worst = max(worst,
                        frobenius_distance(lhs, rhs),
                        frobenius_distance(dprime, rhs),
                        frobenius_distance(dprime, lhs))
    assert worst <= 1e-9
    _report(1, f"triple agreement on 2000 cases, worst gap {worst:.2e}")


def test_criterion_2_dilation_equals_operator_sum():
    rng = np.random.default_rng(21)
    params = [(float(rng.random()), float(rng.random())) for _ in range(20)]
    worst = 0.0
    for gamma, n in params:
        e = ch.gad(ch.GadParams(gamma, n))
        for k in range(100):
            rho = st.random_density([2], 22, k)
            gap = frobenius_distance(ch.stinespring_apply(gamma, n, rho).matrix,
                                     ch.apply(e, rho))
            worst = max(worst, gap)
    assert worst <= 1e-10
    _report(2, f"dilation vs operator sum on 2000 cases, worst gap {worst:.2e}")


def test_criterion_3_exceeding_via_inverse_leg(region_scan):
    inner = [c for c in region_scan.flat()
             if c.label == pr.CLASS_EA_NOT_EB and c.gamma < 1.0]
    assert inner, "scan must report at least one annihilating-not-breaking cell"
    # most robust such cell: deepest annihilation margin among clearly
    # non-breaking cells
    candidates = [c for c in inner if c.choi_min_pt_eig < -1e-3] or inner
    cell = max(candidates, key=lambda c: c.ea_min_pt_eig)
    g = ch.GadParams(cell.gamma, cell.n)
    e = ch.gad(g)
    phi = st.bell_phi_plus()
    both = st.DensityMatrix(ch.apply(ch.tensor(e, e), phi), (2, 2))
    one = st.DensityMatrix(
        ch.apply(ch.tensor(ch.identity_channel(2), e), phi), (2, 2))
    neg_both = ent.negativity(both, (0,))
    neg_one = ent.negativity(one, (0,))
    assert neg_both <= 1e-9
    assert neg_one >= 1e-3
    _report(3, f"cell (gamma={cell.gamma:.3f}, n={cell.n:.3f}): damped pair "
               f"negativity {neg_both:.1e}, after inverse leg {neg_one:.3e}")


def test_criterion_4_exceeding_via_revival_map():
    res = pr.procedure1_trajectory(st.bell_phi_plus(), CAVITY,
                                   np.linspace(0.0, 60.0, 400))
    valid = [q for q in res.pairs
             if q.concurrence_i <= 1e-6 and q.concurrence_f >= 0.01
             and ch.decay_probability(q.t_i, CAVITY) > 1e-10
             and q.reproduction_residual <= 1e-8]
    assert valid, "no death/revival pair found on the default grid"
    q = valid[0]
    psi = pr.revival_factor(CAVITY, q.t_i, q.t_f)
    _, min_eig = pr.nonpositivity_witness(psi, samples=1000, seed=4)
    assert min_eig <= -1e-6
    _report(4, f"pair t_i={q.t_i:.3f}, t_f={q.t_f:.3f}: reproduction "
               f"{q.reproduction_residual:.1e}, witness eigenvalue {min_eig:.2e}")


def test_criterion_5_invertibility_boundaries():
    # The determinant of the cavity transfer matrix follows from its
    # published operator actions: I -> I + (P-1) Z, X -> sqrt(P) X,
    # Y -> -sqrt(P) Y, Z -> -P Z, whose 4x4 matrix has det = +P^2.
    worst_cavity = 0.0
    for t in np.linspace(0.0, 60.0, 200):
        P = ch.decay_probability(float(t), CAVITY)
        sq = math.sqrt(P)
        oracle = np.array([[1.0, 0.0, 0.0, 0.0],
                           [0.0, sq, 0.0, 0.0],
                           [0.0, 0.0, -sq, 0.0],
                           [P - 1.0, 0.0, 0.0, -P]])
        det = ch.ptm_view(ch.cavity_channel(float(t), CAVITY)).determinant
        worst_cavity = max(worst_cavity, abs(det - np.linalg.det(oracle)))
        assert abs(np.linalg.det(oracle) - P * P) < 1e-12
    assert worst_cavity <= 1e-9

    for t_n in ch.invertibility_zeros(CAVITY, 4):
        with pytest.raises(NonInvertible):
            ch.invert(ch.cavity_channel(t_n, CAVITY))
    ch.invert(ch.cavity_channel(ch.invertibility_zeros(CAVITY, 1)[0] + 1.0, CAVITY))

    rng = np.random.default_rng(51)
    worst_gad = 0.0
    for _ in range(100):
        g, n = float(rng.random()), float(rng.random())
        e = ch.gad(ch.GadParams(g, n))
        worst_gad = max(worst_gad, abs(ch.ptm_view(e).determinant - (1 - g) ** 2))
        ch.invert(e)  # gamma < 1: must succeed
    assert worst_gad <= 1e-10
    with pytest.raises(NonInvertible):
        ch.invert(ch.gad(ch.GadParams(1.0, 0.3)))
    _report(5, f"cavity det defect {worst_cavity:.1e}, damping det defect "
               f"{worst_gad:.1e}; inversion fails exactly at the singular points")


def test_criterion_6_monotonicity_invariance_suite():
    worst_lu = 0.0
    worst_ancilla = 0.0
    worst_mono = 0.0
    worst_mi = 0.0
    for k in range(200):
        rho = st.random_density([2, 2, 2, 2], 61, k)
        neg_full = ent.negativity(rho, (0, 1))

        rng = st.derived_rng(62, k)
        ga = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
        gb = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
        ua, _ = np.linalg.qr(ga)
        ub, _ = np.linalg.qr(gb)
        u = kron(ua, ub)
        rotated = st.DensityMatrix(u @ rho.matrix @ dag(u), (2, 2, 2, 2))
        worst_lu = max(worst_lu, abs(ent.negativity(rotated, (0, 1)) - neg_full))

        reduced = st.partial_trace(rho, (1, 2))
        worst_mono = max(worst_mono,
                         ent.negativity(reduced, (0,)) - neg_full)
        worst_mi = max(worst_mi, -ent.inaccessible_entanglement(rho))

        rho_ab = st.random_density([2, 2], 63, k)
        omega = st.thermal_env_state(float(st.derived_rng(64, k).random()))
        attached = st.product_state(omega, rho_ab, omega)
        worst_ancilla = max(worst_ancilla,
                            abs(ent.negativity(attached, (0, 1))
                                - ent.negativity(rho_ab, (0,))))
    assert worst_lu <= 1e-9
    assert worst_ancilla <= 1e-9
    assert worst_mono <= 1e-9   # violations of full >= reduced
    assert worst_mi <= 1e-9     # violations of nonnegativity

    worst_const = 0.0
    rng = np.random.default_rng(65)
    for k in range(20):
        g = ch.GadParams(0.95 * float(rng.random()), float(rng.random()))
        rho = st.random_density([2, 2], 66, k)
        pipe = pr.procedure2_stinespring(rho, g)
        vals = [ent.negativity(pipe.rho_full, (0, 1)),
                ent.negativity(pipe.rho_full_prime, (0, 1)),
                ent.negativity(pipe.rho_full_dprime, (0, 1))]
        worst_const = max(worst_const, max(vals) - min(vals))
    assert worst_const <= 1e-9
    _report(6, f"local-unitary {worst_lu:.1e}, ancilla {worst_ancilla:.1e}, "
               f"monotonicity {worst_mono:.1e}, pipeline constancy {worst_const:.1e}")


def test_criterion_7_roundtrips_and_measure_oracles():
    p = CAVITY
    chans = [ch.identity_channel(2)]
    chans += [ch.cavity_channel(t, p) for t in (0.0, 1.5, 5.0, 8.0, 14.0, 30.0)]
    chans += [ch.gad(ch.GadParams(g, n))
              for g in (0.0, 0.25, 0.5, 0.75, 1.0) for n in (0.0, 0.3, 0.5, 1.0)]
    worst_rt = 0.0
    for e in chans:
        via_choi = ch.channel_from_choi(ch.choi_view(e), e.in_dim, e.out_dim)
        via_kraus = ch.channel_from_kraus(ch.kraus_view(e).operators)
        worst_rt = max(worst_rt,
                       ch.channel_distance(via_choi, e),
                       ch.channel_distance(via_kraus, e))
    assert worst_rt <= 1e-9

    worst_meas = 0.0
    for pval in np.linspace(0.0, 1.0, 50):
        w = st.werner(float(pval))
        worst_meas = max(
            worst_meas,
            abs(ent.negativity(w, (0,)) - max(0.0, (3 * pval - 1) / 4)),
            abs(ent.concurrence(w) - max(0.0, (3 * pval - 1) / 2)))
    assert worst_meas <= 1e-9
    _report(7, f"round trips {worst_rt:.1e} on {len(chans)} channels, "
               f"calibration-family defect {worst_meas:.1e}")


def test_criterion_8_classifier_sanity(region_scan):
    cells = region_scan.flat()
    assert not any(c.is_eb and not c.is_ea for c in cells)
    for c in region_scan.cells[0]:  # gamma = 0: the identity channel
        assert not c.is_eb and not c.is_ea
        assert c.label == pr.CLASS_NOT_EA
    for c in region_scan.cells[-1]:  # gamma = 1
        assert c.is_eb and c.is_ea and not c.invertible
        assert c.label == pr.CLASS_NONINVERTIBLE
    _report(8, f"{len(cells)} cells: breaking implies annihilating, identity row "
               "clean, full-damping column breaking+annihilating+non-invertible")
