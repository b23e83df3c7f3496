import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ghzdiscord.channels import ChannelKind, apply_sequential, kraus_set
from ghzdiscord.discord import (
    DISCREPANT_ROWS,
    _Evaluator,
    dephase,
    global_qd,
    global_qd_at,
    gqd_closed_form,
    gqd_entropic,
    gqd_entropic_at,
    gqd_hs,
    gqd_hs_at,
    measurement_basis,
    profile_from_angles,
    relative_entropy,
    sigma_z_profile,
    von_neumann_entropy,
)
from ghzdiscord.errors import ArgumentError, UnsupportedError
from ghzdiscord.optimize import angle_grid, OptimizerConfig
from ghzdiscord.qmatrix import DensityMatrix
from ghzdiscord.states import StateFamily, rindler_tripartite, werner_ghz

from conftest import kron_all, random_density, random_unitary

angle = st.floats(-10, 10, allow_nan=False)


def noisy(kind, p, n=3, mu=0.5):
    return apply_sequential(kraus_set(kind, p), werner_ghz(n, mu))


def test_entropy_values():
    assert von_neumann_entropy(np.eye(8) / 8) == pytest.approx(3.0, abs=1e-12)
    assert von_neumann_entropy(werner_ghz(3, 1.0)) == pytest.approx(0.0, abs=1e-12)
    # eigenvalues 9/16 (once) and 1/16 (seven times)
    expected = -(9 / 16) * math.log2(9 / 16) + 7 / 16 * 4
    assert expected == pytest.approx(2.216917186688699, abs=1e-14)
    assert von_neumann_entropy(werner_ghz(3, 0.5)) == pytest.approx(expected, abs=1e-12)


def test_relative_entropy_edge_cases(rng):
    rho = random_density(2, rng)
    assert relative_entropy(rho, rho) == pytest.approx(0.0, abs=1e-10)
    pure = np.diag([1.0, 0.0])
    assert relative_entropy(np.eye(2) / 2, pure) == math.inf
    assert relative_entropy(pure, np.eye(2) / 2) == pytest.approx(1.0, abs=1e-12)


def test_pinching_identity_random_states(rng):
    worst = 0.0
    for _ in range(50):
        rho = random_density(3, rng)
        prof = profile_from_angles(rng.uniform(-math.pi, math.pi, size=6))
        pinched = dephase(rho, prof)
        lhs = von_neumann_entropy(pinched) - von_neumann_entropy(rho)
        worst = max(worst, abs(lhs - relative_entropy(rho, pinched)))
    assert worst < 1e-8


@settings(max_examples=60, deadline=None)
@given(angle, angle)
def test_projector_algebra(theta, phi):
    p1, p2 = measurement_basis(theta, phi).projectors
    assert np.allclose(p1 @ p1, p1, atol=1e-14)
    assert np.allclose(p2 @ p2, p2, atol=1e-14)
    assert np.allclose(p1 @ p2, 0, atol=1e-14)
    assert np.allclose(p1 + p2, np.eye(2), atol=0)
    assert abs(np.trace(p1) - 1) < 1e-14
    assert np.allclose(p1, p1.conj().T, atol=0)


@settings(max_examples=60, deadline=None)
@given(angle, angle)
def test_angle_periodicity(theta, phi):
    ref = measurement_basis(theta, phi).projectors[0]
    for t, p in [(theta + 2 * math.pi, phi), (theta, phi - 2 * math.pi), (-theta, phi + math.pi)]:
        assert np.allclose(measurement_basis(t, p).projectors[0], ref, atol=1e-12)
    # antipodal direction: projectors swap roles, pinching unchanged
    anti = measurement_basis(math.pi - theta, phi + math.pi).projectors
    assert np.allclose(anti[1], ref, atol=1e-12)


def test_sigma_z_projectors():
    p1, p2 = sigma_z_profile(1)[0].projectors
    assert np.array_equal(p1, np.diag([1, 0]))
    assert np.array_equal(p2, np.diag([0, 1]))
    # theta = pi/2, phi = 0 is the sigma_x eigenbasis
    px = measurement_basis(math.pi / 2, 0.0).projectors[0]
    assert np.allclose(px, np.full((2, 2), 0.5), atol=1e-15)


def test_dephase_sigma_z_is_diagonal_part(rng):
    rho = random_density(3, rng)
    out = dephase(rho, sigma_z_profile(3)).matrix
    assert np.allclose(out, np.diag(np.diag(rho.matrix)), atol=1e-15)


def test_profile_length_checked():
    with pytest.raises(ArgumentError):
        dephase(werner_ghz(3, 0.5), sigma_z_profile(2))


def test_pure_ghz_sigma_z_values():
    ghz = werner_ghz(3, 1.0)
    assert global_qd_at(ghz, sigma_z_profile(3)) == pytest.approx(1.0, abs=1e-12)
    assert gqd_hs_at(ghz, sigma_z_profile(3)) == pytest.approx(0.5, abs=1e-15)


def test_fast_evaluator_matches_literal(rng):
    for n in (2, 3, 4):
        rho = random_density(n, rng)
        ev = _Evaluator(rho)
        xs = rng.uniform(-4, 4, size=(8, 2 * n))
        qd, hs, inner = ev.qd(xs), ev.hs(xs), ev.entropic_inner(xs)
        for x, a, b, c in zip(xs, qd, hs, inner):
            prof = profile_from_angles(x)
            assert a == pytest.approx(global_qd_at(rho, prof), abs=1e-10)
            assert b == pytest.approx(gqd_hs_at(rho, prof), abs=1e-12)
            local = sum(ev.s_marginals) - ev.s_rho
            assert local - c == pytest.approx(gqd_entropic_at(rho, prof), abs=1e-10)


def _brute_min(fn, rho, n, extra):
    pairs = angle_grid(OptimizerConfig(grid_points_per_angle=(9, 8)))
    best = math.inf
    for combo in itertools.product(pairs, repeat=n):
        best = min(best, fn(rho, profile_from_angles(np.ravel(combo))))
    for x in extra:
        best = min(best, fn(rho, profile_from_angles(x)))
    return best


@pytest.mark.parametrize("kind,p", [("ad", 0.3), ("bf", 0.2), ("dep", 0.6)])
def test_minimum_not_above_brute_force(kind, p, rng):
    rho = noisy(kind, p, n=2)
    extra = rng.uniform(-math.pi, math.pi, size=(300, 4))
    assert global_qd(rho).value <= _brute_min(global_qd_at, rho, 2, extra) + 1e-9
    assert gqd_hs(rho).value <= _brute_min(gqd_hs_at, rho, 2, extra) + 1e-12


def test_pure_ghz_discord_is_one_bit():
    res = global_qd(werner_ghz(3, 1.0))
    assert res.value == pytest.approx(1.0, abs=1e-4)
    assert res.converged


def test_werner_baseline_values():
    rho = werner_ghz(3, 0.5)
    z = sigma_z_profile(3)
    qd = global_qd(rho).value
    assert qd == pytest.approx(global_qd_at(rho, z), abs=1e-9)
    assert qd == pytest.approx(0.331877754007, abs=1e-9)
    assert gqd_entropic(rho).value == pytest.approx(qd, abs=1e-9)
    assert gqd_hs(rho).value == pytest.approx(0.125, abs=1e-10)


def test_entropic_equals_global_qd_on_random_states(rng):
    for _ in range(3):
        rho = random_density(3, rng, rank=3)
        assert gqd_entropic(rho).value == pytest.approx(global_qd(rho).value, abs=1e-6)


def test_local_unitary_invariance(rng):
    rho = noisy("ad", 0.3)
    base_qd, base_hs = global_qd(rho).value, gqd_hs(rho).value
    for _ in range(3):
        u = kron_all([random_unitary(rng) for _ in range(3)])
        rot = DensityMatrix.from_matrix(u @ rho.matrix @ u.conj().T)
        assert global_qd(rot).value == pytest.approx(base_qd, abs=2e-6)
        assert gqd_hs(rot).value == pytest.approx(base_hs, abs=1e-8)


def test_product_state_has_no_discord(rng):
    rho = DensityMatrix.from_matrix(kron_all([random_density(1, rng).matrix for _ in range(3)]))
    assert global_qd(rho).value == pytest.approx(0.0, abs=1e-6)
    # the zero sits off-grid; the default 1e-8 spread leaves ~1e-8 behind
    tight = OptimizerConfig(simplex_tolerance=1e-13)
    assert gqd_hs(rho, tight).value == pytest.approx(0.0, abs=1e-9)


def test_classical_state_is_zero():
    rho = DensityMatrix.from_matrix(np.diag([0.4, 0.1, 0, 0.2, 0.05, 0.05, 0.1, 0.1]))
    assert global_qd(rho).value == 0.0
    assert gqd_hs(rho).value == pytest.approx(0.0, abs=1e-15)


def test_values_non_negative(rng):
    for _ in range(5):
        rho = random_density(3, rng)
        assert global_qd(rho).value >= 0
        assert gqd_hs(rho).value >= 0


def test_minimizer_reproduces_value():
    rho = noisy("bf", 0.3)
    res = gqd_hs(rho)
    assert gqd_hs_at(rho, res.minimizer) == pytest.approx(res.value, abs=1e-12)
    assert len(res.minimizer) == 3 and res.evaluations > 0


@pytest.mark.parametrize("kind", ["bf", "pf", "bpf"])
def test_flip_symmetry_small(kind):
    a, b = gqd_hs(noisy(kind, 0.2)).value, gqd_hs(noisy(kind, 0.8)).value
    assert a == pytest.approx(b, abs=1e-8)


# closed-form table rows, evaluated by hand


def test_closed_form_examples():
    w3 = StateFamily("werner-ghz", 3, mu=0.5)
    w6 = StateFamily("werner-ghz", 6, mu=0.5)
    assert gqd_closed_form(w3, "pf", 0.25) == pytest.approx(0.5 * 0.5**6 * 0.25, abs=1e-16)
    assert gqd_closed_form(w6, "ad", 0.5) == pytest.approx(0.001953125, abs=1e-15)
    assert gqd_closed_form(w3, "dep", 1.0) == pytest.approx(0.03125, abs=1e-15)
    rin = StateFamily("rindler", r=0.0)
    assert gqd_closed_form(rin, "pf", 0.0) == pytest.approx(0.5, abs=1e-15)
    rin = StateFamily("rindler", r=math.pi / 4)
    assert gqd_closed_form(rin, "ad", 0.0) == pytest.approx(0.125, abs=1e-15)


def test_closed_form_six_qubit_depolarizing():
    w6 = StateFamily("werner-ghz", 6, mu=0.5)
    assert gqd_closed_form(w6, "dep", 0.1) == pytest.approx(0.5 * 0.9**12 * 0.25, abs=1e-15)


@pytest.mark.parametrize("kind", ["ad", "pd", "pf"])
@pytest.mark.parametrize("p", [0.0, 0.3, 0.7])
def test_closed_form_matches_numerics(kind, p):
    fam = StateFamily("werner-ghz", 3, mu=0.5)
    assert gqd_hs(noisy(kind, p)).value == pytest.approx(gqd_closed_form(fam, kind, p), abs=1e-6)


def test_closed_form_errors():
    with pytest.raises(UnsupportedError):
        gqd_closed_form(StateFamily("rindler", r=0.1), "bit-flip", 0.2)
    with pytest.raises(UnsupportedError):
        gqd_closed_form(StateFamily("werner-ghz", 4, mu=0.5), "ad", 0.2)
    with pytest.raises(ArgumentError):
        gqd_closed_form(StateFamily("werner-ghz", 3, mu=0.5), "ad", 1.2)
    assert ("werner-ghz-3", ChannelKind.DEPOLARIZING) in DISCREPANT_ROWS


def test_rindler_inertial_matches_pure_ghz():
    assert gqd_hs(rindler_tripartite(0.0)).value == pytest.approx(0.5, abs=1e-10)
    assert global_qd(rindler_tripartite(0.0)).value == pytest.approx(1.0, abs=1e-6)
