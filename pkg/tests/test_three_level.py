import numpy as np
import pytest
from scipy.linalg import expm

import kickdyn.three_level as tl
from kickdyn.errors import ConsistencyViolation, ProbeDegeneracy
from kickdyn.three_level import (
    Impulse3,
    Regime,
    ThreeLevelParams,
    ThreeLevelSpecialParams,
    classify,
    consistency_check,
    consistency_residuals,
    default_horizon,
    effective_hamiltonian_special,
    g_coefficients,
    closed_form_period_candidates,
    special_resonance_periods,
    sweep_period,
    sweep_point,
)

from oracles import dense_population_max, effective_populations, h3, period_unitary, strobe_populations

SYS = ThreeLevelSpecialParams(100.0, 1.0, 0.0)
KICK = Impulse3.special(18.0, 1.0, 0.0)


def test_special_params_expand_to_general_ladder():
    s = ThreeLevelSpecialParams(3.0, 2.0, 0.4)
    g = s.general()
    assert (g.delta2, g.omega2, g.theta2) == (6.0, 2.0, 0.4)
    assert g.is_special
    assert not ThreeLevelParams(1.0, 3.0).is_special
    assert np.allclose(s.hamiltonian(), h3(3.0, 6.0, 2.0, 2.0, 0.4, 0.4))


def test_impulse_flags():
    assert Impulse3.special(0.0, 0.0).is_zero
    assert KICK.is_special
    assert not Impulse3(1.0, 3.0, 1.0, 1.0, 0.0, 0.0).is_special
    assert KICK.e1 == pytest.approx(np.sqrt(18.0**2 + 2.0))


def test_non_special_inputs_rejected():
    with pytest.raises(ValueError):
        g_coefficients(ThreeLevelParams(1.0, 3.0), KICK)
    with pytest.raises(ValueError):
        g_coefficients(SYS, Impulse3(1.0, 3.0, 1.0, 1.0, 0.0, 0.0))


def _direct_normalized_g(sys, imp, T):
    U = period_unitary(sys.hamiltonian(), imp.matrix(), T)
    W = U * np.exp(1j * imp.delta1) * np.exp(1j * sys.delta1 * T)
    return tl._read_g(W)


def test_g_fit_matches_brute_force_exponentials():
    g = g_coefficients(SYS, KICK)
    for T in (0.003, 0.0171, 0.05, 0.2):
        assert np.max(np.abs(g.normalized(T) - _direct_normalized_g(SYS, KICK, T))) < 1e-10


def test_zero_impulse_g_is_free_propagator():
    zero = Impulse3.special(0.0, 0.0)
    g = g_coefficients(SYS, zero)
    T = 0.013
    U = expm(-1j * SYS.hamiltonian() * T) * np.exp(1j * 100.0 * T)
    assert np.max(np.abs(g.normalized(T) - tl._read_g(U))) < 1e-12
    assert special_resonance_periods(SYS, zero) == []


def test_probe_degeneracy(monkeypatch):
    rng = np.random.default_rng(1)
    monkeypatch.setattr(tl, "scaled_period_matrix", lambda *a: rng.normal(size=(3, 3)) + 0j)
    with pytest.raises(ProbeDegeneracy):
        g_coefficients(SYS, KICK, max_retries=2)


def test_special_periods_are_roots_and_consistent():
    g = g_coefficients(SYS, KICK)
    Ts = special_resonance_periods(SYS, KICK, n_max=2, g=g)
    assert Ts
    for T in Ts:
        res = consistency_check(g, T)
        assert res.passed
        assert np.max(np.abs(res.residuals)) < 1e-8
    # the arcsin closed form lands near, not on, the exact roots
    approx = closed_form_period_candidates(g, n_max=2)
    assert min(abs(p - Ts[0]) for p in approx) < 1e-3


def test_effective_special_matches_stroboscopic_oracle():
    g = g_coefficients(SYS, KICK)
    T = special_resonance_periods(SYS, KICK, g=g)[0]
    h = effective_hamiltonian_special(SYS, KICK, T, g=g)
    assert h.omega_eff > 0
    n = int(np.ceil(10 * np.pi / (h.omega_eff * np.sqrt(2) * T)))
    ref = strobe_populations(SYS.hamiltonian(), KICK.matrix(), T, n)
    eff = effective_populations(h.hamiltonian(), T, n)
    assert np.max(np.abs(ref - eff)) < 1e-9
    # with atan2(-g3, -g4) the propagator itself matches up to a phase
    U = period_unitary(SYS.hamiltonian(), KICK.matrix(), T)
    W = expm(-1j * h.hamiltonian() * T)
    phase = np.vdot(W, U) / abs(np.vdot(W, U))
    assert np.max(np.abs(U - phase * W)) < 1e-9


def test_theta_eff_is_gauge_covariant():
    # a common phase on every coupling is a diagonal gauge change and shifts theta_eff by it
    vals = []
    for th in (0.0, 0.3):
        sys = ThreeLevelSpecialParams(100.0, 1.0, th)
        imp = Impulse3.special(18.0, 1.0, th)
        g = g_coefficients(sys, imp)
        T = special_resonance_periods(sys, imp, g=g)[0]
        vals.append(effective_hamiltonian_special(sys, imp, T, g=g))
    assert vals[1].omega_eff == pytest.approx(vals[0].omega_eff, rel=1e-10)
    shift = np.angle(np.exp(1j * (vals[1].theta_eff - vals[0].theta_eff)))
    assert shift == pytest.approx(0.3, abs=1e-9)


def test_effective_special_rejects_inconsistent_period():
    g = g_coefficients(SYS, KICK)
    T = special_resonance_periods(SYS, KICK, g=g)[0]
    with pytest.raises(ConsistencyViolation):
        effective_hamiltonian_special(SYS, KICK, 0.5 * T, g=g)


def test_consistency_residuals_vanish_for_pure_coupling_ladder():
    om, th, T = 0.7, 0.9, 0.3
    W = expm(-1j * h3(0.0, 0.0, om, om, th, th) * T)
    assert np.max(np.abs(consistency_residuals(tl._read_g(W)))) < 1e-14


@pytest.mark.parametrize(
    "p, regime",
    [
        ((0.05, 0.95, 0.01), Regime.ONE_PHOTON),
        ((0.05, 0.02, 0.95), Regime.TWO_PHOTON),
        ((0.01, 0.5, 0.5), Regime.FULL_RESONANCE),
        ((0.99, 0.01, 0.0), Regime.FROZEN),
        ((0.3, 0.5, 0.3), Regime.MIXED),
    ],
)
def test_classify(p, regime):
    assert classify(*p) is regime


def test_default_horizon():
    sys = ThreeLevelParams(60.0, 40.0, 1.0, 2.0)
    assert default_horizon(sys, 0.1) == int(np.ceil(1.5 * np.pi / (2 / 60 * 0.1)))
    assert default_horizon(ThreeLevelParams(0.0, 1.0), 0.1) == 200


def test_sweep_point_matches_dense_oracle():
    sys = ThreeLevelParams(60.0, 40.0, 1.0, 2.0)
    imp = Impulse3(60.0, 40.0, 1.5, 2.0, 0.0, 0.0)
    pt = sweep_point(sys, imp, 0.0424, horizon=300, samples_per_period=8)
    H, M = sys.hamiltonian(), imp.matrix()
    assert pt.p2_max == pytest.approx(dense_population_max(H, M, 0.0424, 300, 8, 1), abs=1e-9)
    assert pt.p3_max == pytest.approx(dense_population_max(H, M, 0.0424, 300, 8, 2), abs=1e-9)


def test_sweep_period_order_and_threads():
    sys = ThreeLevelParams(60.0, 40.0, 1.0, 2.0)
    imp = Impulse3(60.0, 40.0, 1.5, 2.0, 0.0, 0.0)
    Ts = [0.1, 0.02, 0.05, 0.07]
    a = sweep_period(sys, imp, Ts, horizon=100)
    b = sweep_period(sys, imp, Ts, horizon=100, threads=4)
    assert [p.period for p in a] == Ts
    assert a == b
    with pytest.raises(ValueError):
        sweep_period(sys, imp, [0.0])
