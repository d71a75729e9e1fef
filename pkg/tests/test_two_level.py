import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.linalg import expm

from kickdyn.errors import DivisionDegenerate, NoSolution
from kickdyn.two_level import (
    EffectiveHamiltonian2,
    Impulse,
    KickParams2,
    KickStyle,
    TwoLevelParams,
    cdc_points,
    effective_from_f,
    effective_hamiltonian,
    f_functions,
    f_values,
    floquet_propagator,
    omega_eff_limit,
    resonance_amplitude,
    resonance_detuning,
    resonance_periods,
    resonance_phase,
)

from oracles import effective_populations, f_from_unitary, h2, strobe_populations


def test_params_validation():
    with pytest.raises(ValueError):
        TwoLevelParams(1.0, 0.0)
    with pytest.raises(ValueError):
        TwoLevelParams(np.inf)
    with pytest.raises(ValueError):
        KickParams2(0.0, 1.0, 1.0, 0.0)
    with pytest.raises(ValueError):
        Impulse(1.0, -1.0, 0.0)


def test_kick_styles():
    sys = TwoLevelParams(40.0, 1.0, 0.2)
    assert KickStyle.FREQUENCY.impulse(sys, 7.0) == Impulse(7.0, 1.0, 0.2)
    assert KickStyle.AMPLITUDE.impulse(sys, 7.0) == Impulse(40.0, 7.0, 0.2)
    assert KickStyle.PHASE.impulse(sys, 7.0) == Impulse(40.0, 1.0, 7.0)


def test_zero_impulse_f_values_are_free_evolution():
    sys = TwoLevelParams(40.0)
    f = f_functions(sys, KickParams2(0.05, 0.0, 0.0, 0.0))
    E1 = np.sqrt(401.0)
    assert f.f1 == pytest.approx(np.cos(E1 * 0.05), abs=1e-15)
    assert f.f2 == pytest.approx(20 / E1 * np.sin(E1 * 0.05), abs=1e-15)
    assert f.f3 == pytest.approx(np.sin(E1 * 0.05) / E1, abs=1e-15)
    assert f.f4 == pytest.approx(0.0, abs=1e-15)


def test_zero_impulse_effective_is_original():
    sys = TwoLevelParams(40.0, 1.0, 0.3)
    h = effective_hamiltonian(sys, KickParams2(0.05, 0.0, 0.0, 0.0))
    assert h.delta_eff == pytest.approx(40.0, abs=1e-12)
    assert h.omega_eff == pytest.approx(1.0, abs=1e-12)
    assert h.theta_eff == pytest.approx(0.3, abs=1e-12)


@settings(max_examples=300, deadline=None)
@given(
    st.floats(-200, 200), st.floats(0.01, 10), st.floats(-np.pi, np.pi),
    st.floats(1e-3, 1.0), st.floats(-200, 200), st.floats(0, 10), st.floats(-np.pi, np.pi),
)
def test_f_values_match_matrix_exponentials(d, o, th, T, dp, op, thp):
    sys = TwoLevelParams(d, o, th)
    kick = KickParams2(T, dp, op, thp)
    U = expm(-1j * np.array([[0, op * np.exp(1j * thp)], [op * np.exp(-1j * thp), dp]])) @ expm(
        -1j * h2(d, o, th) * T
    )
    g1, g2, g3, g4, W = f_from_unitary(U)
    f = f_functions(sys, kick)
    # determinant root fixes W only up to a sign
    sign = 1.0 if np.abs(W - f.matrix()).max() < np.abs(W + f.matrix()).max() else -1.0
    assert np.max(np.abs(sign * W - f.matrix())) < 1e-10
    assert f.norm2() == pytest.approx(1.0, abs=1e-10)
    assert np.max(np.abs(floquet_propagator(sys, kick) - U)) < 1e-10


def test_f_values_broadcast():
    T = np.linspace(0.01, 0.3, 7)
    arr = f_values(40.0, 1.0, 0.0, T, 40.0, 6.0, 0.0)
    for k, t in enumerate(T):
        f = f_functions(TwoLevelParams(40.0), KickParams2(t, 40.0, 6.0, 0.0))
        assert (arr[0][k], arr[1][k], arr[2][k], arr[3][k]) == pytest.approx(
            (f.f1, f.f2, f.f3, f.f4), abs=1e-15
        )


def test_effective_reproduces_propagator_when_f1_positive():
    sys = TwoLevelParams(40.0)
    kick = next(
        k for k in (KickParams2(T, 40.0, 6.0, 0.0) for T in np.linspace(0.01, 0.3, 30))
        if f_functions(sys, k).f1 > 0.1
    )
    h = effective_hamiltonian(sys, kick)
    W = expm(-1j * h.hamiltonian() * kick.period)
    U = floquet_propagator(sys, kick)
    phase = np.vdot(W, U) / abs(np.vdot(W, U))
    assert np.max(np.abs(U - phase * W)) < 1e-10


def test_effective_degenerate_branch():
    d, o, t = effective_from_f(1.0, 0.0, 0.0, 0.0, 0.1)
    assert (float(d), float(o), float(t)) == (0.0, 0.0, 0.0)


def test_effective_hamiltonian_type():
    h = EffectiveHamiltonian2(1.0, 2.0, 0.5)
    H = h.hamiltonian()
    assert H[0, 1] == pytest.approx(2.0 * np.exp(0.5j))
    assert H[1, 1] == 1.0


def test_frozen_population_kick_flags_cdc():
    sys = TwoLevelParams(100.0)
    kick = KickParams2(0.0628, 56.5133, 1.0, 0.0)
    assert kick.e1p == pytest.approx(9 * np.pi, abs=1e-3)
    assert effective_hamiltonian(sys, kick).omega_eff < 1e-3


@settings(max_examples=100, deadline=None)
@given(st.floats(-200, 200), st.floats(0.05, 10), st.floats(-200, 200), st.floats(0.1, 10),
       st.floats(-np.pi, np.pi))
def test_resonance_periods_zero_detuning(d, o, dp, op, thp):
    sys = TwoLevelParams(d, o, 0.0)
    imp = Impulse(dp, op, thp)
    for T in resonance_periods(sys, imp, n_max=3):
        assert T > 0
        h = effective_hamiltonian(sys, KickParams2.from_impulse(T, imp))
        assert abs(h.delta_eff) < 1e-8 * max(1.0, abs(d))


def test_resonance_periods_include_n0_branch():
    sys = TwoLevelParams(100.0)
    imp = Impulse(12.3, 1.0, 0.0)
    Ts = resonance_periods(sys, imp, n_max=2)
    assert len(Ts) >= 2
    assert Ts[0] < np.pi / sys.e1


def test_resonance_periods_rejects_bad_n():
    with pytest.raises(ValueError):
        resonance_periods(TwoLevelParams(1.0), Impulse(1.0, 1.0, 0.0), n_max=0)


def test_resonance_phase_roots_zero_f2():
    sys = TwoLevelParams(40.0)
    T, dp, op = 0.0982, 40.0, 1.0
    phases = resonance_phase(sys, T, dp, op)
    assert len(phases) == 2
    for th in phases:
        assert -np.pi < th <= np.pi
        f2 = f_values(40.0, 1.0, 0.0, T, dp, op, th)[1]
        assert abs(f2) < 1e-12


def test_resonance_phase_no_solution():
    sys = TwoLevelParams(40.0)
    # without kick coupling the phase drops out of f2 while the detuning term stays
    with pytest.raises(NoSolution):
        resonance_phase(sys, 0.05, 40.0, 0.0)


def test_resonance_detuning_and_amplitude_roots():
    sys = TwoLevelParams(40.0)
    roots = resonance_detuning(sys, 0.08, 6.0, 0.0, (0.0, 100.0))
    assert roots
    for dp in roots:
        assert abs(f_values(40.0, 1.0, 0.0, 0.08, dp, 6.0, 0.0)[1]) < 1e-10
    amps = resonance_amplitude(sys, 0.08, 40.0, 0.0, (0.0, 20.0))
    assert amps
    for op in amps:
        assert abs(f_values(40.0, 1.0, 0.0, 0.08, 40.0, op, 0.0)[1]) < 1e-10


def test_resonance_search_range_validation():
    with pytest.raises(ValueError):
        resonance_detuning(TwoLevelParams(40.0), 0.08, 6.0, 0.0, (0.0, np.inf))


def test_cdc_points():
    pts = cdc_points(1.0, 3)
    assert pts == pytest.approx([2 * np.sqrt((m * np.pi) ** 2 - 1) for m in (1, 2, 3)])
    assert cdc_points(np.pi, 1) == [0.0]
    assert cdc_points(10.0, 4) == pytest.approx([2 * np.sqrt(16 * np.pi**2 - 100)])
    with pytest.raises(ValueError):
        cdc_points(1.0, 0)


def test_omega_eff_limit_degenerate_and_modulus():
    sys = TwoLevelParams(100.0)
    with pytest.raises(DivisionDegenerate):
        omega_eff_limit(sys, Impulse(0.0, 1.0, 0.0))
    imp = Impulse(50.0, 1.0, 0.0)
    assert omega_eff_limit(sys, imp) == pytest.approx(1.0, abs=1e-12)
    assert omega_eff_limit(sys, imp, f5_correction=False) == pytest.approx(1.0, abs=1e-12)


def test_omega_eff_limit_tracks_numerics_with_phase():
    sys = TwoLevelParams(100.0, 1.0, 0.0)
    m, op, thp = 8, 1.0, 0.7
    dp = 2 * np.sqrt((m * np.pi - 1e-5) ** 2 - op**2)
    imp = Impulse(dp, op, thp)
    T = resonance_periods(sys, imp, n_max=3)[0]
    num = effective_hamiltonian(sys, KickParams2.from_impulse(T, imp)).omega_eff
    assert omega_eff_limit(sys, imp, f5_correction=False) == pytest.approx(num, rel=1e-4)


@settings(max_examples=50, deadline=None)
@given(st.floats(-100, 100), st.floats(0.2, 5), st.floats(0.005, 0.3), st.floats(-100, 100),
       st.floats(0, 8))
def test_stroboscopic_populations_property(d, o, T, dp, op):
    sys = TwoLevelParams(d, o)
    kick = KickParams2(T, dp, op, 0.0)
    h = effective_hamiltonian(sys, kick)
    M = np.array([[0, op], [op, dp]])
    ref = strobe_populations(h2(d, o, 0.0), M, T, 200)
    eff = effective_populations(h.hamiltonian(), T, 200)
    assert np.max(np.abs(ref - eff)) < 1e-9
