"""
Kicked three-level ladder: choosing the transition with the period
==================================================================

In a ladder 1-2-3 the same kick drives different transitions depending on
the kick period. One period gives a one-photon transition 1 -> 2 with level
3 idle, another a two-photon transition 1 -> 3 that skips level 2. The
symmetric ladder (delta2 = 2 delta1, equal couplings) also has a closed
form for its effective Hamiltonian.
"""

import numpy as np

from kickdyn.kicksim import selective_transition
from kickdyn.three_level import (
    Impulse3,
    ThreeLevelParams,
    ThreeLevelSpecialParams,
    effective_hamiltonian_special,
    g_coefficients,
    special_resonance_periods,
    sweep_period,
)

system = ThreeLevelParams(delta1=60.0, delta2=40.0, omega1=1.0, omega2=2.0)
impulse = Impulse3(delta1=60.0, delta2=40.0, omega1=1.5, omega2=2.0, theta1=0.0, theta2=0.0)

# %%
# Regimes along the period axis
# -----------------------------
# Each point records the population extrema from level 1 and a label.

for point in sweep_period(system, impulse, [0.03, 0.0424, 0.07, 0.104]):
    print(f"T = {point.period:.4f}: P2max = {point.p2_max:.3f}, P3max = {point.p3_max:.3f} "
          f"-> {point.regime.value}")

# %%
# Selective transfer
# ------------------
# Kick until the target level holds 90% of the population, then stop.

for target in (2, 3):
    _, traj, n = selective_transition(system, impulse, 0.0424, 0.104, target=target,
                                      amplitude_goal=0.9, samples_per_period=4)
    p = traj.populations
    print(f"target {target}: {n} kicks, max P2 = {p[:, 1].max():.3f}, max P3 = {p[:, 2].max():.3f}")

# %%
# Symmetric ladder
# ----------------
# The one-period propagator is fitted once as a trigonometric function of
# the period; its resonance periods and the equal-coupling effective
# Hamiltonian then follow in closed form.

special = ThreeLevelSpecialParams(delta1=100.0, omega1=1.0)
kick = Impulse3.special(18.0, 1.0)
g = g_coefficients(special, kick)
periods = special_resonance_periods(special, kick, n_max=1, g=g)
heff = effective_hamiltonian_special(special, kick, periods[0], g=g)
print(f"\nresonance periods: {np.round(periods, 6)}")
print(f"omega_eff = {heff.omega_eff:.4f}, theta_eff = {heff.theta_eff:.4f}")
