"""Finite-duration realization of the kicks.

Each instantaneous kick ``exp(-i M)`` is replaced by a square segment of
duration ``T'`` under the Hamiltonian ``M`` itself. Since ``M`` has
eigenvalues ``delta'/2 +- E1'``, ``exp(-i M T')`` equals ``exp(-i M)`` up to
a phase whenever ``1 - T'`` is a multiple of ``pi/E1'``; the branches
``T' = |1 - 2 k pi/E1'|`` are enumerated here and checked numerically.
"""
from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from ._propagate import strobe_states
from .errors import DegenerateImpulse, InvalidDuration, NumericalDomain
from .linalg import expm_hermitian, expm_hermitian_batch, phase_distance
from .two_level import Impulse, KickParams2, TwoLevelParams, effective_hamiltonian, resonance_periods

EQUIVALENCE_TOL = 1e-10


def kick_equivalence_error(matrix, tprime) -> float:
    """``min_phi max|exp(-i M T') - e^{i phi} exp(-i M)|``."""
    return phase_distance(expm_hermitian(matrix, tprime), expm_hermitian(matrix))


def square_duration(e1prime, k_range, impulse: Impulse | None = None, verify: bool = True):
    """Branches ``(k, T')`` with ``T' = |1 - 2 k pi/E1'| > 0``, sorted by ``T'``.

    With ``verify`` only branches whose square segment reproduces the kick
    up to a phase (error below 1e-10) are kept. The check depends only on
    ``E1'``; without an explicit ``impulse`` a resonant one with that
    ``E1'`` is used.

    Raises
    ------
    DegenerateImpulse
        ``E1' == 0``.
    """
    if not e1prime > 0:
        raise DegenerateImpulse("square duration needs a nonzero kick energy E1'")
    if impulse is None:
        impulse = Impulse(0.0, float(e1prime))
    M = impulse.matrix()
    out = []
    for k in k_range:
        tp = abs(1 - 2 * k * np.pi / e1prime)
        if tp <= 1e-12:
            continue
        if verify and kick_equivalence_error(M, tp) >= EQUIVALENCE_TOL:
            continue
        out.append((int(k), float(tp)))
    return sorted(out, key=lambda kt: (kt[1], kt[0]))


@dataclass(frozen=True, eq=False)
class GeneralDuration:
    tprime: float
    energies: np.ndarray
    hamiltonian: np.ndarray


def general_durations(M, k_choices, tprime) -> GeneralDuration:
    """Replacement Hamiltonian with eigenvalues ``(E_n - 2 k_n pi)/T'`` on the eigenbasis of ``M``.

    ``exp(-i H' T') = exp(-i M)`` up to a phase for any integers ``k_n``.

    Raises
    ------
    InvalidDuration
        ``T' <= 0``.
    """
    if not tprime > 0:
        raise InvalidDuration("replacement duration must be positive")
    M = np.asarray(M, dtype=complex)
    w, V = np.linalg.eigh(0.5 * (M + M.conj().T))
    ks = np.asarray(list(k_choices), dtype=float)
    if ks.shape != w.shape:
        raise ValueError(f"need {len(w)} integers, got {len(ks)}")
    energies = (w - 2 * np.pi * ks) / tprime
    H = (V * energies) @ V.conj().T
    H = 0.5 * (H + H.conj().T)
    err = phase_distance(expm_hermitian(H, tprime), expm_hermitian(M))
    if err >= EQUIVALENCE_TOL:
        raise NumericalDomain(f"replacement propagator off by {err:.3e}")
    return GeneralDuration(float(tprime), energies, H)


def square_effective_coupling(period, tprime, omega_eff) -> float:
    """``T/(T + T') * omega_eff``: the kick's effective coupling diluted by the square segment."""
    if not period > 0 or tprime < 0:
        raise InvalidDuration("need T > 0 and T' >= 0")
    return float(period / (period + tprime) * omega_eff)


@dataclass(frozen=True)
class SquareWaveSpec:
    """One period is ``H1`` for ``T`` then ``M`` for ``T'`` (``T' = 0``: no square segment)."""

    system: TwoLevelParams
    impulse: Impulse
    T: float
    Tprime: float
    branch_k: int
    omega_eff: float

    def __post_init__(self):
        if not self.T > 0 or self.Tprime < 0:
            raise InvalidDuration("need T > 0 and T' >= 0")

    @property
    def Ts(self) -> float:
        return self.T + self.Tprime

    @property
    def omega_eff_square(self) -> float:
        return square_effective_coupling(self.T, self.Tprime, self.omega_eff)

    def period_propagator(self):
        return expm_hermitian(self.impulse.matrix(), self.Tprime) @ expm_hermitian(
            self.system.hamiltonian(), self.T)


def choose_branch(branches, period):
    """Prefer ``T' <= T`` with the smallest ``|k|``; otherwise the smallest ``T'``."""
    if not branches:
        return None
    short = [b for b in branches if b[1] <= period]
    if short:
        return min(short, key=lambda kt: (abs(kt[0]), kt[1]))
    return min(branches, key=lambda kt: (kt[1], abs(kt[0])))


def design_square_wave(sys: TwoLevelParams, impulse: Impulse, k_range=range(-5, 6),
                       verify: bool = True, n_max: int = 5) -> SquareWaveSpec:
    """Square wave built on the smallest resonance period of the kicked system.

    Raises
    ------
    NumericalDomain
        No resonance period or no admissible branch.
    """
    periods = resonance_periods(sys, impulse, n_max)
    if not periods:
        raise NumericalDomain("kicked system has no resonance period")
    T = periods[0]
    omega_eff = effective_hamiltonian(sys, KickParams2.from_impulse(T, impulse)).omega_eff
    branch = choose_branch(square_duration(impulse.e, k_range, impulse, verify), T)
    if branch is None:
        raise NumericalDomain("no square-wave branch in the given k range")
    return SquareWaveSpec(sys, impulse, T, branch[1], branch[0], omega_eff)


def square_wave_populations(spec: SquareWaveSpec, n_periods: int, samples_per_segment: int = 20):
    """Times and populations from ``|1>`` sampled inside both segments of every period."""
    H, M = spec.system.hamiltonian(), spec.impulse.matrix()
    t_free = spec.T * np.arange(1, samples_per_segment + 1) / samples_per_segment
    U_free = expm_hermitian_batch(H, t_free)
    blocks_t = [t_free]
    blocks_U = [U_free]
    if spec.Tprime > 0:
        t_sq = spec.Tprime * np.arange(1, samples_per_segment + 1) / samples_per_segment
        blocks_t.append(spec.T + t_sq)
        blocks_U.append(np.einsum("kij,jl->kil", expm_hermitian_batch(M, t_sq), U_free[-1]))
    taus = np.concatenate(blocks_t)
    Us = np.concatenate(blocks_U)
    psi0 = np.array([1, 0], dtype=complex)
    strobe = strobe_states(Us[-1], psi0, n_periods)
    amps = np.einsum("kij,nj->nki", Us, strobe).reshape(-1, 2)
    times = (spec.Ts * np.arange(n_periods)[:, None] + taus[None, :]).ravel()
    return np.concatenate([[0.0], times]), np.vstack([np.abs(psi0) ** 2, np.abs(amps) ** 2])


def compare_to_resonance_pulse(spec: SquareWaveSpec, horizon=None, samples_per_segment: int = 20,
                               stroboscopic: bool = False) -> float:
    """``max_t |P_j^square(t) - P_j^res(t omega'_eff/omega1)|`` against ``omega1 (|1><2| + h.c.)``.

    The default horizon is one inversion, ``pi/(2 omega'_eff)``. With
    ``stroboscopic`` only the period ends ``t = n Ts`` are compared.
    """
    om = spec.omega_eff_square
    if horizon is None:
        if om <= 0:
            raise NumericalDomain("zero effective coupling: no inversion time")
        horizon = np.pi / (2 * om)
    n = max(1, int(np.ceil(horizon / spec.Ts)))
    t, P = square_wave_populations(spec, n, samples_per_segment)
    keep = t <= horizon + 1e-12
    if stroboscopic:
        per = (len(t) - 1) // n
        keep[1:] &= np.arange(1, len(t)) % per == 0
    p2_res = np.sin(om * t[keep]) ** 2
    return float(np.max(np.abs(P[keep, 1] - p2_res)))


def pulse_schedule_lines(spec: SquareWaveSpec, n_periods: int):
    s, k = spec.system, spec.impulse
    lines = ["# mode, duration, delta, omega, theta  (frequencies in units of omega1, times in 1/omega1)"]
    for _ in range(n_periods):
        lines.append(f"free, {spec.T!r}, {float(s.delta1)!r}, {float(s.omega1)!r}, {float(s.theta1)!r}")
        if spec.Tprime > 0:
            lines.append(f"square, {spec.Tprime!r}, {float(k.delta)!r}, {float(k.omega)!r}, {float(k.theta)!r}")
    return lines


def write_pulse_schedule(spec: SquareWaveSpec, n_periods: int, path) -> None:
    Path(path).write_text("\n".join(pulse_schedule_lines(spec, n_periods)) + "\n")


def read_pulse_schedule(path):
    """List of ``(mode, duration, delta, omega, theta)``."""
    out = []
    for line in Path(path).read_text().splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        mode, *nums = [x.strip() for x in line.split(",")]
        out.append((mode, *(float(x) for x in nums)))
    return out
