"""Periodically kicked two-level system.

One period is free evolution under ``H1`` for a time ``T`` followed by an
instantaneous kick ``exp(-i M1)``, where ``M1`` has the same form as ``H1``
with parameters ``(delta1p, omega1p, theta1p)``. The product is an SU(2)
matrix (up to a global phase) parametrized by four real functions
``f1..f4``. From those we read off a time-independent effective Hamiltonian
and solve ``f2 = 0`` for the kick settings that put the system into
effective resonance.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .errors import DivisionDegenerate, NoSolution
from .linalg import expm_hermitian, two_level_hamiltonian

RESIDUAL_TOL = 1e-10


@dataclass(frozen=True)
class TwoLevelParams:
    """Static system: detuning ``delta1``, coupling ``omega1`` (the unit), phase ``theta1``."""

    delta1: float
    omega1: float = 1.0
    theta1: float = 0.0

    def __post_init__(self):
        if not self.omega1 > 0:
            raise ValueError("omega1 must be positive")
        if not (np.isfinite(self.delta1) and np.isfinite(self.theta1)):
            raise ValueError("delta1 and theta1 must be finite")

    @property
    def e1(self) -> float:
        return float(np.sqrt(self.omega1**2 + self.delta1**2 / 4.0))

    def hamiltonian(self):
        return two_level_hamiltonian(self.delta1, self.omega1, self.theta1)


@dataclass(frozen=True)
class Impulse:
    """Kick generator parameters; the kick acts as ``exp(-i M)`` with ``M`` shaped like ``H1``."""

    delta: float = 0.0
    omega: float = 0.0
    theta: float = 0.0

    def __post_init__(self):
        if self.omega < 0:
            raise ValueError("impulse omega must be non-negative")

    @property
    def e(self) -> float:
        return float(np.sqrt(self.omega**2 + self.delta**2 / 4.0))

    def matrix(self):
        return two_level_hamiltonian(self.delta, self.omega, self.theta)


@dataclass(frozen=True)
class KickParams2:
    period: float
    delta1p: float = 0.0
    omega1p: float = 0.0
    theta1p: float = 0.0

    def __post_init__(self):
        if not self.period > 0:
            raise ValueError("period must be positive")
        if self.omega1p < 0:
            raise ValueError("omega1p must be non-negative")

    @property
    def impulse(self) -> Impulse:
        return Impulse(self.delta1p, self.omega1p, self.theta1p)

    @property
    def e1p(self) -> float:
        return self.impulse.e

    @classmethod
    def from_impulse(cls, period, impulse: Impulse):
        return cls(period, impulse.delta, impulse.omega, impulse.theta)


@dataclass(frozen=True)
class FFunctions:
    """``U(T) = [[f1 + i f2, f4 - i f3], [-f4 - i f3, f1 - i f2]]`` up to a global phase."""

    f1: float
    f2: float
    f3: float
    f4: float

    def matrix(self):
        return np.array(
            [
                [self.f1 + 1j * self.f2, self.f4 - 1j * self.f3],
                [-self.f4 - 1j * self.f3, self.f1 - 1j * self.f2],
            ],
            dtype=complex,
        )

    def norm2(self):
        return self.f1**2 + self.f2**2 + self.f3**2 + self.f4**2


@dataclass(frozen=True)
class EffectiveHamiltonian2:
    delta_eff: float
    omega_eff: float
    theta_eff: float

    def hamiltonian(self):
        return two_level_hamiltonian(self.delta_eff, self.omega_eff, self.theta_eff)


class KickStyle(enum.Enum):
    """Which impulse parameter is varied; the others equal the static system's."""

    FREQUENCY = "frequency"
    AMPLITUDE = "amplitude"
    PHASE = "phase"

    def impulse(self, sys: TwoLevelParams, value: float) -> Impulse:
        if self is KickStyle.FREQUENCY:
            return Impulse(value, sys.omega1, sys.theta1)
        if self is KickStyle.AMPLITUDE:
            return Impulse(sys.delta1, value, sys.theta1)
        return Impulse(sys.delta1, sys.omega1, value)


def _sinc(x):
    """sin(x)/x with the x -> 0 limit."""
    x = np.asarray(x, dtype=float)
    return np.sinc(x / np.pi)


def f_values(delta1, omega1, theta1, period, delta1p, omega1p, theta1p):
    """Vectorized ``(f1, f2, f3, f4)``; every argument may be an array (broadcast)."""
    E1 = np.sqrt(omega1**2 + delta1**2 / 4.0)
    Ep = np.sqrt(omega1p**2 + delta1p**2 / 4.0)
    sE = np.sin(E1 * period)
    cE = np.cos(E1 * period)
    c = np.cos(Ep)
    sp = _sinc(Ep)  # sin(E1')/E1'
    dth = theta1 - theta1p
    f1 = c * cE - (delta1 * delta1p + 4 * omega1 * omega1p * np.cos(dth)) / (4 * E1) * sp * sE
    f2 = (
        delta1 / (2 * E1) * c * sE
        + delta1p / 2 * sp * cE
        + omega1 * omega1p * np.sin(dth) / E1 * sp * sE
    )
    f3 = (
        omega1 * np.cos(theta1) / E1 * c * sE
        + omega1p * np.cos(theta1p) * sp * cE
        + (delta1 * omega1p * np.sin(theta1p) - delta1p * omega1 * np.sin(theta1))
        / (2 * E1) * sp * sE
    )
    f4 = (
        omega1 * np.sin(theta1) / E1 * c * sE
        + omega1p * np.sin(theta1p) * sp * cE
        + (delta1p * omega1 * np.cos(theta1) - delta1 * omega1p * np.cos(theta1p))
        / (2 * E1) * sp * sE
    )
    return f1, f2, f3, f4


def f_functions(sys: TwoLevelParams, kick: KickParams2) -> FFunctions:
    """SU(2) parameters of the one-period propagator ``exp(-i M1) exp(-i H1 T)``."""
    vals = f_values(
        sys.delta1, sys.omega1, sys.theta1,
        kick.period, kick.delta1p, kick.omega1p, kick.theta1p,
    )
    return FFunctions(*(float(v) for v in vals))


def floquet_propagator(sys: TwoLevelParams, kick: KickParams2):
    """Exact one-period propagator ``exp(-i M1) exp(-i H1 T)`` including its global phase."""
    return expm_hermitian(kick.impulse.matrix()) @ expm_hermitian(sys.hamiltonian(), kick.period)


def effective_from_f(f1, f2, f3, f4, period):
    """``(delta_eff, omega_eff, theta_eff)`` from f-values; vectorized.

    Uses ``arccos|f1| = atan2(v, |f1|)`` and ``sqrt(1 - f1^2) = v`` with
    ``v = sqrt(f2^2 + f3^2 + f4^2)``, which stays accurate as ``|f1| -> 1``.
    Where ``v == 0`` the propagator is proportional to the identity and all
    three values are zero.
    """
    f1, f2, f3, f4 = np.broadcast_arrays(*(np.asarray(x, dtype=float) for x in (f1, f2, f3, f4)))
    v = np.sqrt(f2**2 + f3**2 + f4**2)
    angle = np.arctan2(v, np.abs(f1))
    safe_v = np.where(v > 0, v, 1.0)
    scale = np.where(v > 0, angle / (period * safe_v), 0.0)
    delta_eff = 2 * f2 * scale
    omega_eff = np.sqrt(f3**2 + f4**2) * scale
    theta_eff = np.where(v > 0, np.arctan2(f4, f3), 0.0)
    return delta_eff, omega_eff, theta_eff


def effective_hamiltonian(sys: TwoLevelParams, kick: KickParams2) -> EffectiveHamiltonian2:
    """Time-independent ``H_eff`` whose stroboscopic populations match the kicked system.

    For ``f1 >= 0`` ``exp(-i H_eff T)`` equals ``U(T)`` up to a global phase.
    For ``f1 < 0`` it equals ``-U(T)^dagger`` up to a phase, which gives the
    same populations from any basis state.
    """
    f = f_functions(sys, kick)
    d, o, t = effective_from_f(f.f1, f.f2, f.f3, f.f4, kick.period)
    return EffectiveHamiltonian2(float(d), float(o), float(t))


def resonance_phase_offset(sys: TwoLevelParams, impulse: Impulse) -> float:
    """``phi1`` in ``E1 T = -phi1 + n pi``, the principal arctangent in ``(-pi/2, pi/2]``."""
    E1, Ep = sys.e1, impulse.e
    sp = float(_sinc(Ep))
    num = impulse.delta * E1 * sp
    den = sys.delta1 * np.cos(Ep) + 2 * sys.omega1 * impulse.omega * np.sin(sys.theta1 - impulse.theta) * sp
    phi = np.arctan2(num, den)
    if phi > np.pi / 2:
        phi -= np.pi
    elif phi <= -np.pi / 2:
        phi += np.pi
    return float(phi)


def _f2_at(sys, period, impulse):
    return float(f_values(sys.delta1, sys.omega1, sys.theta1, period,
                          impulse.delta, impulse.omega, impulse.theta)[1])


def resonance_periods(sys: TwoLevelParams, impulse: Impulse, n_max: int = 5):
    """Periods ``T_n = (-phi1 + n pi)/E1`` for ``n = 0..n_max`` with ``T_n > 0``.

    Each returned period makes ``f2`` vanish, i.e. ``delta_eff = 0``.
    """
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    phi = resonance_phase_offset(sys, impulse)
    out = []
    for n in range(n_max + 1):
        T = (-phi + n * np.pi) / sys.e1
        if T > 0 and abs(_f2_at(sys, T, impulse)) < RESIDUAL_TOL:
            out.append(float(T))
    return out


def _wrap(angle):
    """Map to (-pi, pi]."""
    a = float(np.mod(angle + np.pi, 2 * np.pi) - np.pi)
    return np.pi if a == -np.pi else a


def resonance_phase(sys: TwoLevelParams, period: float, delta1p: float, omega1p: float):
    """Kick phases ``theta1p`` in ``(-pi, pi]`` that make ``f2`` vanish at fixed ``T``.

    ``f2 = A sin(theta1 - theta1p) + B``; solutions exist only if ``|B/A| <= 1``.
    Returns an empty list when there are none.

    Raises
    ------
    NoSolution
        ``A == 0`` (``sin E1' sin E1T = 0``) while ``B != 0``.
    """
    if period <= 0:
        raise ValueError("period must be positive")
    E1 = sys.e1
    Ep = Impulse(delta1p, omega1p).e
    sp = float(_sinc(Ep))
    sE, cE = np.sin(E1 * period), np.cos(E1 * period)
    A = sys.omega1 * omega1p / E1 * sp * sE
    B = sys.delta1 / (2 * E1) * np.cos(Ep) * sE + delta1p / 2 * sp * cE
    if A == 0.0:
        if B == 0.0:
            return [_wrap(sys.theta1)]
        raise NoSolution("phase does not enter f2 here (sin E1' sin E1T = 0)")
    r = -B / A
    if abs(r) > 1.0 + 1e-12:
        return []
    r = min(1.0, max(-1.0, r))
    base = np.arcsin(r)
    out = []
    for dth in (base, np.pi - base):
        tp = _wrap(sys.theta1 - dth)
        if abs(_f2_at(sys, period, Impulse(delta1p, omega1p, tp))) < RESIDUAL_TOL:
            if not any(abs(tp - q) < 1e-12 for q in out):
                out.append(tp)
    return sorted(out)


def _grid_roots(fn, lo, hi, n_points):
    xs = np.linspace(lo, hi, n_points)
    ys = fn(xs)
    roots = []
    for i in range(len(xs) - 1):
        if ys[i] == 0.0:
            roots.append(float(xs[i]))
        elif ys[i] * ys[i + 1] < 0:
            roots.append(brentq(lambda x: float(fn(np.array([x]))[0]), xs[i], xs[i + 1],
                                xtol=1e-15, rtol=4 * np.finfo(float).eps, maxiter=200))
    if ys[-1] == 0.0:
        roots.append(float(xs[-1]))
    out = []
    for r in roots:
        if abs(float(fn(np.array([r]))[0])) < RESIDUAL_TOL and not any(abs(r - q) < 1e-9 for q in out):
            out.append(float(r))
    return out


def _points(lo, hi, points_per_pi):
    # E1' changes by at most |d x|/2 per unit of delta1p, by |d x| per unit of omega1p
    return int(max(points_per_pi, np.ceil(points_per_pi * abs(hi - lo) / np.pi))) + 1


def resonance_detuning(sys: TwoLevelParams, period, omega1p, theta1p, search_range,
                       points_per_pi: int = 1000):
    """All kick detunings ``delta1p`` in ``search_range`` with ``f2 = 0`` at fixed ``T``.

    Sign changes of ``f2`` on a grid are refined with Brent's method; returns
    an empty list when the range contains no root.
    """
    lo, hi = map(float, search_range)
    if not (np.isfinite(lo) and np.isfinite(hi)) or hi <= lo:
        raise ValueError("search_range must be a finite interval")

    def fn(x):
        return f_values(sys.delta1, sys.omega1, sys.theta1, period, x, omega1p, theta1p)[1]

    return _grid_roots(fn, lo, hi, _points(lo, hi, points_per_pi))


def resonance_amplitude(sys: TwoLevelParams, period, delta1p, theta1p, search_range,
                        points_per_pi: int = 1000):
    """All kick couplings ``omega1p`` in ``search_range`` (clipped at 0) with ``f2 = 0``."""
    lo, hi = map(float, search_range)
    if not (np.isfinite(lo) and np.isfinite(hi)) or hi <= lo:
        raise ValueError("search_range must be a finite interval")
    lo = max(lo, 0.0)

    def fn(x):
        return f_values(sys.delta1, sys.omega1, sys.theta1, period, delta1p, x, theta1p)[1]

    return _grid_roots(fn, lo, hi, _points(lo, hi, points_per_pi))


def cdc_points(omega1p: float, m_max: int):
    """Kick detunings with ``E1' = m pi``: ``2 sqrt((m pi)^2 - omega1p^2)`` for ``m pi >= omega1p``."""
    if m_max < 1:
        raise ValueError("m_max must be >= 1")
    out = []
    for m in range(1, m_max + 1):
        gap = (m * np.pi) ** 2 - omega1p**2
        if gap >= 0:
            out.append(float(2 * np.sqrt(gap)))
    return out


def omega_eff_limit(sys: TwoLevelParams, impulse: Impulse, f5_correction: bool = True) -> float:
    """Closed-form limit of ``omega_eff`` as ``E1' -> (m pi)^-`` at the matching resonance period.

    ``sqrt(|omega1 - (delta1/delta1p) omega1p e^{i(theta1 - theta1p)}|^2 + f5 sin(theta1 - theta1p))``.
    The ``f5`` term vanishes for frequency and amplitude kicks. With
    ``f5_correction=False`` only the modulus term is returned, which tracks the
    numerical limit more closely when the phases differ.

    Raises
    ------
    DivisionDegenerate
        ``impulse.delta == 0``.
    """
    if impulse.delta == 0:
        raise DivisionDegenerate("limit needs a nonzero kick detuning")
    o1, d1, dth = sys.omega1, sys.delta1, sys.theta1 - impulse.theta
    op, dp, Ep = impulse.omega, impulse.delta, impulse.e
    base = abs(o1 - d1 / dp * op * np.exp(1j * dth)) ** 2
    if not f5_correction:
        return float(np.sqrt(base))
    f5 = 4 * o1 * op**2 * (o1 * Ep * np.sin(dth) - o1 * dp * np.cos(dth) + d1 * op) / (Ep * dp**2)
    return float(np.sqrt(max(base + f5 * np.sin(dth), 0.0)))
