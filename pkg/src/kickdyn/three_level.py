"""Periodically kicked three-level ladder.

Two tools live here:

* a closed-form effective Hamiltonian for the symmetric ladder
  (``delta2 = 2 delta1``, equal couplings and phases, same pattern in the
  kick), where the one-period propagator is a spin-1 rotation whose
  entries ``g_k(T)`` are trigonometric in ``E1 T``;
* a brute-force period sweep for the general ladder that records the
  population extrema and labels the regime.
"""
from __future__ import annotations

import enum
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import _propagate
from .errors import ConsistencyViolation, ProbeDegeneracy
from .linalg import ladder_hamiltonian, special_ladder_propagator

CONSISTENCY_TOL = 1e-8
RECONSTRUCTION_TOL = 1e-9


@dataclass(frozen=True)
class ThreeLevelParams:
    """Ladder with energies ``(0, delta1, delta2)`` and couplings 1-2 and 2-3."""

    delta1: float
    delta2: float
    omega1: float = 1.0
    omega2: float = 1.0
    theta1: float = 0.0
    theta2: float = 0.0

    def __post_init__(self):
        vals = (self.delta1, self.delta2, self.omega1, self.omega2, self.theta1, self.theta2)
        if not all(np.isfinite(v) for v in vals):
            raise ValueError("ladder parameters must be finite")

    def hamiltonian(self):
        return ladder_hamiltonian(self.delta1, self.delta2, self.omega1, self.omega2,
                                  self.theta1, self.theta2)

    @property
    def is_special(self) -> bool:
        return (self.delta2 == 2 * self.delta1 and self.omega2 == self.omega1
                and self.theta2 == self.theta1)


@dataclass(frozen=True)
class ThreeLevelSpecialParams:
    """Symmetric ladder: ``delta2 = 2 delta1``, ``omega2 = omega1``, ``theta2 = theta1``."""

    delta1: float
    omega1: float = 1.0
    theta1: float = 0.0

    @property
    def delta2(self):
        return 2 * self.delta1

    @property
    def omega2(self):
        return self.omega1

    @property
    def theta2(self):
        return self.theta1

    @property
    def e1(self) -> float:
        return float(np.sqrt(self.delta1**2 + 2 * self.omega1**2))

    def hamiltonian(self):
        return self.general().hamiltonian()

    def general(self) -> ThreeLevelParams:
        return ThreeLevelParams(self.delta1, self.delta2, self.omega1, self.omega2,
                                self.theta1, self.theta2)


@dataclass(frozen=True)
class Impulse3:
    """Kick generator for the ladder; the kick acts as ``exp(-i M)``."""

    delta1: float = 0.0
    delta2: float = 0.0
    omega1: float = 0.0
    omega2: float = 0.0
    theta1: float = 0.0
    theta2: float = 0.0

    @classmethod
    def special(cls, delta, omega, theta=0.0):
        return cls(delta, 2 * delta, omega, omega, theta, theta)

    def matrix(self):
        return ladder_hamiltonian(self.delta1, self.delta2, self.omega1, self.omega2,
                                  self.theta1, self.theta2)

    @property
    def is_special(self) -> bool:
        return (self.delta2 == 2 * self.delta1 and self.omega2 == self.omega1
                and self.theta2 == self.theta1)

    @property
    def is_zero(self) -> bool:
        return self.delta1 == self.delta2 == self.omega1 == self.omega2 == 0

    @property
    def e1(self) -> float:
        """``sqrt(delta1^2 + 2 omega1^2)``; meaningful for the symmetric pattern."""
        return float(np.sqrt(self.delta1**2 + 2 * self.omega1**2))


@dataclass(frozen=True)
class KickParams3:
    period: float
    impulse: Impulse3

    def __post_init__(self):
        if not self.period > 0:
            raise ValueError("period must be positive")


class Regime(enum.Enum):
    ONE_PHOTON = "one_photon"
    TWO_PHOTON = "two_photon"
    FULL_RESONANCE = "full_resonance"
    FROZEN = "frozen"
    MIXED = "mixed"


@dataclass(frozen=True)
class SweepPoint:
    period: float
    p1_min: float
    p2_max: float
    p3_max: float
    regime: Regime


@dataclass(frozen=True)
class EffectiveHamiltonian3:
    """Pure-coupling effective ladder with equal couplings ``omega_eff`` and phase ``theta_eff``."""

    omega_eff: float
    theta_eff: float

    def hamiltonian(self):
        return ladder_hamiltonian(0.0, 0.0, self.omega_eff, self.omega_eff,
                                  self.theta_eff, self.theta_eff)


@dataclass(frozen=True)
class ConsistencyResult:
    passed: bool
    residuals: np.ndarray


# (row, col, part) of each g_k in the scaled one-period matrix
_G_LAYOUT = (
    (0, 0, "re"), (0, 0, "im"),   # g1, g2
    (1, 0, "re"), (1, 0, "im"),   # g3, g4
    (0, 2, "re"), (0, 2, "-im"),  # g5, g6
    (1, 1, "re"),                 # g7
    (0, 1, "re"), (0, 1, "im"),   # g8, g9
)


def _read_g(W):
    out = np.empty(9)
    for k, (i, j, part) in enumerate(_G_LAYOUT):
        z = W[i, j]
        out[k] = z.real if part == "re" else (z.imag if part == "im" else -z.imag)
    return out


def _require_special(sys, impulse):
    if not getattr(sys, "delta2", 2 * sys.delta1) == 2 * sys.delta1 or not (
        getattr(sys, "omega2", sys.omega1) == sys.omega1
        and getattr(sys, "theta2", sys.theta1) == sys.theta1
    ):
        raise ValueError("system does not have the symmetric ladder pattern")
    if not impulse.is_special:
        raise ValueError("impulse does not have the symmetric ladder pattern")


def scaled_period_matrix(sys, impulse: Impulse3, period):
    """One-period propagator with the prefactor ``e^{-i delta1'} e^{-i delta1 T}/(E1'^2 E1^2)`` removed.

    With a zero impulse the ``1/E1'^2`` factor is taken as 1.
    """
    E1 = float(np.sqrt(sys.delta1**2 + 2 * sys.omega1**2))
    Ep = impulse.e1
    free = special_ladder_propagator(sys.delta1, sys.omega1, sys.theta1, period)
    free = free * E1**2 * np.exp(1j * sys.delta1 * period)
    kick = special_ladder_propagator(impulse.delta1, impulse.omega1, impulse.theta1, 1.0)
    kick = kick * (Ep**2 if Ep > 0 else 1.0) * np.exp(1j * impulse.delta1)
    return kick @ free


@dataclass(frozen=True)
class GCoefficients:
    """``g_k(T) = a[k, 0] cos(E1 T) + a[k, 1] sin(E1 T) + a[k, 2]`` for ``k = 1..9``."""

    a: np.ndarray
    e1: float
    e1p: float

    def g(self, period):
        """The nine ``g_k``; for array input the last axis indexes ``k``."""
        x = self.e1 * np.asarray(period, dtype=float)
        basis = np.stack([np.cos(x), np.sin(x), np.ones_like(x)], axis=-1)
        return basis @ self.a.T

    def normalized(self, period):
        """``g_k / (E1 E1')^2`` (``E1'`` taken as 1 for a zero impulse)."""
        scale = self.e1 * (self.e1p if self.e1p > 0 else 1.0)
        return self.g(period) / scale**2


def g_coefficients(sys, impulse: Impulse3, max_retries: int = 5, seed: int = 0) -> GCoefficients:
    """Recover the ``a_{kj}`` by probing the one-period propagator at three periods.

    The fit is checked against direct evaluation at 20 further periods.

    Raises
    ------
    ProbeDegeneracy
        The probe system stayed ill-conditioned (or the fit failed) after
        ``max_retries`` retries.
    """
    _require_special(sys, impulse)
    E1 = float(np.sqrt(sys.delta1**2 + 2 * sys.omega1**2))
    Ep = impulse.e1
    scale = (E1 * (Ep if Ep > 0 else 1.0)) ** 2
    rng = np.random.default_rng(seed)
    phases = np.array([0.4, 2.5, 4.4])
    for _ in range(max_retries + 1):
        A = np.stack([np.cos(phases), np.sin(phases), np.ones(3)], axis=1)
        if np.linalg.cond(A) < 1e8:
            G = np.array([_read_g(scaled_period_matrix(sys, impulse, x / E1)) for x in phases])
            coeffs = GCoefficients(np.linalg.solve(A, G).T, E1, Ep)
            probe_T = rng.uniform(0.0, 6 * np.pi, 20) / E1
            direct = np.array([_read_g(scaled_period_matrix(sys, impulse, t)) for t in probe_T])
            if np.max(np.abs(coeffs.g(probe_T) - direct)) / scale < RECONSTRUCTION_TOL:
                return coeffs
        phases = rng.uniform(0.0, 2 * np.pi, 3)
    raise ProbeDegeneracy("could not fit g-coefficients from probe periods")


def consistency_residuals(gn):
    """Residuals of the pure-coupling conditions on normalized ``g`` values."""
    g1, g2, g3, g4, g5, g6, g7, g8, g9 = gn
    return np.array([
        g3 + g8,
        g4 - g9,
        2 * g3 * g4 * g5 + g6 * (g4**2 - g3**2),
        g1 + np.hypot(g5, g6) - 1,
        2 * g1 - g7 - 1,
        g2,
    ])


def consistency_check(g: GCoefficients, period, tol: float = CONSISTENCY_TOL) -> ConsistencyResult:
    """Does the one-period propagator at ``period`` have the pure equal-coupling form?"""
    res = consistency_residuals(g.normalized(period))
    return ConsistencyResult(bool(np.all(np.abs(res) < tol)), res)


def _g2_roots(g: GCoefficients, n_max):
    a21, a22, a23 = g.a[1]
    R = np.hypot(a21, a22)
    if R == 0 or abs(a23) > R:
        return []
    psi = np.arctan2(a22, a21)
    acos = np.arccos(-a23 / R)
    out = set()
    for n in range(-1, n_max + 1):
        for sign in (1, -1):
            T = (psi + sign * acos + 2 * n * np.pi) / g.e1
            if T > 0:
                out.add(float(T))
    return sorted(out)


def special_resonance_periods(sys, impulse: Impulse3, n_max: int = 3, g: GCoefficients | None = None):
    """Periods in ``(0, 2 pi (n_max + 1)/E1)`` where the kicked symmetric ladder acts as a
    resonant equal-coupling ladder (``g2 = 0`` and every consistency condition holds)."""
    if impulse.is_zero:
        return []
    g = g if g is not None else g_coefficients(sys, impulse)
    limit = 2 * np.pi * (n_max + 1) / g.e1
    return [T for T in _g2_roots(g, n_max) if T < limit and consistency_check(g, T).passed]


def closed_form_period_candidates(g: GCoefficients, n_max: int = 3):
    """``(arcsin(-a23/R) - arctan(a22/a21) + m pi)/E1`` for ``m = 0..2 n_max + 1``.

    This closed form is close to, but not exactly at, the roots of ``g2``;
    it is kept for comparison with :func:`special_resonance_periods`.
    """
    a21, a22, a23 = g.a[1]
    R = np.hypot(a21, a22)
    if R == 0 or abs(a23) > R:
        return []
    base = np.arcsin(-a23 / R) - np.arctan(a22 / a21)
    Ts = [(base + m * np.pi) / g.e1 for m in range(2 * n_max + 2)]
    return [float(T) for T in Ts if T > 0]


def effective_hamiltonian_special(sys, impulse: Impulse3, period, g: GCoefficients | None = None,
                                  tol: float = CONSISTENCY_TOL) -> EffectiveHamiltonian3:
    """Equal-coupling effective ladder at a resonance period of the symmetric ladder.

    ``omega_eff = (sqrt 2/T) arccos sqrt(g1~)`` and
    ``theta_eff = atan2(-g3, -g4)``; with that phase ``exp(-i H_eff T)``
    equals the one-period propagator up to a global phase.

    Raises
    ------
    ConsistencyViolation
        The propagator at ``period`` is not of the pure-coupling form, or
        ``g1~`` lies outside ``[0, 1]``.
    """
    g = g if g is not None else g_coefficients(sys, impulse)
    check = consistency_check(g, period, tol)
    if not check.passed:
        raise ConsistencyViolation(
            f"period {period!r} fails the pure-coupling conditions "
            f"(max residual {np.max(np.abs(check.residuals)):.3e})"
        )
    gn = g.normalized(period)
    g1 = gn[0]
    if g1 < -1e-10 or g1 > 1 + 1e-10:
        raise ConsistencyViolation(f"normalized g1 = {g1!r} outside [0, 1]")
    root = np.sqrt(min(1.0, max(0.0, g1)))
    omega = float(np.sqrt(2) / period * np.arccos(root))
    theta = float(np.arctan2(-gn[2], -gn[3])) if omega > 0 else 0.0
    return EffectiveHamiltonian3(omega, theta)


def classify(p1_min, p2_max, p3_max) -> Regime:
    """Regime label from population extrema (first matching rule wins)."""
    if p2_max > 0.9 and p3_max < 0.1:
        return Regime.ONE_PHOTON
    if p3_max > 0.9 and p2_max < 0.1:
        return Regime.TWO_PHOTON
    if p1_min < 0.05 and p2_max > 0.4 and p3_max > 0.4:
        return Regime.FULL_RESONANCE
    if p1_min > 0.95:
        return Regime.FROZEN
    return Regime.MIXED


def default_horizon(sys: ThreeLevelParams, period) -> int:
    """``max(200, 1.5 pi/(omega_guess T))`` periods with ``omega_guess = omega1 omega2/|delta1|``."""
    n = 200
    if sys.delta1 != 0 and sys.omega1 * sys.omega2 > 0:
        guess = sys.omega1 * sys.omega2 / abs(sys.delta1)
        n = max(n, int(np.ceil(1.5 * np.pi / (guess * period))))
    return n


def sweep_point(sys: ThreeLevelParams, impulse: Impulse3, period, horizon=None,
                samples_per_period: int = 20) -> SweepPoint:
    n = default_horizon(sys, period) if horizon is None else int(horizon)
    psi0 = np.array([1, 0, 0], dtype=complex)
    pmin, pmax = _propagate.population_extrema(
        sys.hamiltonian(), impulse.matrix(), period, samples_per_period, psi0, n)
    p1, p2, p3 = float(pmin[0]), float(pmax[1]), float(pmax[2])
    return SweepPoint(float(period), p1, p2, p3, classify(p1, p2, p3))


def sweep_period(sys: ThreeLevelParams, impulse: Impulse3, periods, horizon=None,
                 samples_per_period: int = 20, threads: int = 1):
    """Population extrema and regime label for each period in ``periods``.

    Starts from ``|1>``; ``horizon`` is a period count (default from
    :func:`default_horizon`). Output order follows ``periods``.
    """
    periods = [float(T) for T in np.atleast_1d(periods)]
    if any(T <= 0 for T in periods):
        raise ValueError("periods must be positive")

    def run(T):
        return sweep_point(sys, impulse, T, horizon, samples_per_period)

    if threads <= 1 or len(periods) < 2:
        return [run(T) for T in periods]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(run, periods))
