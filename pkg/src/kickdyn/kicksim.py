"""Kicked-evolution engine for 2- and 3-level systems.

A :class:`KickSchedule` is a sequence of free and kicked segments. Within
a kicked segment every period is free evolution for ``T`` followed by the
kick ``exp(-i M)``; the sample at the end of a period records the state
after the kick.
"""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import _propagate
from .errors import BudgetExceeded, FrozenDynamics, InvalidDuration
from .linalg import expm_hermitian, expm_hermitian_batch
from .two_level import KickParams2, TwoLevelParams, effective_hamiltonian

FREE = "free"
KICKED = "kicked"
MAX_DEVIATION_PERIODS = 100_000


@dataclass(frozen=True)
class Segment:
    """``mode`` is ``"free"`` or ``"kicked"``; ``duration`` is absolute time."""

    mode: str
    duration: float

    def __post_init__(self):
        if self.mode not in (FREE, KICKED):
            raise ValueError(f"unknown segment mode {self.mode!r}")
        if not self.duration > 0:
            raise InvalidDuration("segment duration must be positive")

    @classmethod
    def kicks(cls, n, period):
        return cls(KICKED, n * period)

    @classmethod
    def free(cls, duration):
        return cls(FREE, duration)


@dataclass(frozen=True, eq=False)
class KickSchedule:
    segments: tuple
    period: float
    impulse: np.ndarray = field(repr=False)

    def __post_init__(self):
        if not self.period > 0:
            raise InvalidDuration("period must be positive")
        object.__setattr__(self, "segments", tuple(self.segments))
        object.__setattr__(self, "impulse", np.asarray(self.impulse, dtype=complex))
        for seg in self.segments:
            if seg.mode == KICKED:
                self.kick_count(seg)

    def kick_count(self, seg: Segment) -> int:
        n = seg.duration / self.period
        k = int(round(n))
        if k < 1 or abs(n - k) > 1e-9 * max(1.0, n):
            raise InvalidDuration(
                f"kicked duration {seg.duration!r} is not a whole number of periods {self.period!r}"
            )
        return k

    @property
    def total_time(self) -> float:
        return float(sum(s.duration for s in self.segments))


@dataclass(frozen=True, eq=False)
class Trajectory:
    times: np.ndarray
    states: np.ndarray

    @property
    def populations(self):
        return np.abs(self.states) ** 2

    @property
    def final_state(self):
        return self.states[-1]


def _as_matrix(h):
    return h.hamiltonian() if hasattr(h, "hamiltonian") else np.asarray(h, dtype=complex)


def evolve(hamiltonian, schedule: KickSchedule, samples_per_period: int = 20, psi0=None) -> Trajectory:
    """Propagate through ``schedule`` starting from ``psi0`` (default ``|1>``).

    Samples are taken every ``T / samples_per_period`` in both segment types,
    plus ``t = 0`` and the exact end of each free segment.
    """
    if samples_per_period < 1:
        raise ValueError("samples_per_period must be >= 1")
    H = _as_matrix(hamiltonian)
    d = H.shape[0]
    psi = np.zeros(d, dtype=complex)
    psi[0] = 1.0
    if psi0 is not None:
        psi = np.asarray(psi0, dtype=complex)
    T = schedule.period
    dt = T / samples_per_period
    times = [np.array([0.0])]
    states = [psi[None, :]]
    t0 = 0.0
    for seg in schedule.segments:
        if seg.mode == FREE:
            m = int(np.floor(seg.duration / dt + 1e-9))
            taus = dt * np.arange(1, m + 1)
            if seg.duration - (taus[-1] if m else 0.0) > 1e-12 * T:
                taus = np.append(taus, seg.duration)
            block = np.einsum("kij,j->ki", expm_hermitian_batch(H, taus), psi)
            times.append(t0 + taus)
        else:
            n = schedule.kick_count(seg)
            taus, Us = _propagate.period_samples(H, schedule.impulse, T, samples_per_period)
            strobe = _propagate.strobe_states(Us[-1], psi, n)
            block = np.einsum("kij,nj->nki", Us, strobe).reshape(-1, d)
            times.append((t0 + T * np.arange(n)[:, None] + taus[None, :]).ravel())
        states.append(block)
        psi = block[-1]
        t0 += seg.duration
    return Trajectory(np.concatenate(times), np.concatenate(states))


def stroboscopic_states(U, psi0, n):
    """``U^k psi0`` for ``k = 0..n``."""
    return _propagate.strobe_states(np.asarray(U, dtype=complex), np.asarray(psi0, dtype=complex), n + 1)


def n_eff(omega_eff, period) -> float:
    """Kick count for a pi inversion, ``pi / (2 omega_eff T)``.

    Raises
    ------
    FrozenDynamics
        ``omega_eff == 0``.
    """
    if period <= 0 or omega_eff < 0:
        raise ValueError("need omega_eff >= 0 and period > 0")
    if omega_eff == 0:
        raise FrozenDynamics("zero effective coupling never inverts the population")
    return float(np.pi / (2 * omega_eff * period))


def inversion_schedule(sys: TwoLevelParams, kick: KickParams2, free_before=1.0, free_after=1.0):
    """Free, then ``round(N_eff)`` kicks, then free."""
    heff = effective_hamiltonian(sys, kick)
    n = int(round(n_eff(heff.omega_eff, kick.period)))
    segs = []
    if free_before > 0:
        segs.append(Segment.free(free_before))
    if n > 0:
        segs.append(Segment.kicks(n, kick.period))
    if free_after > 0:
        segs.append(Segment.free(free_after))
    return KickSchedule(segs, kick.period, kick.impulse.matrix()), n


def validity_deviation(sys: TwoLevelParams, kick: KickParams2, horizon=None, dt=None) -> float:
    """``max_t |P2_kicked(t) - P2_eff(t)|`` from ``|1>``.

    ``dt`` must divide ``T`` (default ``T/20``); ``dt = T`` compares only
    stroboscopic times. The default horizon is 10 effective Rabi periods but
    at least 1000 kick periods, capped at 1e5 periods.
    """
    T = kick.period
    dt = T / 20 if dt is None else dt
    spp = int(round(T / dt))
    if spp < 1 or abs(spp * dt - T) > 1e-9 * T:
        raise ValueError("dt must divide the period")
    heff = effective_hamiltonian(sys, kick)
    if horizon is None:
        e_eff = np.hypot(heff.omega_eff, heff.delta_eff / 2)
        n = 1000
        if heff.omega_eff > 0:
            n = max(n, int(np.ceil(10 * np.pi / e_eff / T)))
    else:
        n = int(np.ceil(horizon / T))
    n = min(n, MAX_DEVIATION_PERIODS)

    H = sys.hamiltonian()
    taus, Us = _propagate.period_samples(H, kick.impulse.matrix(), T, spp)
    we, Ve = np.linalg.eigh(heff.hamiltonian())
    row = Ve.conj()[0]
    psi = np.array([1, 0], dtype=complex)
    worst = 0.0
    done = 0
    while done < n:
        m = min(_propagate.CHUNK_PERIODS, n - done)
        strobe = _propagate.strobe_states(Us[-1], psi, m)
        p2 = np.abs(np.einsum("ki,ni->nk", Us[:, 1, :], strobe)) ** 2
        ts = (T * (done + np.arange(m))[:, None] + taus[None, :]).ravel()
        amp = np.exp(-1j * np.outer(ts, we)) @ (Ve[1] * row)
        worst = max(worst, float(np.max(np.abs(p2.ravel() - np.abs(amp) ** 2))))
        psi = Us[-1] @ strobe[-1]
        done += m
    return worst


def selective_transition(sys, impulse, period_one_photon, period_two_photon, target: int,
                         amplitude_goal: float, max_kicks: int = 100_000,
                         free_before: float = 1.0, free_after: float = 1.0,
                         samples_per_period: int = 20):
    """Drive ``|1>`` towards ``|target>`` (2 or 3) in a ladder, then switch the kicks off.

    The period is the one-photon period for ``target = 2`` and the
    two-photon period for ``target = 3``. The kick count is the first
    stroboscopic step at which the target population reaches
    ``amplitude_goal``.

    Returns
    -------
    (KickSchedule, Trajectory, int)
        The schedule, its trajectory and the kick count.

    Raises
    ------
    BudgetExceeded
        The goal is not reached within ``max_kicks`` kicks.
    """
    if target not in (2, 3):
        raise ValueError("target must be 2 or 3")
    if not 0 <= amplitude_goal <= 1:
        raise ValueError("amplitude_goal must be in [0, 1]")
    T = period_one_photon if target == 2 else period_two_photon
    H = _as_matrix(sys)
    M = impulse.matrix() if hasattr(impulse, "matrix") else np.asarray(impulse, dtype=complex)
    n = 0
    if amplitude_goal > 0:
        U = expm_hermitian(M) @ expm_hermitian(H, T)
        psi0 = np.zeros(H.shape[0], dtype=complex)
        psi0[0] = 1.0
        if free_before > 0:
            psi0 = expm_hermitian(H, free_before) @ psi0
        pops = np.abs(stroboscopic_states(U, psi0, max_kicks)[:, target - 1]) ** 2
        hits = np.nonzero(pops >= amplitude_goal)[0]
        if len(hits) == 0:
            raise BudgetExceeded(
                f"population {amplitude_goal} of state {target} not reached in {max_kicks} kicks"
            )
        n = int(hits[0])
    segs = []
    if free_before > 0:
        segs.append(Segment.free(free_before))
    if n > 0:
        segs.append(Segment.kicks(n, T))
    if free_after > 0:
        segs.append(Segment.free(free_after))
    if not segs:
        segs.append(Segment.free(T))
    schedule = KickSchedule(segs, T, M)
    return schedule, evolve(H, schedule, samples_per_period), n


def _fmt(x) -> str:
    return repr(float(x))


def trajectory_csv(traj: Trajectory) -> str:
    """CSV text: ``t,P1..Pd,re(amp_1),im(amp_1),...`` with round-trip float formatting."""
    d = traj.states.shape[1]
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    header = ["t"] + [f"P{j + 1}" for j in range(d)]
    for j in range(d):
        header += [f"re(amp_{j + 1})", f"im(amp_{j + 1})"]
    w.writerow(header)
    pops = traj.populations
    for t, p, a in zip(traj.times, pops, traj.states):
        row = [_fmt(t)] + [_fmt(x) for x in p]
        for z in a:
            row += [_fmt(z.real), _fmt(z.imag)]
        w.writerow(row)
    return buf.getvalue()


def write_trajectory_csv(traj: Trajectory, path) -> None:
    Path(path).write_text(trajectory_csv(traj))


def read_trajectory_csv(path) -> Trajectory:
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    header = rows[0]
    d = sum(1 for h in header if h.startswith("P"))
    data = np.array([[float(x) for x in r] for r in rows[1:]]).reshape(-1, len(header))
    amps = data[:, 1 + d:]
    states = amps[:, 0::2] + 1j * amps[:, 1::2]
    return Trajectory(data[:, 0], states)
