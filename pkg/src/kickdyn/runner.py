"""Execute a :class:`ScenarioConfig` and render its CSV output.

Every command returns text so callers can write it anywhere; rows are
ordered by scan index regardless of how many threads compute them.
"""
from __future__ import annotations

import csv
import io
from concurrent.futures import ThreadPoolExecutor
from itertools import product

import numpy as np

from . import kicksim, squarewave, three_level, two_level
from .config import ScenarioConfig
from .errors import ConfigError, NumericalDomain


def _fmt(x):
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        return repr(float(x))
    return str(x)


def _csv(header, rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([_fmt(x) for x in r])
    return buf.getvalue()


def _pmap(fn, items, threads):
    items = list(items)
    if threads <= 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


def _grid(cfg: ScenarioConfig):
    axes = cfg.scan
    return [dict(zip([a.param for a in axes], (float(v) for v in vals)))
            for vals in product(*(a.values() for a in axes))]


def _two_level(cfg, over):
    s = {**cfg.system, **{k: v for k, v in over.items() if k in cfg.system}}
    k = {**cfg.kick, **{k: v for k, v in over.items() if k in cfg.kick}}
    try:
        sys = two_level.TwoLevelParams(s["delta1"], s["omega1"], s["theta1"])
        imp = two_level.Impulse(k["delta1p"], k["omega1p"], k["theta1p"])
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    return sys, imp


def _three_level(cfg, over):
    s = {**cfg.system, **{k: v for k, v in over.items() if k in cfg.system}}
    k = {**cfg.kick, **{k: v for k, v in over.items() if k in cfg.kick}}
    sys = three_level.ThreeLevelParams(s["delta1"], s["delta2"], s["omega1"], s["omega2"],
                                       s["theta1"], s["theta2"])
    imp = three_level.Impulse3(k["delta1p"], k["delta2p"], k["omega1p"], k["omega2p"],
                               k["theta1p"], k["theta2p"])
    return sys, imp


def _special_impulse(cfg, over):
    k = {**cfg.kick, **over}
    return three_level.Impulse3.special(k["delta1p"], k["omega1p"], k["theta1p"])


def _require_kind(cfg, kind):
    if cfg.kind != kind:
        raise ConfigError(f"command {cfg.command} needs system.kind = {kind}")


def _scan_period(cfg):
    return any(a.param == "period" for a in cfg.scan)


def _resolve_period_2(cfg, sys, imp, over):
    if "period" in over:
        return over["period"]
    if cfg.period is None:
        raise ConfigError("kick.period is required")
    if cfg.period == "auto:resonance":
        periods = two_level.resonance_periods(sys, imp, cfg.run["n_max"])
        return periods[0] if periods else None
    if isinstance(cfg.period, str):
        raise ConfigError(f"{cfg.period} is not available for a two-level system")
    return cfg.period


def _resolve_period_3(cfg, sys, imp, threads, spp):
    if cfg.period is None:
        raise ConfigError("kick.period is required")
    if not isinstance(cfg.period, str):
        return cfg.period
    if cfg.period == "auto:special":
        if not sys.is_special:
            raise ConfigError("auto:special needs delta2 = 2 delta1, omega2 = omega1, theta2 = theta1")
        periods = three_level.special_resonance_periods(
            three_level.ThreeLevelSpecialParams(sys.delta1, sys.omega1, sys.theta1),
            _special_impulse(cfg, {}), cfg.run["n_max"])
        if not periods:
            raise NumericalDomain("no resonance period for the symmetric ladder")
        return periods[0]
    if cfg.period in ("auto:one_photon", "auto:two_photon"):
        if not _scan_period(cfg):
            raise ConfigError(f"{cfg.period} needs a scan over period")
        axis = [a for a in cfg.scan if a.param == "period"][0]
        points = three_level.sweep_period(sys, imp, axis.values(), cfg.run["horizon"], spp, threads)
        want = cfg.period.split(":")[1]
        hits = [p.period for p in points if p.regime.value == want]
        if not hits:
            raise NumericalDomain(f"no {want} period in the scanned range")
        return min(hits)
    raise ConfigError(f"{cfg.period} is not available for a three-level system")


def run_eff2(cfg, threads=1, spp=None):
    _require_kind(cfg, "two_level")
    spp = spp or cfg.run["samples_per_period"]
    style = two_level.KickStyle(cfg.style) if cfg.style else None
    if cfg.scan and isinstance(cfg.period, str) and _scan_period(cfg):
        raise ConfigError("cannot scan period together with an automatic period")

    if not cfg.scan:
        sys, imp = _two_level(cfg, {})
        T = _resolve_period_2(cfg, sys, imp, {})
        if T is None:
            raise NumericalDomain("no resonance period for this kick")
        kick = two_level.KickParams2.from_impulse(T, imp)
        f = two_level.f_functions(sys, kick)
        h = two_level.effective_hamiltonian(sys, kick)
        m = imp.e / np.pi
        cdc = h.omega_eff < 1e-3 and round(m) >= 1 and abs(m - round(m)) < 1e-3
        rows = [
            ("delta1", sys.delta1), ("omega1", sys.omega1), ("theta1", sys.theta1),
            ("period", T), ("delta1p", imp.delta), ("omega1p", imp.omega), ("theta1p", imp.theta),
            ("e1", sys.e1), ("e1p", imp.e),
            ("f1", f.f1), ("f2", f.f2), ("f3", f.f3), ("f4", f.f4),
            ("delta_eff", h.delta_eff), ("omega_eff", h.omega_eff), ("theta_eff", h.theta_eff),
            ("cdc", bool(cdc)),
        ]
        for n, t in enumerate(two_level.resonance_periods(sys, imp, cfg.run["n_max"])):
            rows.append((f"resonance_period_{n}", t))
        for m, d in enumerate(two_level.cdc_points(imp.omega, cfg.run["m_max"])):
            rows.append((f"cdc_delta1p_{m}", d))
        if style is not None and imp.delta != 0:
            rows.append(("omega_eff_limit", two_level.omega_eff_limit(sys, imp)))
        return _csv(["quantity", "value"], rows)

    names = [a.param for a in cfg.scan]
    header = names + ["period", "f1", "f2", "f3", "f4", "delta_eff", "omega_eff", "theta_eff"]
    if style is not None:
        header.append("omega_eff_limit")
    if cfg.run["validity"]:
        header.append("p2d")

    def point(over):
        sys, imp = _two_level(cfg, over)
        T = _resolve_period_2(cfg, sys, imp, over)
        vals = [over[n] for n in names]
        if T is None or T <= 0:
            return vals + [float("nan")] * (len(header) - len(vals))
        kick = two_level.KickParams2.from_impulse(T, imp)
        f = two_level.f_functions(sys, kick)
        h = two_level.effective_hamiltonian(sys, kick)
        row = vals + [T, f.f1, f.f2, f.f3, f.f4, h.delta_eff, h.omega_eff, h.theta_eff]
        if style is not None:
            row.append(two_level.omega_eff_limit(sys, imp) if imp.delta != 0 else float("nan"))
        if cfg.run["validity"]:
            row.append(kicksim.validity_deviation(sys, kick, cfg.run["horizon"], T / spp))
        return row

    return _csv(header, _pmap(point, _grid(cfg), threads))


def run_sweep3(cfg, threads=1, spp=None):
    _require_kind(cfg, "three_level")
    spp = spp or cfg.run["samples_per_period"]
    if cfg.run["mode"] == "special":
        if len(cfg.scan) != 1 or cfg.scan[0].param != "delta1p":
            raise ConfigError("special mode scans exactly one axis: delta1p")
        sys, _ = _three_level(cfg, {})
        if not sys.is_special:
            raise ConfigError("special mode needs delta2 = 2 delta1, omega2 = omega1, theta2 = theta1")
        special = three_level.ThreeLevelSpecialParams(sys.delta1, sys.omega1, sys.theta1)

        def point(over):
            imp = _special_impulse(cfg, over)
            periods = three_level.special_resonance_periods(special, imp, cfg.run["n_max"])
            if not periods:
                return [over["delta1p"], float("nan"), float("nan"), float("nan")]
            h = three_level.effective_hamiltonian_special(special, imp, periods[0])
            return [over["delta1p"], periods[0], h.omega_eff, h.theta_eff]

        return _csv(["delta1p", "period", "omega_eff", "theta_eff"],
                    _pmap(point, _grid(cfg), threads))

    if len(cfg.scan) != 1 or cfg.scan[0].param != "period":
        raise ConfigError("sweep3 scans exactly one axis: period")
    sys, imp = _three_level(cfg, {})
    periods = cfg.scan[0].values()
    if np.any(periods <= 0):
        raise ConfigError("scanned periods must be positive")
    points = three_level.sweep_period(sys, imp, periods, cfg.run["horizon"], spp, threads)
    return _csv(["period", "p1_min", "p2_max", "p3_max", "regime"],
                [(p.period, p.p1_min, p.p2_max, p.p3_max, p.regime.value) for p in points])


def _schedule_from(cfg, period, matrix):
    segs = []
    for seg in cfg.run["schedule"]:
        if seg["mode"] == "free":
            segs.append(kicksim.Segment.free(seg["duration"]))
        else:
            segs.append(kicksim.Segment.kicks(seg["periods"], period))
    return kicksim.KickSchedule(segs, period, matrix)


def run_inversion(cfg, threads=1, spp=None):
    spp = spp or cfg.run["samples_per_period"]
    if cfg.kind == "two_level":
        sys, imp = _two_level(cfg, {})
        T = _resolve_period_2(cfg, sys, imp, {})
        if T is None:
            raise NumericalDomain("no resonance period for this kick")
        if cfg.run["schedule"] is None:
            kick = two_level.KickParams2.from_impulse(T, imp)
            schedule, _ = kicksim.inversion_schedule(sys, kick, cfg.run["free_before"], cfg.run["free_after"])
        else:
            schedule = _schedule_from(cfg, T, imp.matrix())
        traj = kicksim.evolve(sys.hamiltonian(), schedule, spp)
    else:
        sys, imp = _three_level(cfg, {})
        if cfg.run["schedule"] is None:
            raise ConfigError("three-level inversion needs run.schedule")
        T = _resolve_period_3(cfg, sys, imp, threads, spp)
        traj = kicksim.evolve(sys.hamiltonian(), _schedule_from(cfg, T, imp.matrix()), spp)
    return kicksim.trajectory_csv(traj)


def run_squarewave(cfg, threads=1, spp=None, schedule_path=None):
    _require_kind(cfg, "two_level")
    spp = spp or cfg.run["samples_per_period"]
    ks = range(cfg.run["k_min"], cfg.run["k_max"] + 1)

    def design(over):
        sys, imp = _two_level(cfg, over)
        return squarewave.design_square_wave(sys, imp, ks, cfg.run["verify"], cfg.run["n_max"])

    if cfg.scan:
        names = [a.param for a in cfg.scan]

        def point(over):
            try:
                sp = design(over)
            except NumericalDomain:
                return [over[n] for n in names] + [float("nan")] * 5
            return [over[n] for n in names] + [sp.T, sp.Tprime, sp.branch_k, sp.omega_eff,
                                                sp.omega_eff_square]

        return _csv(names + ["period", "tprime", "branch_k", "omega_eff", "omega_eff_square"],
                    _pmap(point, _grid(cfg), threads))

    sp = design({})
    if schedule_path is not None:
        n = int(min(10_000, np.ceil(np.pi / (2 * sp.omega_eff_square) / sp.Ts)))
        squarewave.write_pulse_schedule(sp, max(n, 1), schedule_path)
    if cfg.run["compare"]:
        om = sp.omega_eff_square
        horizon = cfg.run["horizon"] or np.pi / (2 * om)
        n = max(1, int(np.ceil(horizon / sp.Ts)))
        t, P = squarewave.square_wave_populations(sp, n, spp)
        keep = t <= horizon + 1e-12
        return _csv(["t", "P1_square", "P2_square", "P2_resonance"],
                    zip(t[keep], P[keep, 0], P[keep, 1], np.sin(om * t[keep]) ** 2))
    rows = [
        ("period", sp.T), ("tprime", sp.Tprime), ("branch_k", sp.branch_k), ("ts", sp.Ts),
        ("omega_eff", sp.omega_eff), ("omega_eff_square", sp.omega_eff_square),
        ("equivalence_error", squarewave.kick_equivalence_error(sp.impulse.matrix(), sp.Tprime)),
    ]
    return _csv(["quantity", "value"], rows)


RUNNERS = {
    "eff2": run_eff2,
    "sweep3": run_sweep3,
    "inversion": run_inversion,
    "squarewave": run_squarewave,
}


def run(cfg: ScenarioConfig, threads: int = 1, samples_per_period: int | None = None, **extra) -> str:
    return RUNNERS[cfg.command](cfg, threads, samples_per_period, **extra)
