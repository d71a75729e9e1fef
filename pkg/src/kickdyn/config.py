"""Scenario configuration files (YAML) with line-anchored validation."""
from __future__ import annotations

import math
import re
from dataclasses import dataclass, field

import numpy as np
import yaml

from .errors import ConfigError

HEADER = "# kickdyn scenario; frequencies in units of omega1, times in units of 1/omega1\n"

COMMANDS = ("eff2", "sweep3", "inversion", "squarewave")
KINDS = ("two_level", "three_level")
STYLES = ("frequency", "amplitude", "phase")
AUTO_PERIODS = ("auto:resonance", "auto:one_photon", "auto:two_photon", "auto:special")

SYSTEM_KEYS = {
    "two_level": ("kind", "delta1", "omega1", "theta1"),
    "three_level": ("kind", "delta1", "delta2", "omega1", "omega2", "theta1", "theta2"),
}
KICK_KEYS = {
    "two_level": ("period", "delta1p", "omega1p", "theta1p", "style"),
    "three_level": ("period", "delta1p", "delta2p", "omega1p", "omega2p", "theta1p", "theta2p"),
}
SCAN_PARAMS = ("period", "delta1", "delta1p", "delta2p", "omega1p", "omega2p", "theta1p", "theta2p")
RUN_DEFAULTS = {
    "horizon": None,
    "samples_per_period": 20,
    "schedule": None,
    "n_max": 5,
    "m_max": 10,
    "validity": False,
    "verify": True,
    "k_min": -5,
    "k_max": 5,
    "compare": False,
    "mode": "regime",
    "free_before": 1.0,
    "free_after": 5.0,
}
TOP_KEYS = ("command", "system", "kick", "scan", "run", "output")

_PI_EXPR = re.compile(r"^\s*([+-]?)\s*(\d+(?:\.\d*)?)?\s*\*?\s*pi\s*(?:/\s*(\d+(?:\.\d*)?))?\s*$")


def _lines(node, path=(), out=None):
    """Map every key path in a composed YAML tree to its 1-based line."""
    out = {} if out is None else out
    out[path] = node.start_mark.line + 1
    if isinstance(node, yaml.MappingNode):
        for k, v in node.value:
            key = path + (k.value,)
            _lines(v, key, out)
            out[key] = k.start_mark.line + 1
    elif isinstance(node, yaml.SequenceNode):
        for i, v in enumerate(node.value):
            _lines(v, path + (i,), out)
    return out


class _Ctx:
    def __init__(self, lines):
        self.lines = lines

    def line(self, path):
        path = tuple(path)
        while path not in self.lines and path:
            path = path[:-1]
        return self.lines.get(path)

    def fail(self, path, message):
        raise ConfigError(message, self.line(path))

    def number(self, value, path, *, positive=False, nonneg=False, integer=False):
        name = ".".join(str(p) for p in path)
        if isinstance(value, str):
            m = _PI_EXPR.match(value)
            if not m or integer:
                self.fail(path, f"{name}: expected a number, got {value!r}")
            sign, a, b = m.groups()
            value = (-1 if sign == "-" else 1) * float(a or 1) * math.pi / float(b or 1)
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            self.fail(path, f"{name}: expected a number, got {value!r}")
        if integer and (not float(value).is_integer()):
            self.fail(path, f"{name}: expected an integer, got {value!r}")
        if not math.isfinite(value):
            self.fail(path, f"{name}: must be finite")
        if positive and not value > 0:
            self.fail(path, f"{name}: must be positive")
        if nonneg and value < 0:
            self.fail(path, f"{name}: must be non-negative")
        return int(value) if integer else float(value)

    def mapping(self, value, path, allowed):
        if value is None:
            return {}
        if not isinstance(value, dict):
            self.fail(path, f"{'.'.join(map(str, path)) or 'config'}: expected a mapping")
        for k in value:
            if k not in allowed:
                self.fail(tuple(path) + (k,), f"unknown key {k!r}")
        return value


@dataclass(frozen=True)
class Axis:
    param: str
    start: float
    stop: float
    num: int

    def values(self):
        return np.linspace(self.start, self.stop, self.num)


@dataclass
class ScenarioConfig:
    command: str
    kind: str
    system: dict
    kick: dict
    period: object = None
    style: str | None = None
    scan: list = field(default_factory=list)
    run: dict = field(default_factory=lambda: dict(RUN_DEFAULTS))
    output: str | None = None

    def to_dict(self):
        kick = dict(self.kick)
        if self.period is not None:
            kick = {"period": self.period, **kick}
        if self.style is not None:
            kick["style"] = self.style
        d = {
            "command": self.command,
            "system": {"kind": self.kind, **self.system},
            "kick": kick,
        }
        if self.scan:
            d["scan"] = [{"param": a.param, "start": a.start, "stop": a.stop, "num": a.num}
                         for a in self.scan]
        d["run"] = {k: v for k, v in self.run.items() if v != RUN_DEFAULTS[k]}
        if not d["run"]:
            del d["run"]
        if self.output:
            d["output"] = {"path": self.output}
        return d


def dump_config(cfg: ScenarioConfig) -> str:
    return HEADER + yaml.safe_dump(cfg.to_dict(), sort_keys=False, default_flow_style=False)


def parse_config(data, lines=None) -> ScenarioConfig:
    """Validate a plain mapping (as loaded from YAML) into a :class:`ScenarioConfig`."""
    ctx = _Ctx(lines or {})
    top = ctx.mapping(data, (), TOP_KEYS)
    command = top.get("command")
    if command not in COMMANDS:
        ctx.fail(("command",), f"command must be one of {', '.join(COMMANDS)}")

    raw_sys = ctx.mapping(top.get("system"), ("system",), SYSTEM_KEYS["three_level"])
    kind = raw_sys.get("kind", "two_level")
    if kind not in KINDS:
        ctx.fail(("system", "kind"), f"system.kind must be one of {', '.join(KINDS)}")
    ctx.mapping(raw_sys, ("system",), SYSTEM_KEYS[kind])
    if "delta1" not in raw_sys:
        ctx.fail(("system",), "system.delta1 is required")
    system = {}
    for key in SYSTEM_KEYS[kind][1:]:
        default = {"delta2": None, "omega1": 1.0, "omega2": 1.0}.get(key, 0.0)
        if key in raw_sys:
            p = ("system", key)
            system[key] = ctx.number(raw_sys[key], p, positive=key == "omega1",
                                     nonneg=key == "omega2")
        elif default is None:
            ctx.fail(("system",), f"system.{key} is required")
        else:
            system[key] = default

    raw_kick = ctx.mapping(top.get("kick"), ("kick",), KICK_KEYS[kind])
    kick = {}
    for key in KICK_KEYS[kind]:
        if key in ("period", "style") or key not in raw_kick:
            if key not in ("period", "style"):
                kick[key] = 0.0
            continue
        kick[key] = ctx.number(raw_kick[key], ("kick", key), nonneg=key.startswith("omega"))
    period = raw_kick.get("period")
    if isinstance(period, str) and period.strip().startswith("auto:"):
        if period.strip() not in AUTO_PERIODS:
            ctx.fail(("kick", "period"), f"period must be a number or one of {', '.join(AUTO_PERIODS)}")
        period = period.strip()
    elif period is not None:
        period = ctx.number(period, ("kick", "period"), positive=True)
    style = raw_kick.get("style")
    if style is not None and style not in STYLES:
        ctx.fail(("kick", "style"), f"style must be one of {', '.join(STYLES)}")

    scan = []
    raw_scan = top.get("scan")
    if raw_scan is not None:
        if not isinstance(raw_scan, list) or not 1 <= len(raw_scan) <= 2:
            ctx.fail(("scan",), "scan must be a list of one or two axes")
        for i, ax in enumerate(raw_scan):
            ax = ctx.mapping(ax, ("scan", i), ("param", "start", "stop", "num"))
            for req in ("param", "start", "stop", "num"):
                if req not in ax:
                    ctx.fail(("scan", i), f"scan axis needs '{req}'")
            if ax["param"] not in SCAN_PARAMS:
                ctx.fail(("scan", i, "param"), f"cannot scan {ax['param']!r}")
            scan.append(Axis(
                ax["param"],
                ctx.number(ax["start"], ("scan", i, "start")),
                ctx.number(ax["stop"], ("scan", i, "stop")),
                ctx.number(ax["num"], ("scan", i, "num"), nonneg=True, integer=True),
            ))

    raw_run = ctx.mapping(top.get("run"), ("run",), tuple(RUN_DEFAULTS))
    run = dict(RUN_DEFAULTS)
    for key, value in raw_run.items():
        p = ("run", key)
        if key in ("validity", "verify", "compare"):
            if not isinstance(value, bool):
                ctx.fail(p, f"run.{key}: expected true or false")
            run[key] = value
        elif key == "mode":
            if value not in ("regime", "special"):
                ctx.fail(p, "run.mode must be 'regime' or 'special'")
            run[key] = value
        elif key == "schedule":
            run[key] = _parse_schedule(ctx, value)
        elif key in ("samples_per_period", "n_max", "m_max"):
            run[key] = ctx.number(value, p, positive=True, integer=True)
        elif key in ("k_min", "k_max"):
            run[key] = ctx.number(value, p, integer=True)
        elif key == "horizon":
            run[key] = ctx.number(value, p, positive=True)
        else:
            run[key] = ctx.number(value, p, nonneg=True)

    raw_out = ctx.mapping(top.get("output"), ("output",), ("path", "format"))
    if raw_out.get("format", "csv") != "csv":
        ctx.fail(("output", "format"), "only csv output is supported")
    return ScenarioConfig(command, kind, system, kick, period, style, scan, run, raw_out.get("path"))


def _parse_schedule(ctx, value):
    if not isinstance(value, list) or not value:
        ctx.fail(("run", "schedule"), "run.schedule must be a non-empty list")
    out = []
    for i, seg in enumerate(value):
        p = ("run", "schedule", i)
        seg = ctx.mapping(seg, p, ("mode", "duration", "periods"))
        mode = seg.get("mode")
        if mode == "free":
            if "duration" not in seg:
                ctx.fail(p, "free segment needs 'duration'")
            out.append({"mode": "free", "duration": ctx.number(seg["duration"], p + ("duration",), positive=True)})
        elif mode == "kicked":
            if "periods" not in seg:
                ctx.fail(p, "kicked segment needs 'periods'")
            out.append({"mode": "kicked",
                        "periods": ctx.number(seg["periods"], p + ("periods",), positive=True, integer=True)})
        else:
            ctx.fail(p, "segment mode must be 'free' or 'kicked'")
    return out


def loads_config(text: str) -> ScenarioConfig:
    try:
        node = yaml.compose(text, Loader=yaml.SafeLoader)
        data = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        mark = getattr(exc, "problem_mark", None)
        raise ConfigError(f"invalid YAML: {getattr(exc, 'problem', exc)}",
                          mark.line + 1 if mark else None) from None
    if node is None:
        raise ConfigError("empty config")
    return parse_config(data, _lines(node))


def load_config(path) -> ScenarioConfig:
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc}") from None
    return loads_config(text)
