"""Built-in reference scenarios, one per figure id.

Each preset is a plain mapping in the scenario-config schema, so
``kickdyn figure <id> --dump-config`` writes a file that reruns to the
same output. Heatmaps use reduced grids; the period sweeps use a step fine enough to
sample the narrow two-photon windows.
"""
from __future__ import annotations

import math

from .config import ScenarioConfig, parse_config

PI = math.pi


def _two(delta1):
    return {"kind": "two_level", "delta1": delta1, "omega1": 1.0, "theta1": 0.0}


def _axis(param, start, stop, num):
    return {"param": param, "start": start, "stop": stop, "num": num}


_S4_SYSTEM = {"kind": "three_level", "delta1": 60.0, "delta2": 40.0, "omega1": 1.0,
              "omega2": 2.0, "theta1": 0.0, "theta2": 0.0}
_SPECIAL_SYSTEM = {"kind": "three_level", "delta1": 100.0, "delta2": 200.0, "omega1": 1.0,
                   "omega2": 1.0, "theta1": 0.0, "theta2": 0.0}

PRESETS = {
    "fig1a": {
        "command": "eff2",
        "system": _two(40.0),
        "kick": {"delta1p": 40.0, "omega1p": 6.0, "theta1p": 0.0},
        "scan": [_axis("period", 0.001, 0.3, 300)],
    },
    "fig1b": {
        "command": "eff2",
        "system": _two(40.0),
        "kick": {"period": 0.08, "delta1p": 40.0, "theta1p": 0.0},
        "scan": [_axis("omega1p", 0.0, 20.0, 201)],
    },
    "fig1c": {
        "command": "eff2",
        "system": _two(40.0),
        "kick": {"period": 0.08, "omega1p": 6.0, "theta1p": 0.0},
        "scan": [_axis("delta1p", 0.0, 100.0, 201)],
    },
    "fig1d": {
        "command": "eff2",
        "system": _two(40.0),
        "kick": {"period": 0.0982, "delta1p": 40.0, "omega1p": 1.0},
        "scan": [_axis("theta1p", -PI, PI, 181)],
    },
    "fig2a": {
        "command": "inversion",
        "system": _two(100.0),
        "kick": {"period": 0.0628, "delta1p": 56.5133, "omega1p": 1.0, "theta1p": 0.0},
        "run": {"schedule": [{"mode": "kicked", "periods": 500}], "samples_per_period": 4},
    },
    "fig2b": {
        "command": "eff2",
        "system": _two(100.0),
        "kick": {"period": "auto:resonance", "omega1p": 1.0, "theta1p": 0.0, "style": "frequency"},
        "scan": [_axis("delta1p", 1.0, 120.0, 239)],
    },
    "fig2c": {
        "command": "eff2",
        "system": _two(40.0),
        "kick": {"period": "auto:resonance", "delta1p": 40.0, "theta1p": 0.0, "style": "amplitude"},
        "scan": [_axis("omega1p", 0.05, 30.0, 300)],
    },
    "fig3": {
        "command": "eff2",
        "system": _two(40.0),
        "kick": {"period": 0.05, "theta1p": 0.0},
        "scan": [_axis("omega1p", 0.5, 20.0, 24), _axis("delta1p", 5.0, 200.0, 24)],
        "run": {"validity": True, "horizon": 50.0},
    },
    "fig4a": {
        "command": "sweep3",
        "system": _SPECIAL_SYSTEM,
        "kick": {"omega1p": 1.0, "omega2p": 1.0, "theta1p": 0.0, "theta2p": 0.0},
        "scan": [_axis("delta1p", 0.5, 60.0, 120)],
        "run": {"mode": "special", "n_max": 1},
    },
    "fig4b": {
        "command": "inversion",
        "system": _SPECIAL_SYSTEM,
        "kick": {"period": "auto:special", "delta1p": 18.0, "delta2p": 36.0, "omega1p": 1.0,
                 "omega2p": 1.0, "theta1p": 0.0, "theta2p": 0.0},
        "run": {"schedule": [{"mode": "kicked", "periods": 1300}], "samples_per_period": 4},
    },
    "figS4": {
        "command": "sweep3",
        "system": _S4_SYSTEM,
        "kick": {"delta1p": 60.0, "delta2p": 40.0, "omega1p": 1.5, "omega2p": 2.0,
                 "theta1p": 0.0, "theta2p": 0.0},
        # step 0.0004 lands on the narrow resonances at 0.0424 and 0.1040
        "scan": [_axis("period", 0.0104, 0.1504, 351)],
    },
    "figS6": {
        "command": "sweep3",
        "system": _S4_SYSTEM,
        "kick": {"delta1p": 60.0, "delta2p": 40.0, "omega1p": 1.0, "omega2p": 2.0,
                 "theta1p": PI, "theta2p": 0.0},
        # offset grid so that 0.1046 is a sample
        "scan": [_axis("period", 0.0106, 0.1506, 351)],
    },
    "fig3sa": {
        "command": "inversion",
        "system": _two(20.0),
        "kick": {"period": 0.1359, "delta1p": 20.0, "omega1p": 5.0, "theta1p": 0.0},
    },
    "fig3sb": {
        "command": "inversion",
        "system": _two(35.0),
        "kick": {"period": 0.0506, "delta1p": 35.0, "omega1p": 4.0, "theta1p": 0.0},
    },
    "fig7a": {
        "command": "squarewave",
        "system": _two(50.0),
        "kick": {"omega1p": 1.0, "theta1p": 0.0},
        "scan": [_axis("delta1", 50.0, 1000.0, 40), _axis("delta1p", 0.5, 30.0, 40)],
        "run": {"verify": False},
    },
    "fig7b": {
        "command": "squarewave",
        "system": _two(1000.0),
        "kick": {"delta1p": 12.3, "omega1p": 1.0, "theta1p": 0.0},
        "run": {"compare": True, "samples_per_period": 4},
    },
    "figS1": {
        "command": "eff2",
        "system": _two(40.0),
        "kick": {"period": 0.08, "omega1p": 3.0, "theta1p": PI / 3},
        "scan": [_axis("delta1p", 0.0, 60.0, 601)],
    },
}

FIGURE_IDS = tuple(PRESETS)


def preset_config(fig_id: str) -> ScenarioConfig:
    return parse_config(PRESETS[fig_id])
