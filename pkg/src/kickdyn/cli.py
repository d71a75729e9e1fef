"""Command-line front end.

Examples
--------
    kickdyn eff2 --config scenario.yaml --out report.csv
    kickdyn sweep3 --config s4.yaml --threads 8
    kickdyn figure fig3sb --out fig3sb.csv
    kickdyn figure figS4 --dump-config > s4.yaml

Exit codes: 0 success, 2 configuration or usage error, 3 numerical-domain error.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import __version__
from .config import dump_config, load_config
from .errors import ConfigError, NumericalDomain
from .presets import FIGURE_IDS, preset_config
from .runner import run

EXIT_CONFIG = 2
EXIT_NUMERICAL = 3


def _common(parser):
    parser.add_argument("--config", help="scenario file (YAML)")
    parser.add_argument("--out", help="output file (default: stdout)")
    parser.add_argument("--threads", type=int, default=1, help="worker threads for scans")
    parser.add_argument("--samples-per-period", type=int, default=None,
                        help="override run.samples_per_period")


def build_parser():
    parser = argparse.ArgumentParser(prog="kickdyn", description="Periodically kicked few-level systems.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    helps = {
        "eff2": "two-level effective Hamiltonian report or parameter scan",
        "sweep3": "three-level period sweep (regime labels) or symmetric-ladder scan",
        "inversion": "evolve a kick schedule and write the trajectory",
        "squarewave": "square-wave replacement of the kicks",
    }
    for name, text in helps.items():
        p = sub.add_parser(name, help=text)
        _common(p)
        if name == "squarewave":
            p.add_argument("--schedule", help="also write the pulse-schedule file here")
    p = sub.add_parser("figure", help="run a built-in preset")
    p.add_argument("id", choices=FIGURE_IDS, metavar="id", help=", ".join(FIGURE_IDS))
    p.add_argument("--dump-config", action="store_true", help="print the preset as a scenario file")
    _common(p)
    return parser


def _emit(text, out):
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.threads < 1 or (args.samples_per_period is not None and args.samples_per_period < 1):
        print("kickdyn: --threads and --samples-per-period must be >= 1", file=sys.stderr)
        return EXIT_CONFIG
    try:
        if args.command == "figure":
            cfg = preset_config(args.id)
            if args.dump_config:
                _emit(dump_config(cfg), args.out)
                return 0
        else:
            if not args.config:
                raise ConfigError(f"{args.command} needs --config")
            cfg = load_config(args.config)
            if cfg.command != args.command:
                raise ConfigError(f"config is for '{cfg.command}', not '{args.command}'")
        extra = {}
        if getattr(args, "schedule", None):
            extra["schedule_path"] = args.schedule
        text = run(cfg, args.threads, args.samples_per_period, **extra)
        _emit(text, args.out or cfg.output)
    except ConfigError as exc:
        print(f"kickdyn: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except NumericalDomain as exc:
        print(f"kickdyn: numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    return 0


if __name__ == "__main__":
    sys.exit(main())
