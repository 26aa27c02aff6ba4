"""Command line interface.

Subcommands::

    mimo-manifold run <config.json> [--no-figures]
    mimo-manifold preset <name> [--out DIR] [--seed S] [--scale F] [--no-figures]

Exit codes: 0 success, 2 configuration error, 3 numerical/model error,
4 I/O or file-format error.  The environment variable
``MIMO_MANIFOLD_THREADS`` caps worker threads; outputs are identical for
any thread count.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from .errors import ConfigError, IoFormatError, MimoManifoldError
from .experiment import PRESETS, load_config, run_experiment, run_preset

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3
EXIT_IO = 4


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mimo-manifold",
        description="Array-independent MIMO channel modeling experiments.")
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="execute an experiment config file")
    run_p.add_argument("config", type=Path, help="JSON experiment configuration")
    run_p.add_argument("--no-figures", action="store_true",
                       help="skip figure rendering, emit CSV data only")

    preset_p = sub.add_parser("preset", help="run a built-in experiment preset")
    preset_p.add_argument("name", choices=sorted(PRESETS),
                          help="preset to run")
    preset_p.add_argument("--out", type=Path, default=None,
                          help="output directory (default: ./out_<name>)")
    preset_p.add_argument("--seed", type=int, default=None,
                          help="override the preset's documented seed")
    preset_p.add_argument("--scale", type=float, default=1.0,
                          help="multiply realization counts for quick smoke runs "
                               "(tolerances in the docs assume scale 1.0)")
    preset_p.add_argument("--no-figures", action="store_true",
                          help="skip figure rendering, emit CSV data only")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "run":
            cfg, doc, base_dir = load_config(args.config)
            out_dir = run_experiment(cfg, base_dir, doc,
                                     render=not args.no_figures)
        else:
            out_dir = args.out if args.out is not None else Path(f"out_{args.name}")
            out_dir = run_preset(args.name, out_dir, seed=args.seed,
                                 scale=args.scale, render=not args.no_figures)
        print(f"outputs written to {out_dir}")
        return EXIT_OK
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except IoFormatError as exc:
        print(f"file format error: {exc}", file=sys.stderr)
        return EXIT_IO
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (MimoManifoldError, np.linalg.LinAlgError, FloatingPointError) as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
