"""Command-line entry point.

    ecpic run   --config <path> [--output <dir>] [--seed <u64>]
                [--scheme <name>] [--dt <f>] [--steps <n>] [--threads <n>]
    ecpic sweep --config <path> --dt <comma list> [same overrides]
"""

from __future__ import annotations

import argparse
import sys

from .config import ConfigError, load_config, with_config_overrides
from .runner import run, sweep_dt


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", required=True, help="flat key = value config file")
    parser.add_argument("--output", help="output directory (overrides config)")
    parser.add_argument("--seed", type=int, help="RNG seed (overrides config)")
    parser.add_argument("--scheme", help="scheme name (overrides config)")
    parser.add_argument("--steps", type=int, help="step count (overrides config)")
    parser.add_argument("--threads", type=int, help="deposition worker count")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ecpic",
                                     description="Energy-conserving PIC runner")
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="run one configuration")
    _add_common(run_p)
    run_p.add_argument("--dt", type=float, help="time step (overrides config)")

    sweep_p = sub.add_parser("sweep", help="rerun over a list of time steps")
    _add_common(sweep_p)
    sweep_p.add_argument("--dt", required=True,
                         help="comma-separated time steps, e.g. 0.2,0.1,0.05")
    return parser


def _load(args) -> "RunConfig":
    config = load_config(args.config)
    return with_config_overrides(config, output_dir=args.output, seed=args.seed,
                                 scheme=args.scheme,
                                 dt=getattr(args, "dt_value", None),
                                 n_steps=args.steps, n_workers=args.threads)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "run":
            args.dt_value = args.dt
            run(_load(args))
        else:
            dts = [float(part) for part in args.dt.split(",") if part.strip()]
            args.dt_value = None
            sweep_dt(_load(args), dts)
    except (ConfigError, OSError, ValueError) as exc:
        print(f"ecpic: error: {exc}", file=sys.stderr)
        return 1
    except RuntimeError as exc:
        print(f"ecpic: aborted: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
