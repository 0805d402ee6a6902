#!/usr/bin/env python3
"""Time-step sweep of the energy-conserving schemes on the two-stream
problem, tabulating max fractional energy error and max |Gamma - 1|.

    python3 scripts/run_dt_sweep.py --out out/sweep --n-c 100
    ecpic-plots dt-sweep --inputs out/sweep/sweep_esec1.csv \
        out/sweep/sweep_esec2.csv --out sweep.svg
"""

import argparse
import sys
from dataclasses import replace
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from ecpic.config import load_config, with_config_overrides  # noqa: E402
from ecpic.runner import sweep_dt  # noqa: E402

CONFIGS = Path(__file__).resolve().parent.parent / "configs"


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", default="out/sweep")
    parser.add_argument("--n-c", type=int, default=100)
    parser.add_argument("--duration", type=float, default=2.0,
                        help="physical run length held fixed across dt")
    parser.add_argument("--dt", default="0.2,0.1,0.05,0.025")
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    dts = [float(part) for part in args.dt.split(",")]
    base = load_config(CONFIGS / "two_stream.cfg")
    base = replace(base, scenario=replace(base.scenario, n_c=args.n_c),
                   n_steps=max(1, round(args.duration / base.dt)))
    for scheme in ("esec1", "esec2"):
        config = with_config_overrides(base, scheme=scheme, seed=args.seed,
                                       output_dir=args.out)
        print(f"--- {scheme} ---")
        sweep_dt(config, dts)
    return 0


if __name__ == "__main__":
    sys.exit(main())
