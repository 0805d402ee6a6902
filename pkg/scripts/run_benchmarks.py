#!/usr/bin/env python3
"""Run the three benchmark problems across schemes and collect CSVs.

Produces one output directory per (scenario, scheme) pair under --out,
each containing diagnostics.csv and run.json, ready for the figure tool:

    python3 scripts/run_benchmarks.py --out out/bench --n-c 100
    ecpic-plots pe-decay --inputs out/bench/landau_esec2/diagnostics.csv \
        --out landau_pe.svg
"""

import argparse
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from ecpic.config import load_config, with_config_overrides  # noqa: E402
from ecpic.runner import run  # noqa: E402

CONFIGS = Path(__file__).resolve().parent.parent / "configs"
MATRIX = {
    "landau": ("boris_es", "esec1", "esec2"),
    "two_stream": ("boris_es", "esec1", "esec2"),
    "weibel": ("emec_cn", "emec_psatd", "emec_lf"),
}


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", default="out/bench")
    parser.add_argument("--n-c", type=int, help="override particles per cell")
    parser.add_argument("--steps", type=int, help="override step count")
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    for scenario, schemes in MATRIX.items():
        base = load_config(CONFIGS / f"{scenario}.cfg")
        if args.n_c is not None:
            from dataclasses import replace
            base = replace(base, scenario=replace(base.scenario, n_c=args.n_c))
        for scheme in schemes:
            config = with_config_overrides(
                base, scheme=scheme, seed=args.seed, n_steps=args.steps,
                output_dir=str(Path(args.out) / f"{scenario}_{scheme}"))
            run(config)
    return 0


if __name__ == "__main__":
    sys.exit(main())
