#!/usr/bin/env python3
"""ACF sum (lags 1-30) against post-PAA sigma over a seeded mixture panel."""

import argparse
from pathlib import Path

from saxn.dataio import emit_plot_data, to_json
from saxn.experiments import DEFAULT_SEED, run_acf_regression_study, synthetic_panel


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seed", type=int, default=DEFAULT_SEED)
    ap.add_argument("--size", type=int, default=12)
    ap.add_argument("--width", type=int, default=20)
    ap.add_argument("--plot", type=Path, help="write long-format plot CSV here")
    args = ap.parse_args()

    res = run_acf_regression_study(synthetic_panel(args.seed, args.size), args.width)
    print(to_json(res), end="")
    if args.plot:
        emit_plot_data(res.points, args.plot)


if __name__ == "__main__":
    main()
