#!/usr/bin/env python3
"""Chi-squared uniformity of SAX vs re-normalized SAX symbols on Gaussian noise.

Prints absolute deviation tables per cardinality; ``*`` marks cells where
uniformity is not rejected at 5%.
"""

import argparse

from saxn.dataio import to_csv
from saxn.experiments import DEFAULT_SEED, gaussian_series, run_symbol_distribution_study


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seed", type=int, default=DEFAULT_SEED)
    ap.add_argument("--length", type=int, default=10_000)
    ap.add_argument("--widths", type=int, nargs="+", default=[2, 5, 10, 20])
    ap.add_argument("-k", type=int, nargs="+", default=[5, 10])
    args = ap.parse_args()

    grid = run_symbol_distribution_study(gaussian_series(args.seed, args.length), args.widths, args.k)
    for k in args.k:
        print(f"k={k}")
        print(to_csv(grid.wide_rows(k)))
    wins = sum(
        grid.rows[(s, w, k, "SAXn")].abs_dev_pct <= grid.rows[(s, w, k, "SAX")].abs_dev_pct
        for (s, w, k, v) in grid.rows if v == "SAX"
    )
    print(f"re-normalized as close or closer to uniform in {wins} of {len(grid.rows) // 2} cells")


if __name__ == "__main__":
    main()
