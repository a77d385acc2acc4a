#!/usr/bin/env python3
"""Post-PAA sigma for the simulated trio and, if present, the real-world series."""

import argparse
import json
from pathlib import Path

from saxn.dataio import DatasetSpec, read_series, to_csv
from saxn.experiments import DEFAULT_SEED, REAL_WORLD_WIDTHS, SIMULATED_WIDTHS, run_sigma_study
from saxn.synth import simulated_trio

ROOT = Path(__file__).resolve().parents[1]


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seed", type=int, default=DEFAULT_SEED)
    ap.add_argument("--data-dir", type=Path, default=ROOT / "datasets")
    args = ap.parse_args()

    print("simulated series")
    print(to_csv(run_sigma_study(simulated_trio(args.seed), SIMULATED_WIDTHS).to_rows()))

    entries = json.loads((ROOT / "datasets" / "manifest.json").read_text())["datasets"]
    present = [e for e in entries if (args.data_dir / e["path"]).is_file()]
    if not present:
        print(f"no real-world files in {args.data_dir}; see datasets/README.md")
        return
    series = [read_series(DatasetSpec(str(args.data_dir / e["path"]), e["column"], e["name"])) for e in present]
    table = run_sigma_study(series, REAL_WORLD_WIDTHS)
    order = table.order_at(20)
    print("real-world series (ascending sigma at w=20)")
    print(to_csv(sorted(table.to_rows(), key=lambda r: order.index(r["series"]))))


if __name__ == "__main__":
    main()
