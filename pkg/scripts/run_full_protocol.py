#!/usr/bin/env python3
"""Full-scale protocol on a real SNAP dataset.

Expects an edge-list file (see README for the supported datasets and where to
put them), runs all selectors across the five budget levels with the full
100x100 replication counts, and writes CSV plus plot series.  On the larger
datasets this is an overnight job; start with ``--algorithms random`` or a
single budget to gauge runtime on your machine.
"""

import argparse
import sys

from profitmax.experiment import BatchConfig, run_batch
from profitmax.selection import SELECTORS


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("dataset", help="edge-list path (resolved against PROFITMAX_DATA_DIR too)")
    parser.add_argument("--directed", action="store_true")
    parser.add_argument("--probability", type=float, default=0.01)
    parser.add_argument("--algorithms", default=",".join(sorted(SELECTORS)))
    parser.add_argument("--budgets", default="500,1000,1500,2000,2500")
    parser.add_argument("--master-seed", type=int, default=42)
    parser.add_argument("--attribute-seed", type=int, default=11)
    parser.add_argument("--output", default="out/protocol")
    parser.add_argument("--workers", type=int, default=1)
    args = parser.parse_args()

    cfg = BatchConfig(
        dataset=args.dataset,
        directed=args.directed,
        probability=args.probability,
        algorithms=tuple(s.strip() for s in args.algorithms.split(",")),
        budgets=tuple(int(b) for b in args.budgets.split(",")),
        split=0.6,
        observation_step=3,
        observations=100,
        phase2_runs=100,
        selection_replications=100,
        cost_range=(50, 100),
        benefit_range=(800, 1000),
        attribute_seed=args.attribute_seed,
        master_seed=args.master_seed,
        output_dir=args.output,
        workers=args.workers,
    )
    records = run_batch(cfg)
    print(f"wrote {len(records)} rows to {cfg.output_dir}/results.csv")
    return 0


if __name__ == "__main__":
    sys.exit(main())
