#!/usr/bin/env python3
"""Desk-scale experiment on the bundled 200-node synthetic fixture.

Runs every selector over the five budget levels with reduced replication
counts (minutes, not hours) and writes results plus plot series to
``out/desk/``.  Pass ``--full`` to use the full 100x100 replication protocol
instead; expect a long run.
"""

import argparse
import sys

from profitmax.experiment import BatchConfig, run_batch
from profitmax.selection import SELECTORS


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--full", action="store_true",
                        help="use 100x100 replication counts instead of the desk scale")
    parser.add_argument("--output", default="out/desk")
    parser.add_argument("--workers", type=int, default=1)
    args = parser.parse_args()

    scale = dict(observations=100, phase2_runs=100, selection_replications=100) if args.full \
        else dict(observations=5, phase2_runs=5, selection_replications=10)
    cfg = BatchConfig(
        dataset="pa:200:3:7",
        algorithms=tuple(sorted(SELECTORS)),
        budgets=(500, 1000, 1500, 2000, 2500),
        probability=0.01,
        split=0.6,
        observation_step=3,
        cost_range=(50, 100),
        benefit_range=(800, 1000),
        attribute_seed=11,
        master_seed=31,
        output_dir=args.output,
        workers=args.workers,
        **scale,
    )
    records = run_batch(cfg)
    print(f"wrote {len(records)} rows to {cfg.output_dir}/results.csv")
    for r in records:
        print(f"  {r.algorithm:24s} B={r.budget:5d}  seeds={r.total_seed_count:3d}  "
              f"two-phase={r.two_phase_profit_max:12.2f}  diff={r.profit_difference:10.2f}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
