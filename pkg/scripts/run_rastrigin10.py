"""Four-variant comparison on 10-dimensional Rastrigin.

Runs SyS, SupSyS, PGPE4smp and SupIf at their grid-searched step
sizes, then writes a long-format comparison table plus a summary, the
same files `pgpe compare` produces.
"""

import argparse
import dataclasses
import sys

import numpy as np

import pgpe
from pgpe.harness import aggregate_records, grid_start_for
from pgpe.output import ensure_out_dir, write_comparison_csv, write_comparison_summary

TUNED = {
    "SyS": (1e-3, 3.16e-4),
    "SupSyS": (1e-3, 1e-3),
    "PGPE4smp": (3.16e-3, 1e-3),
    "SupIf": (1e-3, 3.16e-4),
}


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="results/rastrigin10")
    ap.add_argument("--seed", type=int, default=1)
    ap.add_argument("--runs", type=int, default=50)
    ap.add_argument("--budget", type=int, default=20000)
    ap.add_argument("--threads", type=int, default=None)
    args = ap.parse_args()

    workers = args.threads or pgpe.default_workers()
    template = pgpe.RunConfig(
        variant="SyS", objective="rastrigin", dim=10, alpha_mu=1e-3, alpha_sigma=1e-3,
        mu0_range=3.2, sigma0=2.0, max_evaluations=args.budget, target_reward=-10.0,
        base_seed=args.seed, run_count=args.runs,
    )

    batches = []
    for variant, (amu, asig) in TUNED.items():
        cfg = dataclasses.replace(
            template, variant=variant, alpha_mu=amu, alpha_sigma=asig, label=variant
        )
        batches.append(pgpe.run_batch(cfg, workers=workers))

    # same shared x-axis the compare subcommand uses
    start = max(grid_start_for(b.config.variant) for b in batches)
    end = min(b.config.max_evaluations for b in batches)
    points = max(b.config.grid_points for b in batches)
    grid = np.unique(np.round(np.linspace(start, end, points)).astype(np.int64))
    aggregates = [aggregate_records(b.records, grid, b.config.target_reward) for b in batches]

    out = ensure_out_dir(args.out)
    write_comparison_csv(f"{out}/comparison.csv", batches, aggregates)
    write_comparison_summary(f"{out}/summary.json", batches, aggregates)

    print(f"{'variant':>9} {'median evals':>13} {'final mean':>11} {'reach':>6}")
    for batch, agg in zip(batches, aggregates):
        print(f"{batch.config.label:>9} {agg.median_evaluations_to_target:>13g} "
              f"{agg.mean_best_reward[-1]:>11.4g} {agg.final_success_rate:>6.2f}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
