"""How the best step sizes shrink as Rastrigin dimension grows.

Grid-searches SyS and SupSyS on dimensions 2, 5 and 10, prints the
best (alpha_mu, alpha_sigma) per dimension with the fitted log-log
slopes, and writes the table to scaling.json.
"""

import argparse
import dataclasses
import sys

import pgpe
from pgpe.output import ensure_out_dir, write_json

DIMS = (2, 5, 10)
BUDGET = {2: 2000, 5: 12000, 10: 24000}
TARGET = {2: -2.0, 5: -5.0, 10: -10.0}


def window(lo_exp, n=6):
    """n log-spaced nodes, 4 per decade, starting at 10**lo_exp."""
    return [float(10.0 ** (lo_exp + 0.25 * k)) for k in range(n)]


# cells are ranked by mean final reward at the fixed budget; windows are
# sized so the winners sit away from the edges
WINDOWS = {
    2: (window(-3.0, 8), window(-3.0, 8)),
    5: (window(-3.25, 7), window(-3.5, 7)),
    10: (window(-3.75, 7), window(-3.75, 6)),
}


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="results/scaling")
    ap.add_argument("--seed", type=int, default=1)
    ap.add_argument("--runs-per-cell", type=int, default=12)
    ap.add_argument("--threads", type=int, default=None)
    args = ap.parse_args()

    workers = args.threads or pgpe.default_workers()
    table = {}
    for variant in ("SyS", "SupSyS"):
        def make_grid(dim):
            mu_nodes, sigma_nodes = WINDOWS[dim]
            return pgpe.GridSpec(
                alpha_mu=mu_nodes, alpha_sigma=sigma_nodes,
                metric="mean_final_reward", runs_per_cell=args.runs_per_cell,
            )

        def make_template(dim):
            return pgpe.RunConfig(
                variant=variant, objective="rastrigin", dim=dim,
                alpha_mu=1e-3, alpha_sigma=1e-3, mu0_range=3.2, sigma0=2.0,
                max_evaluations=BUDGET[dim], target_reward=TARGET[dim],
                base_seed=args.seed, run_count=args.runs_per_cell,
            )

        study = pgpe.scaling_study(DIMS, make_grid, make_template, workers=workers)
        rows = []
        for row in study.rows:
            rows.append({"dim": row.dim, "alpha_mu": row.best_alpha_mu,
                         "alpha_sigma": row.best_alpha_sigma})
            print(f"{variant} d={row.dim}: alpha_mu={row.best_alpha_mu:g} "
                  f"alpha_sigma={row.best_alpha_sigma:g}")
        print(f"{variant} slopes: mu {study.slope_alpha_mu:+.2f}, "
              f"sigma {study.slope_alpha_sigma:+.2f}")
        table[variant] = {"rows": rows, "slope_alpha_mu": study.slope_alpha_mu,
                          "slope_alpha_sigma": study.slope_alpha_sigma}

    out = ensure_out_dir(args.out)
    write_json(f"{out}/scaling.json", table)
    return 0


if __name__ == "__main__":
    sys.exit(main())
