"""Command-line front end.

Usage:
    pgpe run        --config cfg.json --out results/ [--seed N] [--threads K]
    pgpe compare    --config a.json --config b.json ... --out results/ [--seed N] [--threads K]
    pgpe gridsearch --config grid.json --out results/ [--seed N] [--threads K]
    pgpe surface    --objective rastrigin --range 5.12 --resolution 256 --out results/

Exit codes: 0 success, 2 usage or configuration error, 3 I/O error.
All output files are deterministic for a given config and seed.
"""

from __future__ import annotations

import argparse
import dataclasses
import sys

import numpy as np

from .config import ConfigError, load_grid_search_config, load_run_config, run_config_to_dict
from .harness import aggregate_records, default_workers, grid_search, grid_start_for, run_batch
from .objectives import OBJECTIVE_FUNCTIONS, Objective, surface_grid
from .output import (
    ensure_out_dir,
    write_aggregate_csv,
    write_best_json,
    write_comparison_csv,
    write_comparison_summary,
    write_gridsearch_csv,
    write_json,
    write_runs_csv,
    write_surface_csv,
)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_IO = 3


def _fail_config(message: str) -> int:
    print(f"error: {message}", file=sys.stderr)
    return EXIT_CONFIG


def _fail_io(message: str) -> int:
    print(f"error: {message}", file=sys.stderr)
    return EXIT_IO


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pgpe",
        description="Run and compare parameter-exploring policy gradient variants on benchmark objectives.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, multi_config=False):
        if multi_config:
            p.add_argument(
                "--config",
                action="append",
                default=[],
                metavar="PATH",
                help="experiment config (repeat the flag to compare several)",
            )
        else:
            p.add_argument("--config", required=True, metavar="PATH", help="experiment config file")
        p.add_argument("--out", required=True, metavar="DIR", help="output directory")
        p.add_argument("--seed", type=int, default=None, help="override the config's base_seed")
        p.add_argument(
            "--threads",
            type=int,
            default=None,
            help="worker processes for independent runs (default: available cores)",
        )

    add_common(sub.add_parser("run", help="execute one batch and write its curves"))
    add_common(sub.add_parser("compare", help="run several configs and tabulate them together"), multi_config=True)
    add_common(sub.add_parser("gridsearch", help="scan step-size pairs and report the best cell"))

    p_surface = sub.add_parser("surface", help="export a 2D objective landscape grid")
    p_surface.add_argument("--objective", required=True, help="objective name")
    p_surface.add_argument("--range", type=float, required=True, dest="half_range", help="half-width of the square grid")
    p_surface.add_argument("--resolution", type=int, required=True, help="nodes per axis (>= 2)")
    p_surface.add_argument("--dim", type=int, default=2, help="objective dimension (must be 2)")
    p_surface.add_argument("--out", required=True, metavar="DIR", help="output directory")
    return parser


def _apply_overrides(config, seed):
    if seed is None:
        return config
    try:
        return dataclasses.replace(config, base_seed=seed)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None


def _resolve_threads(threads) -> int:
    if threads is None:
        return default_workers()
    if threads < 1:
        raise ConfigError("--threads must be >= 1")
    return threads


def _cmd_run(args) -> int:
    try:
        config = _apply_overrides(load_run_config(args.config), args.seed)
        workers = _resolve_threads(args.threads)
    except ConfigError as exc:
        return _fail_config(str(exc))
    except OSError as exc:
        return _fail_config(f"cannot read config: {exc}")

    batch = run_batch(config, workers=workers)
    try:
        out = ensure_out_dir(args.out)
        write_aggregate_csv(f"{out}/aggregate.csv", batch.aggregate)
        write_runs_csv(f"{out}/runs.csv", batch.records)
        write_json(f"{out}/config.json", run_config_to_dict(config))
    except OSError as exc:
        return _fail_io(f"cannot write output: {exc}")
    print(
        "wrote %s/aggregate.csv (%d runs, final mean best reward %.6g)"
        % (out, batch.aggregate.run_count, batch.aggregate.mean_best_reward[-1])
    )
    return EXIT_OK


def _cmd_compare(args) -> int:
    try:
        if not args.config:
            raise ConfigError("compare needs at least one --config")
        configs = [_apply_overrides(load_run_config(path), args.seed) for path in args.config]
        workers = _resolve_threads(args.threads)
    except ConfigError as exc:
        return _fail_config(str(exc))
    except OSError as exc:
        return _fail_config(f"cannot read config: {exc}")

    first = configs[0]
    for cfg in configs[1:]:
        if cfg.objective != first.objective or cfg.dim != first.dim:
            return _fail_config(
                "compare requires a shared objective and dimension; got "
                f"{first.objective}/d={first.dim} vs {cfg.objective}/d={cfg.dim}"
            )

    batches = [run_batch(cfg, workers=workers) for cfg in configs]

    # shared x-axis: start late enough that every variant has a checkpoint,
    # end at the smallest budget so every curve is defined everywhere
    start = max(grid_start_for(cfg.variant) for cfg in configs)
    end = min(cfg.max_evaluations for cfg in configs)
    points = max(cfg.grid_points for cfg in configs)
    grid = np.unique(np.round(np.linspace(start, end, points)).astype(np.int64))
    aggregates = [
        aggregate_records(batch.records, grid, batch.config.target_reward) for batch in batches
    ]

    try:
        out = ensure_out_dir(args.out)
        write_comparison_csv(f"{out}/comparison.csv", batches, aggregates)
        write_comparison_summary(f"{out}/summary.json", batches, aggregates)
    except OSError as exc:
        return _fail_io(f"cannot write output: {exc}")
    for batch, agg in zip(batches, aggregates):
        print(
            "%s: median evaluations to target %s, final mean best reward %.6g"
            % (batch.config.display_label(), agg.median_evaluations_to_target, agg.mean_best_reward[-1])
        )
    return EXIT_OK


def _cmd_gridsearch(args) -> int:
    try:
        template, grid = load_grid_search_config(args.config)
        template = _apply_overrides(template, args.seed)
        workers = _resolve_threads(args.threads)
    except ConfigError as exc:
        return _fail_config(str(exc))
    except OSError as exc:
        return _fail_config(f"cannot read config: {exc}")

    result = grid_search(grid, template, workers=workers)
    try:
        out = ensure_out_dir(args.out)
        write_gridsearch_csv(f"{out}/gridsearch.csv", result)
        write_best_json(f"{out}/best.json", result)
    except OSError as exc:
        return _fail_io(f"cannot write output: {exc}")
    flag = " (fell back to mean_final_reward)" if result.fell_back else ""
    print(
        "best cell: alpha_mu=%g alpha_sigma=%g by %s%s"
        % (result.best_alpha_mu, result.best_alpha_sigma, result.metric, flag)
    )
    return EXIT_OK


def _cmd_surface(args) -> int:
    try:
        if args.objective not in OBJECTIVE_FUNCTIONS:
            valid = ", ".join(sorted(OBJECTIVE_FUNCTIONS))
            raise ConfigError(f"--objective must be one of {valid}; got {args.objective!r}")
        objective = Objective(args.objective, args.dim)
        rows = surface_grid(objective, args.half_range, args.resolution)
    except (ConfigError, ValueError) as exc:
        return _fail_config(str(exc))

    try:
        out = ensure_out_dir(args.out)
        write_surface_csv(f"{out}/surface.csv", rows)
    except OSError as exc:
        return _fail_io(f"cannot write output: {exc}")
    print("wrote %s/surface.csv (%d rows)" % (out, len(rows)))
    return EXIT_OK


_COMMANDS = {
    "run": _cmd_run,
    "compare": _cmd_compare,
    "gridsearch": _cmd_gridsearch,
    "surface": _cmd_surface,
}


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors, 0 on --help; keep that contract
        return int(exc.code or 0)
    return _COMMANDS[args.command](args)


if __name__ == "__main__":
    sys.exit(main())
