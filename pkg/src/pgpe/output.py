"""Deterministic data-file emission.

Every file is UTF-8 with LF line endings and no timestamps, so a rerun
of the same experiment is byte-identical.  CSV numerics are printed
with 17 significant digits (%.17g), which re-parses to the exact same
float.  JSON files rely on Python's shortest round-trip float repr,
which is equally lossless; non-finite values appear as null.
"""

from __future__ import annotations

import json
import math
import os
from typing import Any, Iterable

from .harness import AggregateStats, BatchResult, ConvergenceRecord, GridSearchResult


def _fmt(value: float) -> str:
    return "%.17g" % float(value)


def _write_lines(path: str, lines: Iterable[str]):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for line in lines:
            fh.write(line)
            fh.write("\n")


def write_aggregate_csv(path: str, agg: AggregateStats):
    """Mean/std convergence curve: evaluations,mean_best_reward,std_best_reward,success_rate."""
    lines = ["evaluations,mean_best_reward,std_best_reward,success_rate"]
    for k in range(agg.evaluations.size):
        lines.append(
            "%d,%s,%s,%s"
            % (
                int(agg.evaluations[k]),
                _fmt(agg.mean_best_reward[k]),
                _fmt(agg.std_best_reward[k]),
                _fmt(agg.success_rate[k]),
            )
        )
    _write_lines(path, lines)


def write_runs_csv(path: str, records: list[ConvergenceRecord]):
    """Per-checkpoint trace of every run: run_id,evaluations,best_reward,update_reward,mean_sigma."""
    lines = ["run_id,evaluations,best_reward,update_reward,mean_sigma"]
    for rec in sorted(records, key=lambda r: r.run_id):
        for k in range(rec.evaluations.size):
            lines.append(
                "%d,%d,%s,%s,%s"
                % (
                    rec.run_id,
                    int(rec.evaluations[k]),
                    _fmt(rec.best_reward[k]),
                    _fmt(rec.update_reward[k]),
                    _fmt(rec.mean_sigma[k]),
                )
            )
    _write_lines(path, lines)


def write_surface_csv(path: str, rows):
    """Objective landscape grid: x,y,f with one row per node."""
    lines = ["x,y,f"]
    for x, y, f in rows:
        lines.append("%s,%s,%s" % (_fmt(x), _fmt(y), _fmt(f)))
    _write_lines(path, lines)


def write_gridsearch_csv(path: str, result: GridSearchResult):
    lines = ["alpha_mu,alpha_sigma,median_evals_to_target,mean_final_reward,final_success_rate"]
    for cell in result.table:
        lines.append(
            "%s,%s,%s,%s,%s"
            % (
                _fmt(cell.alpha_mu),
                _fmt(cell.alpha_sigma),
                _fmt(cell.median_evals_to_target),
                _fmt(cell.mean_final_reward),
                _fmt(cell.final_success_rate),
            )
        )
    _write_lines(path, lines)


def _json_safe(value: Any) -> Any:
    if isinstance(value, float) and not math.isfinite(value):
        return None
    if isinstance(value, dict):
        return {k: _json_safe(v) for k, v in value.items()}
    if isinstance(value, list):
        return [_json_safe(v) for v in value]
    return value


def write_json(path: str, data: dict):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(_json_safe(data), fh, indent=2, sort_keys=True)
        fh.write("\n")


def write_best_json(path: str, result: GridSearchResult):
    write_json(
        path,
        {
            "best_alpha_mu": result.best_alpha_mu,
            "best_alpha_sigma": result.best_alpha_sigma,
            "metric": result.metric,
            "fell_back": result.fell_back,
        },
    )


def write_comparison_csv(path: str, batches: list[BatchResult], aggregates: list[AggregateStats]):
    """Long-format comparison on a shared grid, with both x-axes.

    Columns: label,evaluations,mean_updates,mean_best_reward,
    std_best_reward,success_rate.  One block of rows per batch, in
    input order.
    """
    lines = ["label,evaluations,mean_updates,mean_best_reward,std_best_reward,success_rate"]
    for batch, agg in zip(batches, aggregates):
        label = batch.config.display_label()
        for k in range(agg.evaluations.size):
            lines.append(
                "%s,%d,%s,%s,%s,%s"
                % (
                    label,
                    int(agg.evaluations[k]),
                    _fmt(agg.mean_updates[k]),
                    _fmt(agg.mean_best_reward[k]),
                    _fmt(agg.std_best_reward[k]),
                    _fmt(agg.success_rate[k]),
                )
            )
    _write_lines(path, lines)


def write_comparison_summary(path: str, batches: list[BatchResult], aggregates: list[AggregateStats]):
    entries = []
    for batch, agg in zip(batches, aggregates):
        entries.append(
            {
                "label": batch.config.display_label(),
                "variant": batch.config.variant.value,
                "alpha_mu": batch.config.alpha_mu,
                "alpha_sigma": batch.config.alpha_sigma,
                "run_count": agg.run_count,
                "median_evaluations_to_target": agg.median_evaluations_to_target,
                "final_mean_best_reward": float(agg.mean_best_reward[-1]),
                "final_success_rate": agg.final_success_rate,
            }
        )
    write_json(path, {"batches": entries})


def ensure_out_dir(path: str) -> str:
    os.makedirs(path, exist_ok=True)
    return path
