"""Prune-then-solve benchmark harness with CSV reporting.

Each instance row mirrors the usual solver-comparison layout: clique number
and count before/after pruning with preservation markers, pruning ratios,
the clique-number-oracle (k-core) baseline ratios, wall-clock timings, and
speedups. Speedup is reported both including pruning time
(solve-original / (prune + solve-pruned)) and solver-only.
"""

from __future__ import annotations

import csv
import statistics
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

from .errors import SolverTimeout
from .solver import enumerate_maximum_cliques, evaluate, omega_oracle_prune
from .sparsify import run_strategy

CSV_SCHEMA_VERSION = "cliqueprune-bench-v1"

CSV_COLUMNS = (
    "schema",
    "name",
    "n_vertices",
    "n_edges",
    "omega",
    "n_max_cliques",
    "omega_pruned",
    "n_max_cliques_pruned",
    "omega_preserved",
    "cliques_preserved",
    "clique_accuracy",
    "relaxed_accuracy",
    "vertex_prune_ratio",
    "edge_prune_ratio",
    "kcore_vertex_ratio",
    "kcore_edge_ratio",
    "prune_time_s",
    "solve_time_s",
    "solve_pruned_time_s",
    "speedup_incl_prune",
    "speedup_solver_only",
    "status",
)

_TIMING_COLUMNS = ("prune_time_s", "solve_time_s", "solve_pruned_time_s",
                   "speedup_incl_prune", "speedup_solver_only")


def _timed_solve(g, time_limit, runs, stat):
    """Solve ``runs`` times; the result is identical each run, only timing varies."""
    durations = []
    result = None
    for _ in range(runs):
        result = enumerate_maximum_cliques(g, time_limit)
        durations.append(result.elapsed)
    agg = statistics.median(durations) if stat == "median" else statistics.fmean(durations)
    return result, agg


def bench_instance(name, g, models, cfg, time_limit=None, runs=3, stat="median"):
    """One benchmark row for a single instance."""
    row = {c: "" for c in CSV_COLUMNS}
    row.update(
        schema=CSV_SCHEMA_VERSION,
        name=name,
        n_vertices=g.num_vertices,
        n_edges=g.num_edges,
        status="ok",
    )
    report = run_strategy(g, models, cfg)
    row["vertex_prune_ratio"] = round(report.vertex_ratio, 6)
    row["edge_prune_ratio"] = round(report.edge_ratio, 6)
    row["prune_time_s"] = report.timings["total_s"]

    try:
        original, t_orig = _timed_solve(g, time_limit, runs, stat)
    except SolverTimeout as exc:
        row["status"] = "t/o"
        row["solve_time_s"] = "t/o"
        row["omega"] = f">={exc.best_lower_bound}"
        try:
            pruned_res, t_pruned = _timed_solve(report.final_graph, time_limit, runs, stat)
        except SolverTimeout:
            row["solve_pruned_time_s"] = "t/o"
            return row
        row["omega_pruned"] = pruned_res.omega
        row["n_max_cliques_pruned"] = pruned_res.num_cliques
        row["solve_pruned_time_s"] = t_pruned
        denom = row["prune_time_s"] + t_pruned
        if denom > 0 and time_limit is not None:
            # only a lower bound is known for the original solve time
            row["speedup_incl_prune"] = f">{time_limit / denom:.2f}"
            row["speedup_solver_only"] = f">{time_limit / t_pruned:.2f}"
        return row

    row["omega"] = original.omega
    row["n_max_cliques"] = original.num_cliques

    oracle = omega_oracle_prune(g, original.omega)
    row["kcore_vertex_ratio"] = round(
        1.0 - oracle.num_vertices / g.num_vertices, 6
    ) if g.num_vertices else 0.0
    row["kcore_edge_ratio"] = round(
        1.0 - oracle.num_edges / g.num_edges, 6
    ) if g.num_edges else 0.0

    try:
        pruned_res, t_pruned = _timed_solve(report.final_graph, time_limit, runs, stat)
    except SolverTimeout:
        row["status"] = "t/o-pruned"
        row["solve_pruned_time_s"] = "t/o"
        row["solve_time_s"] = t_orig
        return row

    metrics = evaluate(original, pruned_res, report)
    row["omega_pruned"] = pruned_res.omega
    row["n_max_cliques_pruned"] = pruned_res.num_cliques
    row["omega_preserved"] = "*" if pruned_res.omega == original.omega else ""
    row["cliques_preserved"] = (
        "*" if pruned_res.num_cliques == original.num_cliques
        and pruned_res.omega == original.omega else ""
    )
    row["clique_accuracy"] = metrics["clique_accuracy"]
    row["relaxed_accuracy"] = metrics["relaxed_accuracy"]
    row["solve_time_s"] = t_orig
    row["solve_pruned_time_s"] = t_pruned
    denom = row["prune_time_s"] + t_pruned
    row["speedup_incl_prune"] = round(t_orig / denom, 4) if denom > 0 else ""
    row["speedup_solver_only"] = round(t_orig / t_pruned, 4) if t_pruned > 0 else ""
    return row


def run_bench(named_graphs, models, cfg, time_limit=None, runs=3, stat="median",
              jobs=1):
    """Benchmark many instances; returns (rows, aggregate row).

    Instances may run concurrently (``jobs``); the timing repetitions for a
    single instance always run back to back.
    """
    named_graphs = list(named_graphs)
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            rows = list(
                pool.map(
                    lambda ng: bench_instance(
                        ng[0], ng[1], models, cfg, time_limit, runs, stat
                    ),
                    named_graphs,
                )
            )
    else:
        rows = [
            bench_instance(name, g, models, cfg, time_limit, runs, stat)
            for name, g in named_graphs
        ]
    rows.sort(key=lambda r: r["name"])
    ok = [r for r in rows if r["status"] == "ok"]
    agg = {c: "" for c in CSV_COLUMNS}
    agg.update(schema=CSV_SCHEMA_VERSION, name="AGGREGATE", status=f"{len(ok)}/{len(rows)} ok")
    if ok:
        for col in (
            "clique_accuracy",
            "relaxed_accuracy",
            "vertex_prune_ratio",
            "edge_prune_ratio",
            "kcore_vertex_ratio",
            "kcore_edge_ratio",
            "prune_time_s",
            "solve_time_s",
            "solve_pruned_time_s",
        ):
            agg[col] = round(statistics.fmean(float(r[col]) for r in ok), 6)
        speedups = [float(r["speedup_incl_prune"]) for r in ok if r["speedup_incl_prune"] != ""]
        if speedups:
            agg["speedup_incl_prune"] = round(statistics.fmean(speedups), 4)
    return rows, agg


def write_csv(rows, target):
    def _dump(fh):
        writer = csv.DictWriter(fh, fieldnames=CSV_COLUMNS)
        writer.writeheader()
        for row in rows:
            writer.writerow(row)

    if isinstance(target, (str, Path)):
        with open(target, "w", newline="", encoding="utf-8") as fh:
            _dump(fh)
    else:
        _dump(target)


def strip_timing_columns(rows):
    """Rows minus wall-clock-dependent cells, for reproducibility comparisons."""
    out = []
    for row in rows:
        out.append({k: v for k, v in row.items() if k not in _TIMING_COLUMNS})
    return out
