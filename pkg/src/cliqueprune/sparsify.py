"""Single- and multi-stage probabilistic vertex pruning.

A stage computes fresh features on the current subgraph, asks the stage
model for P(vertex not in a solution), and removes every vertex at or above
the stage threshold. The constant-confidence (CC) strategy reuses one
threshold; increasing confidence (IC) advances it by ``d`` per stage.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .classifier import LabeledSet, train
from .errors import ConfigError, DegenerateGraphError, MultistageFitError
from .features import REAL_PROFILE, compute_vertex_features
from .graph import induced_subgraph
from .solver import enumerate_maximum_cliques

REPORT_FORMAT_VERSION = 1

SUMMARY_COLUMNS = (
    "name",
    "n_vertices",
    "n_edges",
    "vertex_prune_ratio",
    "edge_prune_ratio",
    "omega_before",
    "omega_after",
    "n_max_cliques_before",
    "n_max_cliques_after",
    "clique_accuracy",
    "prune_time_s",
)


@dataclass(frozen=True)
class PruneConfig:
    """Strategy (CC or IC), base threshold q0, per-stage increment d, stages."""

    strategy: str
    q0: float
    d: float = 0.0
    stages: int = 1

    def __post_init__(self):
        if self.strategy not in ("CC", "IC"):
            raise ConfigError(f"unknown strategy {self.strategy!r}")
        if not 0.0 <= self.q0 <= 1.0:
            raise ConfigError("q0 must be in [0, 1]")
        if self.stages < 1:
            raise ConfigError("stages must be at least 1")
        for s in range(1, self.stages + 1):
            if self.threshold(s) > 1.0:
                raise ConfigError(f"stage {s} threshold exceeds 1")

    def threshold(self, stage):
        if self.strategy == "CC":
            return self.q0
        return self.q0 + (stage - 1) * self.d

    def thresholds(self):
        return [self.threshold(s) for s in range(1, self.stages + 1)]


PRESETS = {
    # single aggressive stage for dense inputs; five constant stages for sparse
    "dense-1stage": PruneConfig("CC", 0.98, 0.0, 1),
    "sparse-5stage": PruneConfig("CC", 0.95, 0.0, 5),
}


@dataclass(eq=False)
class PruneReport:
    """Per-stage removals (original vertex ids) and final surviving subgraph."""

    stage_removed: list
    stage_thresholds: list
    final_graph: object
    n_original_vertices: int
    n_original_edges: int
    timings: dict = field(default_factory=dict)

    @property
    def vertex_ratio(self):
        if self.n_original_vertices == 0:
            return 0.0
        removed = sum(len(s) for s in self.stage_removed)
        return removed / self.n_original_vertices

    @property
    def edge_ratio(self):
        if self.n_original_edges == 0:
            return 0.0
        return 1.0 - self.final_graph.num_edges / self.n_original_edges

    def removed_vertices(self):
        out = []
        for s in self.stage_removed:
            out.extend(s)
        return sorted(out)

    def to_json_dict(self):
        return {
            "format_version": REPORT_FORMAT_VERSION,
            "n_original_vertices": self.n_original_vertices,
            "n_original_edges": self.n_original_edges,
            "n_final_vertices": self.final_graph.num_vertices,
            "n_final_edges": self.final_graph.num_edges,
            "stage_thresholds": self.stage_thresholds,
            "stage_removed": [list(map(int, s)) for s in self.stage_removed],
            "vertex_prune_ratio": self.vertex_ratio,
            "edge_prune_ratio": self.edge_ratio,
            "timings": self.timings,
        }

    def save_json(self, target):
        text = json.dumps(self.to_json_dict(), indent=2, sort_keys=True) + "\n"
        if isinstance(target, (str, Path)):
            with open(target, "w", encoding="utf-8") as fh:
                fh.write(text)
        else:
            target.write(text)


def prune_once(g, model, q):
    """Remove every vertex with P(not in solution) >= q.

    Features are computed fresh on ``g`` under the model's stored profile.
    Returns the surviving induced subgraph and the removed vertex ids
    (indices into ``g``), ascending.
    """
    if not 0.0 <= q <= 1.0:
        raise ConfigError("threshold q must be in [0, 1]")
    if model.feature_kind != "vertex":
        raise ValueError("vertex pruning needs a vertex-feature model")
    feats = compute_vertex_features(g, model.profile)
    p0 = np.atleast_1d(model.predict_p0(feats.rows))
    removed = np.flatnonzero(p0 >= q)
    survivors = np.flatnonzero(p0 < q)
    return induced_subgraph(g, survivors), removed


def run_strategy(g, models, cfg):
    """Apply ``cfg.stages`` pruning stages, recomputing features per stage.

    ``models`` holds one model per stage (a single-model list may simply be
    repeated by the caller). Removed sets are reported in original vertex
    ids and stay pairwise disjoint. Stages reached after the graph becomes
    empty or edgeless are recorded as no-ops.
    """
    models = list(models)
    if len(models) == 1 and cfg.stages > 1:
        models = models * cfg.stages
    if len(models) != cfg.stages:
        raise ConfigError(
            f"{cfg.stages} stages configured but {len(models)} models supplied"
        )
    current = g
    current_to_orig = np.arange(g.num_vertices, dtype=np.int64)
    stage_removed = []
    timings = {"stages_s": []}
    total_t0 = time.perf_counter()
    for stage in range(1, cfg.stages + 1):
        q = cfg.threshold(stage)
        if current.num_vertices == 0 or current.num_edges == 0:
            stage_removed.append([])
            timings["stages_s"].append(0.0)
            continue
        t0 = time.perf_counter()
        survivors, removed_local = prune_once(current, models[stage - 1], q)
        timings["stages_s"].append(time.perf_counter() - t0)
        stage_removed.append(sorted(int(v) for v in current_to_orig[removed_local]))
        keep_local = np.setdiff1d(
            np.arange(current.num_vertices, dtype=np.int64), removed_local
        )
        current_to_orig = current_to_orig[keep_local]
        current = survivors
    timings["total_s"] = time.perf_counter() - total_t0
    return PruneReport(
        stage_removed=stage_removed,
        stage_thresholds=cfg.thresholds(),
        final_graph=current,
        n_original_vertices=g.num_vertices,
        n_original_edges=g.num_edges,
        timings=timings,
    )


def fit_multistage(corpus, cfg, seed, epochs=400, l2=1e-4, lr0=0.01,
                   profile=None, resolve_per_stage=False):
    """Train one model per stage on the surviving vertices of a solved corpus.

    ``corpus`` is a list of (Graph, MceResult) pairs. Stage labels mark
    membership in a maximum clique of the original instance restricted to
    the survivors; with ``resolve_per_stage`` the surviving subgraphs are
    re-solved after each stage and labels follow the re-solved optima.
    Training pools the surviving rows across the corpus and under-samples
    the larger class. Instances that become degenerate (edgeless, or
    single-class) drop out of a stage; if none remain, MultistageFitError
    names the stage.
    """
    if profile is None:
        profile = REAL_PROFILE
    graphs = [g for g, _ in corpus]
    positive_sets = [res.vertex_union() for _, res in corpus]
    survivors = [np.arange(g.num_vertices, dtype=np.int64) for g in graphs]
    models = []
    for stage in range(1, cfg.stages + 1):
        rows_parts = []
        label_parts = []
        for gi, g in enumerate(graphs):
            surv = survivors[gi]
            if surv.size == 0:
                continue
            sub = induced_subgraph(g, surv)
            if sub.num_edges == 0:
                continue
            try:
                feats = compute_vertex_features(sub, profile)
            except DegenerateGraphError:
                continue
            labels = np.isin(surv, sorted(positive_sets[gi])).astype(np.int64)
            rows_parts.append(feats.rows)
            label_parts.append(labels)
        if not rows_parts:
            raise MultistageFitError(stage)
        rows = np.vstack(rows_parts)
        labels = np.concatenate(label_parts)
        pos_idx = np.flatnonzero(labels == 1)
        neg_idx = np.flatnonzero(labels == 0)
        if pos_idx.size == 0 or neg_idx.size == 0:
            raise MultistageFitError(stage, f"single-class labels at stage {stage}")
        rng = np.random.default_rng([int(seed), stage])
        if pos_idx.size > neg_idx.size:
            pos_idx = np.sort(rng.choice(pos_idx, size=neg_idx.size, replace=False))
        elif neg_idx.size > pos_idx.size:
            neg_idx = np.sort(rng.choice(neg_idx, size=pos_idx.size, replace=False))
        chosen = np.sort(np.concatenate([pos_idx, neg_idx]))
        balanced = LabeledSet(
            rows=rows[chosen], labels=labels[chosen], balanced=True
        )
        model = train(
            balanced,
            epochs=epochs,
            l2=l2,
            lr0=lr0,
            seed=int(np.random.default_rng([int(seed), stage, 1]).integers(2**31)),
            profile=profile,
        )
        models.append(model)
        if stage == cfg.stages:
            break
        q = cfg.threshold(stage)
        for gi, g in enumerate(graphs):
            surv = survivors[gi]
            if surv.size == 0:
                continue
            sub = induced_subgraph(g, surv)
            if sub.num_edges == 0:
                continue
            try:
                _, removed_local = prune_once(sub, model, q)
            except DegenerateGraphError:
                continue
            keep_local = np.setdiff1d(
                np.arange(sub.num_vertices, dtype=np.int64), removed_local
            )
            survivors[gi] = surv[keep_local]
            if resolve_per_stage and survivors[gi].size:
                resub = induced_subgraph(g, survivors[gi])
                res = enumerate_maximum_cliques(resub)
                positive_sets[gi] = frozenset(
                    int(survivors[gi][v]) for v in res.vertex_union()
                )
    return models


def summary_row(name, g, report, metrics):
    """One CSV-ready summary dict per pruned instance."""
    row = {
        "name": name,
        "n_vertices": g.num_vertices,
        "n_edges": g.num_edges,
        "vertex_prune_ratio": report.vertex_ratio,
        "edge_prune_ratio": report.edge_ratio,
        "omega_before": metrics["omega_before"],
        "omega_after": metrics["omega_after"],
        "n_max_cliques_before": metrics["n_max_cliques_before"],
        "n_max_cliques_after": metrics["n_max_cliques_after"],
        "clique_accuracy": metrics["clique_accuracy"],
        "prune_time_s": report.timings.get("total_s", 0.0),
    }
    return row
