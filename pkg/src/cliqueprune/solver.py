"""Exact enumeration of all maximum cliques plus the clique-number-oracle
preprocessor and the accuracy metrics derived from solver runs."""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from . import kernels
from .graph import k_core_prune


@dataclass(frozen=True)
class MceResult:
    """Clique number, every maximum clique, and search statistics.

    Cliques are ascending tuples and the list is lexicographically sorted.
    The empty graph has omega 0 with a single empty clique so downstream
    ratios stay defined after total pruning.
    """

    omega: int
    cliques: tuple
    nodes_explored: int
    elapsed: float

    @property
    def num_cliques(self):
        return len(self.cliques)

    def vertex_union(self):
        out = set()
        for c in self.cliques:
            out.update(c)
        return frozenset(out)

    def to_json_dict(self, labels=None):
        if labels is None:
            cliques = [list(c) for c in self.cliques]
        else:
            cliques = [sorted(int(labels[v]) for v in c) for c in self.cliques]
        return {
            "format_version": 1,
            "omega": self.omega,
            "n_max_cliques": self.num_cliques,
            "cliques": cliques,
            "nodes_explored": self.nodes_explored,
            "timings": {"solve_s": self.elapsed},
        }


def enumerate_maximum_cliques(g, time_limit=None):
    """Find omega and the complete list of maximum cliques of ``g``.

    Branch and bound with a greedy-coloring bound; branches that can still
    tie the incumbent are kept, so the enumeration is complete. Raises
    SolverTimeout (carrying the best size seen) if `time_limit` seconds
    elapse; a partial result is never returned.
    """
    deadline = None if time_limit is None else time.monotonic() + time_limit
    t0 = time.perf_counter()
    best, cliques, nodes = kernels.solve_max_cliques(
        g.indptr, g.indices, g.num_vertices, deadline
    )
    elapsed = time.perf_counter() - t0
    canon = tuple(sorted(tuple(sorted(c)) for c in cliques))
    return MceResult(best, canon, nodes, elapsed)


def omega_oracle_prune(g, omega):
    """Core-number pruning at k = omega - 1 given the true clique number.

    Lossless for maximum cliques: every vertex of a maximum clique has at
    least omega - 1 neighbors inside it.
    """
    if omega < 1:
        raise ValueError("omega must be at least 1")
    return k_core_prune(g, omega - 1)


def is_clique(g, vertices):
    """Pairwise-adjacency check independent of the search code."""
    vs = sorted(int(v) for v in vertices)
    if len(set(vs)) != len(vs):
        return False
    for i, u in enumerate(vs):
        nb = g.neighbors(u)
        for v in vs[i + 1 :]:
            j = np.searchsorted(nb, v)
            if j >= nb.size or nb[j] != v:
                return False
    return True


def evaluate(original, pruned, report=None):
    """Accuracy row comparing solver results before and after pruning.

    ``clique_accuracy`` is 1 only when both the clique number and the number
    of maximum cliques are preserved; ``relaxed_accuracy`` is 1 when the
    pruned optimum is within one of the original.
    """
    strict = int(
        pruned.omega == original.omega and pruned.num_cliques == original.num_cliques
    )
    relaxed = int(pruned.omega >= original.omega - 1)
    row = {
        "omega_before": original.omega,
        "omega_after": pruned.omega,
        "omega_diff": original.omega - pruned.omega,
        "n_max_cliques_before": original.num_cliques,
        "n_max_cliques_after": pruned.num_cliques,
        "clique_accuracy": strict,
        "relaxed_accuracy": relaxed,
    }
    if report is not None:
        row["vertex_prune_ratio"] = report.vertex_ratio
        row["edge_prune_ratio"] = report.edge_ratio
    return row
