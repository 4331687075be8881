"""ALTHEA: statistical candidate-region extraction for large cliques.

Vertices are bucketed by how many standard deviations their degree sits
above the mean; bucket probabilities come from the Chebyshev tail masses.
Each vertex is scored by the chi-square deviation of its closed
neighborhood's bucket counts from expectation, and the top-scoring vertex's
closed neighborhood is handed to an exact solver.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateGraphError
from .graph import induced_subgraph
from .solver import enumerate_maximum_cliques


@dataclass(frozen=True)
class DegreeStats:
    delta: int
    avg: float
    sigma: float


@dataclass(frozen=True, eq=False)
class SymbolModel:
    """Degree-deviation categories: tau buckets, their probabilities, and the
    per-vertex bucket index (1-based)."""

    tau: int
    probs: np.ndarray
    category: np.ndarray


def degree_stats(g):
    """Maximum, mean, and sample standard deviation (n-1 divisor) of degrees."""
    if g.num_vertices < 2:
        raise DegenerateGraphError("degree statistics need at least two vertices")
    deg = g.degrees.astype(np.float64)
    return DegreeStats(int(deg.max()), float(deg.mean()), float(deg.std(ddof=1)))


def symbol_probabilities(tau):
    """Chebyshev bucket masses Pr(i) = 1/i^2 - 1/(i+1)^2 for i = 1..tau.

    Computed as (2i+1)/(i(i+1))^2, a single rounding, so small buckets come
    out bit-exact (3/4, 5/36, ...). The masses sum to 1 - 1/(tau+1)^2 and are
    used raw, without renormalization.
    """
    return np.array(
        [(2 * i + 1) / (i * (i + 1)) ** 2 for i in range(1, tau + 1)],
        dtype=np.float64,
    )


def categorize(g, stats):
    """Assign each vertex the bucket i with i <= (deg - avg)/sigma + 1 < i+1.

    Below-average vertices clamp to bucket 1; regular graphs (sigma = 0)
    degenerate to a single bucket.
    """
    deg = g.degrees.astype(np.float64)
    if stats.sigma == 0.0:
        tau = 1
        category = np.ones(g.num_vertices, dtype=np.int64)
    else:
        tau = int(math.ceil((stats.delta - stats.avg) / stats.sigma)) + 1
        raw = np.floor((deg - stats.avg) / stats.sigma + 1.0).astype(np.int64)
        category = np.clip(raw, 1, tau)
    return SymbolModel(tau, symbol_probabilities(tau), category)


def significance(g, sym):
    """Per-vertex chi-square score of closed-neighborhood bucket counts.

    Expected counts are Pr(i) * |N[v]|; all tau cells contribute, including
    those observed zero times.
    """
    n = g.num_vertices
    scores = np.zeros(n, dtype=np.float64)
    cat0 = sym.category - 1
    for v in range(n):
        members = np.append(g.neighbors(v), v)
        observed = np.bincount(cat0[members], minlength=sym.tau).astype(np.float64)
        expected = sym.probs * members.size
        scores[v] = float(np.sum((observed - expected) ** 2 / expected))
    return scores


@dataclass(frozen=True)
class AltheaResult:
    candidate: int
    clique: tuple
    clique_size: int
    vertex_prune_ratio: float
    edge_prune_ratio: float
    subgraph_vertices: int
    subgraph_edges: int
    nodes_explored: int
    elapsed: float

    def to_json_dict(self):
        return {
            "format_version": 1,
            "candidate": self.candidate,
            "clique": list(self.clique),
            "clique_size": self.clique_size,
            "vertex_prune_ratio": self.vertex_prune_ratio,
            "edge_prune_ratio": self.edge_prune_ratio,
            "subgraph_vertices": self.subgraph_vertices,
            "subgraph_edges": self.subgraph_edges,
            "nodes_explored": self.nodes_explored,
            "timings": {"total_s": self.elapsed},
        }


def althea_run(g, solver=None):
    """Pick the most significant vertex and solve on its closed neighborhood.

    Ties break to the lowest vertex id. ``solver`` maps a graph to an
    MceResult; the exact enumerator is the default. The returned clique is
    expressed in the ids of ``g``.
    """
    if g.num_vertices < 2:
        raise DegenerateGraphError("need at least two vertices")
    t0 = time.perf_counter()
    stats = degree_stats(g)
    sym = categorize(g, stats)
    scores = significance(g, sym)
    candidate = int(np.flatnonzero(scores == scores.max())[0])
    closed = np.sort(np.append(g.neighbors(candidate), candidate))
    sub = induced_subgraph(g, closed)
    solve = solver or enumerate_maximum_cliques
    result = solve(sub)
    best = result.cliques[0] if result.cliques else ()
    clique = tuple(int(closed[v]) for v in best)
    elapsed = time.perf_counter() - t0
    v_ratio = 1.0 - closed.size / g.num_vertices
    e_ratio = (
        1.0 - sub.num_edges / g.num_edges if g.num_edges else 0.0
    )
    return AltheaResult(
        candidate=candidate,
        clique=clique,
        clique_size=len(clique),
        vertex_prune_ratio=v_ratio,
        edge_prune_ratio=e_ratio,
        subgraph_vertices=sub.num_vertices,
        subgraph_edges=sub.num_edges,
        nodes_explored=result.nodes_explored,
        elapsed=elapsed,
    )
