"""Per-vertex features F1-F10 and per-edge features E1-E9.

Two vertex-feature profiles exist. The real-graph profile scores degree and
clustering deviations against empirical means and uses the greedy-coloring
estimate of local chromatic density as F10. The planted profile (for
G(n,p)-with-planted-clique corpora) scores against the generative
expectations n*p and the expected order-4 LCC, and replaces F10 with the
order-4 LCC itself.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations
from pathlib import Path

import numpy as np

from . import kernels
from .errors import DegenerateGraphError
from .graph import distinct_neighbor_colors, eigencentrality, greedy_coloring, local_clustering

VERTEX_FEATURE_NAMES = tuple(f"F{i}" for i in range(1, 11))
EDGE_FEATURE_NAMES = tuple(f"E{i}" for i in range(1, 10))

_EXPECTED_FLOOR = 1e-9


@dataclass(frozen=True)
class FeatureProfile:
    """Which expected values back the chi-square features (F6-F9) and F10."""

    name: str = "real-graph"
    p: float | None = None

    def __post_init__(self):
        if self.name not in ("real-graph", "planted"):
            raise ValueError(f"unknown feature profile {self.name!r}")
        if self.name == "planted" and not (self.p is not None and 0.0 < self.p < 1.0):
            raise ValueError("planted profile needs an edge probability in (0, 1)")

    @classmethod
    def real(cls):
        return cls("real-graph")

    @classmethod
    def planted(cls, p):
        return cls("planted", float(p))

    def to_dict(self):
        d = {"name": self.name}
        if self.p is not None:
            d["p"] = self.p
        return d

    @classmethod
    def from_dict(cls, d):
        return cls(d["name"], d.get("p"))


REAL_PROFILE = FeatureProfile.real()


@dataclass(frozen=True, eq=False)
class FeatureMatrix:
    """One numeric row per vertex (10-dim) or per edge (9-dim)."""

    kind: str
    rows: np.ndarray
    entity_index: np.ndarray
    names: tuple
    scaling: tuple | None = None

    def __post_init__(self):
        width = 10 if self.kind == "vertex" else 9
        if self.kind not in ("vertex", "edge"):
            raise ValueError(f"unknown feature kind {self.kind!r}")
        if self.rows.ndim != 2 or self.rows.shape[1] != width:
            raise ValueError(f"{self.kind} feature rows must have width {width}")
        if not np.all(np.isfinite(self.rows)):
            raise ValueError("non-finite feature value")

    def to_csv(self, target):
        lines = []
        if self.kind == "vertex":
            lines.append("vertex," + ",".join(self.names))
            for ent, row in zip(self.entity_index, self.rows):
                lines.append(f"{int(ent)}," + ",".join(repr(float(x)) for x in row))
        else:
            lines.append("u,v," + ",".join(self.names))
            for (u, v), row in zip(self.entity_index, self.rows):
                lines.append(
                    f"{int(u)},{int(v)}," + ",".join(repr(float(x)) for x in row)
                )
        text = "\n".join(lines) + "\n"
        if isinstance(target, (str, Path)):
            with open(target, "w", encoding="utf-8") as fh:
                fh.write(text)
        else:
            target.write(text)


def chi_square(observed, expected):
    """Pearson chi-square statistic sum((O-E)^2 / E)."""
    obs = np.asarray(observed, dtype=np.float64)
    exp = np.asarray(expected, dtype=np.float64)
    if obs.shape != exp.shape or obs.ndim != 1 or obs.size < 1:
        raise ValueError("observed and expected must be equal-length 1-d sequences")
    if np.any(exp <= 0):
        raise ValueError("expected counts must be strictly positive")
    return float(np.sum((obs - exp) ** 2 / exp))


def order_k_lcc(g, v, k):
    """Fraction of (k-1)-subsets of N(v) that induce K_k together with v.

    Reduces to the standard LCC at k=3. This is the direct combinatorial
    evaluation; the per-graph order-4 arrays used by the planted profile go
    through the compiled kernel instead.
    """
    if k < 3:
        raise ValueError("order must be at least 3")
    nb = [int(u) for u in g.neighbors(v)]
    d = len(nb)
    if d < k - 1:
        return 0.0
    nbr_sets = {u: set(int(w) for w in g.neighbors(u)) for u in nb}
    hits = 0
    for combo in combinations(nb, k - 1):
        if all(b in nbr_sets[a] for a, b in combinations(combo, 2)):
            hits += 1
    return hits / math.comb(d, k - 1)


def order4_lcc(g):
    """Per-vertex order-4 LCC for the whole graph (kernel-backed)."""
    deg = g.degrees
    k4 = kernels.k4_counts(g.indptr, g.indices, g.num_vertices)
    out = np.zeros(g.num_vertices, dtype=np.float64)
    mask = deg >= 3
    denom = deg[mask] * (deg[mask] - 1) * (deg[mask] - 2) // 6
    out[mask] = k4[mask] / denom
    return out


def expected_order_k_lcc(n, p, k=4):
    """Expected order-k LCC of a G(n,p) vertex: C(n-1,k-1) p^C(k,2) / C(np,k-1).

    The denominator binomial is generalized through the gamma function so a
    non-integer expected degree np is handled directly.
    """
    if not 0.0 < p < 1.0:
        raise ValueError("p must be in (0, 1)")
    x = n * p
    j = k - 1
    if x - j + 1 <= 0:
        raise ValueError("expected degree too small for the requested order")
    log_num = (
        math.lgamma(n) - math.lgamma(j + 1) - math.lgamma(n - j)
        + math.comb(k, 2) * math.log(p)
    )
    log_den = math.lgamma(x + 1) - math.lgamma(j + 1) - math.lgamma(x - j + 1)
    return math.exp(log_num - log_den)


def _neighbor_mean(g, values):
    """Mean of ``values`` over the open neighborhood; 0 for isolated vertices."""
    n = g.num_vertices
    deg = g.degrees
    src = np.repeat(np.arange(n, dtype=np.int64), deg)
    sums = np.bincount(src, weights=values[g.indices], minlength=n)
    out = np.zeros(n, dtype=np.float64)
    nz = deg > 0
    out[nz] = sums[nz] / deg[nz]
    return out


def vertex_features(g, coloring, eig, profile=REAL_PROFILE):
    """F1-F10 rows for every vertex under the given profile.

    ``coloring`` is required by the real-graph profile (F10 needs it) and
    ignored by the planted profile, where F10 is the order-4 LCC.
    """
    n = g.num_vertices
    m = g.num_edges
    deg = g.degrees.astype(np.float64)
    eig = np.asarray(eig, dtype=np.float64)
    lcc = local_clustering(g)

    if profile.name == "real-graph":
        if m == 0:
            raise DegenerateGraphError("mean degree is zero on an edgeless graph")
        if coloring is None:
            raise ValueError("the real-graph profile requires a coloring")
        e_deg = 2.0 * m / n
        e_cluster = max(float(lcc.mean()), _EXPECTED_FLOOR)
        cluster_obs = lcc
        f10 = np.zeros(n, dtype=np.float64)
        nz = deg > 0
        f10[nz] = distinct_neighbor_colors(g, coloring)[nz] / coloring.num_colors
    else:
        e_deg = n * profile.p
        if e_deg <= 0:
            raise DegenerateGraphError("expected degree is zero")
        e_cluster = max(expected_order_k_lcc(n, profile.p, 4), _EXPECTED_FLOOR)
        cluster_obs = order4_lcc(g)
        f10 = cluster_obs

    f6 = (deg - e_deg) ** 2 / e_deg
    f8 = (cluster_obs - e_cluster) ** 2 / e_cluster
    rows = np.column_stack(
        [
            np.full(n, float(n)),
            np.full(n, float(m)),
            deg,
            lcc,
            eig,
            f6,
            _neighbor_mean(g, f6),
            f8,
            _neighbor_mean(g, f8),
            f10,
        ]
    )
    return FeatureMatrix(
        "vertex", rows, np.arange(n, dtype=np.int64), VERTEX_FEATURE_NAMES
    )


def compute_vertex_features(g, profile=REAL_PROFILE, tol=1e-10, max_iters=10000):
    """Convenience pipeline: eigencentrality (+ coloring when needed) -> F1-F10."""
    eig = eigencentrality(g, tol=tol, max_iters=max_iters).scores
    coloring = greedy_coloring(g) if profile.name == "real-graph" else None
    return vertex_features(g, coloring, eig, profile)


def edge_features(g, coloring, lcc, eig):
    """E1-E9 rows for every edge (u < v order)."""
    lcc = np.asarray(lcc, dtype=np.float64)
    eig = np.asarray(eig, dtype=np.float64)
    deg = g.degrees
    edges = g.edge_array()
    nbrs = [set(int(u) for u in g.neighbors(v)) for v in range(g.num_vertices)]
    rows = np.zeros((len(edges), 9), dtype=np.float64)
    for i, (u, v) in enumerate(edges):
        u, v = int(u), int(v)
        common = nbrs[u] & nbrs[v]
        c = len(common)
        union = deg[u] + deg[v] - c
        inv_log = 0.0
        for x in common:
            # a common neighbor of adjacent u, v has degree >= 2 in a simple graph
            assert deg[x] >= 2
            inv_log += 1.0 / math.log(deg[x])
        if common:
            colors_seen = len({int(coloring.colors[x]) for x in common})
        else:
            colors_seen = 0
        rows[i] = (
            c / union,
            2.0 * c / (deg[u] + deg[v]),
            inv_log,
            c / math.sqrt(deg[u] * deg[v]),
            0.5 * (lcc[u] + lcc[v]),
            0.5 * (deg[u] + deg[v]),
            0.5 * (eig[u] + eig[v]),
            float(c),
            colors_seen / coloring.num_colors,
        )
    return FeatureMatrix("edge", rows, edges, EDGE_FEATURE_NAMES)


def color_rule_deletable_edges(g, coloring, k):
    """Edges whose common neighbors see fewer than k-2 distinct colors.

    Such an edge cannot be part of any k-clique, so it is safe to delete
    when k is a valid lower bound on the clique size being sought.
    """
    out = []
    nbrs = [set(int(u) for u in g.neighbors(v)) for v in range(g.num_vertices)]
    for u, v in g.edge_array():
        common = nbrs[int(u)] & nbrs[int(v)]
        seen = len({int(coloring.colors[x]) for x in common}) if common else 0
        if seen < k - 2:
            out.append((int(u), int(v)))
    return out
