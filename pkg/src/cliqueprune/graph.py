"""Immutable simple-graph container, loaders, and the classical graph kernels."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from pathlib import Path
from typing import NamedTuple

import numpy as np

from . import kernels
from .errors import DegenerateGraphError, GraphFormatError, GraphParseError


class Graph:
    """Undirected simple graph with ascending sorted adjacency (CSR layout).

    Instances are immutable after construction: no self-loops, no parallel
    edges, symmetric adjacency. ``vertex_labels`` keeps the original external
    ids for inputs whose vertex ids were remapped to 0..n-1.
    """

    __slots__ = ("num_vertices", "num_edges", "indptr", "indices", "vertex_labels")

    def __init__(self, num_vertices, indptr, indices, vertex_labels=None):
        indptr = np.ascontiguousarray(indptr, dtype=np.int64)
        indices = np.ascontiguousarray(indices, dtype=np.int64)
        _check_csr(num_vertices, indptr, indices)
        self.num_vertices = int(num_vertices)
        self.num_edges = int(indices.size // 2)
        self.indptr = indptr
        self.indices = indices
        if vertex_labels is not None:
            vertex_labels = np.ascontiguousarray(vertex_labels, dtype=np.int64)
            if vertex_labels.shape != (self.num_vertices,):
                raise ValueError("vertex_labels length must equal num_vertices")
        self.vertex_labels = vertex_labels
        for arr in (self.indptr, self.indices):
            arr.setflags(write=False)
        if self.vertex_labels is not None:
            self.vertex_labels.setflags(write=False)

    @classmethod
    def from_edges(cls, num_vertices, edges, vertex_labels=None):
        """Build a graph from (u, v) pairs; dedupes and drops self-loops."""
        pairs = np.asarray(list(edges) if not isinstance(edges, np.ndarray) else edges,
                           dtype=np.int64).reshape(-1, 2)
        if pairs.size:
            if pairs.min() < 0 or pairs.max() >= num_vertices:
                raise ValueError("edge endpoint out of range")
            pairs = pairs[pairs[:, 0] != pairs[:, 1]]
            lo = np.minimum(pairs[:, 0], pairs[:, 1])
            hi = np.maximum(pairs[:, 0], pairs[:, 1])
            pairs = np.unique(np.column_stack([lo, hi]), axis=0)
        indptr, indices = _csr_from_pairs(num_vertices, pairs)
        return cls(num_vertices, indptr, indices, vertex_labels)

    @property
    def degrees(self):
        return np.diff(self.indptr)

    def neighbors(self, v):
        return self.indices[self.indptr[v] : self.indptr[v + 1]]

    def degree(self, v):
        return int(self.indptr[v + 1] - self.indptr[v])

    def has_edge(self, u, v):
        nb = self.neighbors(u)
        i = np.searchsorted(nb, v)
        return bool(i < nb.size and nb[i] == v)

    def edge_array(self):
        """All edges as an (m, 2) array with u < v, lexicographically sorted."""
        src = np.repeat(np.arange(self.num_vertices, dtype=np.int64), self.degrees)
        mask = src < self.indices
        return np.column_stack([src[mask], self.indices[mask]])

    def labels_or_ids(self):
        if self.vertex_labels is not None:
            return self.vertex_labels
        return np.arange(self.num_vertices, dtype=np.int64)

    def __eq__(self, other):
        if not isinstance(other, Graph):
            return NotImplemented
        if self.num_vertices != other.num_vertices:
            return False
        if not (np.array_equal(self.indptr, other.indptr)
                and np.array_equal(self.indices, other.indices)):
            return False
        # identity labels and absent labels are the same naming
        return np.array_equal(self.labels_or_ids(), other.labels_or_ids())

    def __repr__(self):
        return f"Graph(n={self.num_vertices}, m={self.num_edges})"


def _csr_from_pairs(n, pairs):
    if len(pairs) == 0:
        return np.zeros(n + 1, dtype=np.int64), np.zeros(0, dtype=np.int64)
    directed = np.vstack([pairs, pairs[:, ::-1]])
    order = np.lexsort((directed[:, 1], directed[:, 0]))
    directed = directed[order]
    indptr = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(np.bincount(directed[:, 0], minlength=n), out=indptr[1:])
    return indptr, np.ascontiguousarray(directed[:, 1])


def _check_csr(n, indptr, indices):
    if indptr.shape != (n + 1,) or indptr[0] != 0 or indptr[-1] != indices.size:
        raise ValueError("malformed CSR index arrays")
    if np.any(np.diff(indptr) < 0):
        raise ValueError("malformed CSR index arrays")
    if indices.size:
        if indices.min() < 0 or indices.max() >= n:
            raise ValueError("neighbor id out of range")
        src = np.repeat(np.arange(n, dtype=np.int64), np.diff(indptr))
        if np.any(src == indices):
            raise ValueError("self-loop in adjacency")
        # strictly ascending inside each row
        same_row = src[1:] == src[:-1]
        if np.any(same_row & (np.diff(indices) <= 0)):
            raise ValueError("adjacency rows must be strictly ascending")
        fwd = src * n + indices
        rev = indices * n + src
        if not np.array_equal(np.sort(fwd), np.sort(rev)):
            raise ValueError("adjacency is not symmetric")


# ---------------------------------------------------------------------------
# loading / saving

def load_edge_list(source, fmt="auto"):
    """Load a graph from edge-list or DIMACS text.

    Edge-list lines hold two whitespace-separated non-negative ids, with
    ``%`` / ``#`` comment lines; external ids are remapped to 0..n-1 and kept
    in ``vertex_labels``. DIMACS uses ``c`` comments, ``p edge n m`` and
    1-based ``e u v`` lines. Self-loops are dropped and duplicate/reverse
    edges merged in both formats.
    """
    lines = _read_lines(source)
    if fmt == "auto":
        fmt = _sniff_format(lines)
    if fmt in ("dimacs", "gr", "col"):
        return _parse_dimacs(lines)
    if fmt in ("edge-list", "edgelist", "edges"):
        return _parse_edge_list(lines)
    raise ValueError(f"unknown graph format: {fmt!r}")


def _read_lines(source):
    if isinstance(source, (str, Path)):
        with open(source, "r", encoding="utf-8") as fh:
            return fh.readlines()
    data = source.read()
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    return data.splitlines()


def _sniff_format(lines):
    for raw in lines:
        s = raw.strip()
        if not s:
            continue
        head = s.split(None, 1)[0]
        if head in ("p", "c", "e") and not head.isdigit():
            return "dimacs"
        return "edge-list"
    return "edge-list"


def _parse_edge_list(lines):
    raw_pairs = []
    seen = set()
    for lineno, raw in enumerate(lines, 1):
        s = raw.strip()
        if not s or s[0] in "%#":
            continue
        parts = s.split()
        if len(parts) != 2:
            raise GraphParseError(
                f"expected two vertex ids, got {len(parts)} fields", line=lineno
            )
        try:
            a, b = int(parts[0]), int(parts[1])
        except ValueError:
            raise GraphParseError(f"non-integer vertex id in {s!r}", line=lineno) from None
        if a < 0 or b < 0:
            raise GraphParseError("vertex ids must be non-negative", line=lineno)
        seen.add(a)
        seen.add(b)
        raw_pairs.append((a, b))
    labels = np.array(sorted(seen), dtype=np.int64)
    remap = {int(ext): i for i, ext in enumerate(labels)}
    pairs = [(remap[a], remap[b]) for a, b in raw_pairs]
    return Graph.from_edges(len(labels), pairs, vertex_labels=labels)


def _parse_dimacs(lines):
    n = m = None
    pairs = []
    edge_lines = 0
    for lineno, raw in enumerate(lines, 1):
        s = raw.strip()
        if not s or s[0] == "c":
            continue
        parts = s.split()
        if parts[0] == "p":
            if n is not None:
                raise GraphFormatError("duplicate problem line", line=lineno)
            if len(parts) != 4 or parts[1] not in ("edge", "col"):
                raise GraphParseError(f"bad problem line {s!r}", line=lineno)
            try:
                n, m = int(parts[2]), int(parts[3])
            except ValueError:
                raise GraphParseError(f"bad problem line {s!r}", line=lineno) from None
            if n < 0 or m < 0:
                raise GraphFormatError("negative size in problem line", line=lineno)
        elif parts[0] == "e":
            if n is None:
                raise GraphFormatError("edge line before problem line", line=lineno)
            if len(parts) != 3:
                raise GraphParseError(f"bad edge line {s!r}", line=lineno)
            try:
                u, v = int(parts[1]), int(parts[2])
            except ValueError:
                raise GraphParseError(f"bad edge line {s!r}", line=lineno) from None
            if not (1 <= u <= n and 1 <= v <= n):
                raise GraphFormatError(
                    f"endpoint out of range 1..{n} in {s!r}", line=lineno
                )
            edge_lines += 1
            if u != v:
                pairs.append((u - 1, v - 1))
        else:
            raise GraphParseError(f"unrecognized line {s!r}", line=lineno)
    if n is None:
        raise GraphFormatError("missing problem line")
    if edge_lines != m:
        raise GraphFormatError(
            f"problem line declares {m} edges but body has {edge_lines}"
        )
    return Graph.from_edges(n, pairs)


def save_edge_list(g, target):
    """Write one ``u v`` line per edge using external labels when present."""
    labels = g.labels_or_ids()
    text = "".join(f"{labels[u]} {labels[v]}\n" for u, v in g.edge_array())
    _write_text(target, text)


def save_dimacs(g, target):
    """Write DIMACS clique format (1-based ``e`` lines)."""
    out = [f"p edge {g.num_vertices} {g.num_edges}\n"]
    out.extend(f"e {u + 1} {v + 1}\n" for u, v in g.edge_array())
    _write_text(target, "".join(out))


def _write_text(target, text):
    if isinstance(target, (str, Path)):
        with open(target, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        target.write(text)


# ---------------------------------------------------------------------------
# structural operations

def induced_subgraph(g, keep):
    """Subgraph on ``keep``, re-indexed to 0..|keep|-1 with labels preserved.

    For graphs without external labels, the result's labels record the
    original vertex ids, so provenance survives chained pruning.
    """
    keep = np.unique(np.asarray(list(keep), dtype=np.int64))
    if keep.size and (keep.min() < 0 or keep.max() >= g.num_vertices):
        raise ValueError("keep set contains a vertex id out of range")
    remap = np.full(g.num_vertices, -1, dtype=np.int64)
    remap[keep] = np.arange(keep.size, dtype=np.int64)
    edges = g.edge_array()
    if edges.size:
        mapped = remap[edges]
        mapped = mapped[(mapped[:, 0] >= 0) & (mapped[:, 1] >= 0)]
    else:
        mapped = edges
    labels = g.labels_or_ids()[keep]
    return Graph.from_edges(keep.size, mapped, vertex_labels=labels)


def k_core_prune(g, k):
    """Maximal induced subgraph of minimum degree >= k (possibly empty)."""
    if k < 0:
        raise ValueError("k must be non-negative")
    deg = g.degrees.astype(np.int64)
    alive = np.ones(g.num_vertices, dtype=bool)
    queue = deque(int(v) for v in np.flatnonzero(deg < k))
    while queue:
        v = queue.popleft()
        if not alive[v]:
            continue
        alive[v] = False
        for u in g.neighbors(v):
            if alive[u]:
                deg[u] -= 1
                if deg[u] == k - 1:
                    queue.append(int(u))
    return induced_subgraph(g, np.flatnonzero(alive))


# ---------------------------------------------------------------------------
# per-vertex kernels

def local_clustering(g):
    """Standard local clustering coefficient; 0 for degree < 2."""
    deg = g.degrees
    tri = kernels.triangle_counts(g.indptr, g.indices, g.num_vertices)
    out = np.zeros(g.num_vertices, dtype=np.float64)
    mask = deg >= 2
    pairs = deg[mask] * (deg[mask] - 1) // 2
    out[mask] = tri[mask] / pairs
    return out


class EigenResult(NamedTuple):
    scores: np.ndarray
    iterations: int
    residual: float
    converged: bool


def eigencentrality(g, tol=1e-10, max_iters=10000):
    """Dominant-eigenvector scores of the adjacency matrix, max-normalized.

    Power iteration from the uniform vector. The iteration multiplies by
    A+I (same eigenvectors; avoids the bipartite oscillation of plain A)
    while the reported residual is ||Ax - lambda*x||_inf on A itself with
    the Rayleigh estimate lambda.
    """
    n = g.num_vertices
    if g.num_edges == 0:
        raise DegenerateGraphError("eigencentrality needs at least one edge")
    src = np.repeat(np.arange(n, dtype=np.int64), g.degrees)
    dst = g.indices

    def matvec(x):
        return np.bincount(src, weights=x[dst], minlength=n)

    x = np.ones(n, dtype=np.float64)
    residual = np.inf
    iterations = 0
    converged = False
    for iterations in range(1, max_iters + 1):
        ax = matvec(x)
        lam = float(x @ ax) / float(x @ x)
        residual = float(np.max(np.abs(ax - lam * x)))
        if residual <= tol:
            converged = True
            break
        y = ax + x
        x = y / y.max()
    scores = x.copy()
    scores[g.degrees == 0] = 0.0
    return EigenResult(scores, iterations, residual, converged)


@dataclass(frozen=True, eq=False)
class Coloring:
    """Proper vertex coloring with 1-based color indices."""

    colors: np.ndarray
    num_colors: int

    def is_proper(self, g):
        edges = g.edge_array()
        if not edges.size:
            return True
        return bool(np.all(self.colors[edges[:, 0]] != self.colors[edges[:, 1]]))


def greedy_coloring(g):
    """First-fit coloring scanning vertices in ascending id order."""
    n = g.num_vertices
    colors = np.zeros(n, dtype=np.int64)
    for v in range(n):
        used = {int(colors[u]) for u in g.neighbors(v) if colors[u] > 0}
        c = 1
        while c in used:
            c += 1
        colors[v] = c
    num = int(colors.max()) if n else 0
    return Coloring(colors, num)


def distinct_neighbor_colors(g, coloring):
    """Per-vertex count of distinct colors appearing in the open neighborhood."""
    out = np.zeros(g.num_vertices, dtype=np.int64)
    for v in range(g.num_vertices):
        nb = g.neighbors(v)
        if nb.size:
            out[v] = np.unique(coloring.colors[nb]).size
    return out
