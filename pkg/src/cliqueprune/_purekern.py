"""Pure-Python fallback for the compiled kernels.

Vertex sets are plain Python integers used as bitsets. Every function here
mirrors ``cliqueprune._ckern`` exactly, including traversal order, so both
backends return identical results (clique lists and search statistics).
"""

import time

import numpy as np

from .errors import SolverTimeout

BACKEND_NAME = "python"

_TIME_CHECK_MASK = 0x1FFF  # consult the clock every 8192 search nodes


def _bitmasks(indptr, indices, n):
    masks = [0] * n
    for v in range(n):
        m = 0
        for u in indices[indptr[v] : indptr[v + 1]]:
            m |= 1 << int(u)
        masks[v] = m
    return masks


def triangle_counts(indptr, indices, n):
    """Per-vertex number of edges among its neighbors."""
    masks = _bitmasks(indptr, indices, n)
    out = np.zeros(n, dtype=np.int64)
    for v in range(n):
        mv = masks[v]
        acc = 0
        for u in indices[indptr[v] : indptr[v + 1]]:
            acc += (mv & masks[int(u)]).bit_count()
        out[v] = acc // 2
    return out


def k4_counts(indptr, indices, n):
    """Per-vertex number of triangles inside its open neighborhood.

    Each counted triangle forms a K4 together with the vertex itself.
    """
    masks = _bitmasks(indptr, indices, n)
    out = np.zeros(n, dtype=np.int64)
    for v in range(n):
        nv = masks[v]
        cnt = 0
        rest = nv
        while rest:
            a = (rest & -rest).bit_length() - 1
            rest &= rest - 1
            # neighbors of a inside N(v), above a: candidate second corners
            ma = masks[a] & nv & (-1 << (a + 1))
            mb = ma
            while mb:
                b = (mb & -mb).bit_length() - 1
                mb &= mb - 1
                cnt += (masks[b] & ma & (-1 << (b + 1))).bit_count()
        out[v] = cnt
    return out


def solve_max_cliques(indptr, indices, n, deadline=None):
    """Enumerate all maximum cliques.

    Branch and bound over bitsets with a greedy-coloring upper bound.
    Candidates are colored in ascending-id order and branched in descending
    color order; a branch is cut only when it cannot reach the best size
    seen so far, so every clique of the final maximum size survives.

    Returns ``(omega, cliques, nodes)`` where cliques are tuples in
    discovery order. Raises SolverTimeout past `deadline` (monotonic time).
    """
    masks = _bitmasks(indptr, indices, n)
    best = 0
    found = []
    stack = []
    nodes = 0

    def expand(rsize, cand):
        nonlocal best, nodes
        nodes += 1
        if (
            deadline is not None
            and (nodes & _TIME_CHECK_MASK) == 1
            and time.monotonic() >= deadline
        ):
            raise SolverTimeout(best)
        if cand == 0:
            if rsize > best:
                best = rsize
                found.clear()
                found.append(tuple(stack))
            elif rsize == best:
                found.append(tuple(stack))
            return
        order = []
        colors = []
        uncolored = cand
        color = 0
        while uncolored:
            color += 1
            avail = uncolored
            while avail:
                v = (avail & -avail).bit_length() - 1
                order.append(v)
                colors.append(color)
                bit = 1 << v
                uncolored ^= bit
                avail = (avail ^ bit) & ~masks[v]
        live = cand
        for i in range(len(order) - 1, -1, -1):
            if rsize + colors[i] < best:
                break
            v = order[i]
            live ^= 1 << v
            stack.append(v)
            expand(rsize + 1, live & masks[v])
            stack.pop()

    expand(0, (1 << n) - 1 if n else 0)
    return best, found, nodes
