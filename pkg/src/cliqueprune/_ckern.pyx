# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels: triangle counts, K4-in-neighborhood counts, and the
all-maximum-clique branch and bound.

Vertex sets are multi-word bitsets (64 bits per word). The control flow
mirrors cliqueprune._purekern bit for bit: identical coloring order,
identical branch order, identical node counts.
"""

import time

import numpy as np

from .errors import SolverTimeout

from libc.stdlib cimport calloc, free, malloc
from libc.stdint cimport int64_t, uint64_t
from libc.string cimport memcpy

cdef extern from *:
    int __builtin_popcountll(unsigned long long) nogil
    int __builtin_ctzll(unsigned long long) nogil

BACKEND_NAME = "c"

cdef long long TIME_CHECK_MASK = 0x1FFF


cdef inline Py_ssize_t _first_bit(uint64_t* bs, Py_ssize_t nwords) nogil:
    cdef Py_ssize_t w
    for w in range(nwords):
        if bs[w]:
            return (w << 6) + __builtin_ctzll(bs[w])
    return -1


cdef inline int64_t _popcount(uint64_t* bs, Py_ssize_t nwords) nogil:
    cdef int64_t total = 0
    cdef Py_ssize_t w
    for w in range(nwords):
        total += __builtin_popcountll(bs[w])
    return total


cdef uint64_t* _build_bits(const int64_t[::1] indptr, const int64_t[::1] indices,
                           Py_ssize_t n, Py_ssize_t nwords) except NULL:
    cdef uint64_t* bits = <uint64_t*> calloc(n * nwords if n else 1, sizeof(uint64_t))
    if bits == NULL:
        raise MemoryError()
    cdef Py_ssize_t v, j
    cdef int64_t u
    for v in range(n):
        for j in range(indptr[v], indptr[v + 1]):
            u = indices[j]
            bits[v * nwords + (u >> 6)] |= (<uint64_t> 1) << (u & 63)
    return bits


def triangle_counts(indptr, indices, n):
    """Per-vertex number of edges among its neighbors."""
    cdef const int64_t[::1] ip = np.ascontiguousarray(indptr, dtype=np.int64)
    cdef const int64_t[::1] ix = np.ascontiguousarray(indices, dtype=np.int64)
    cdef Py_ssize_t cn = n
    cdef Py_ssize_t nwords = (cn + 63) >> 6 if cn else 1
    cdef uint64_t* bits = _build_bits(ip, ix, cn, nwords)
    out = np.zeros(cn, dtype=np.int64)
    cdef int64_t[::1] ov = out
    cdef Py_ssize_t v, j, w
    cdef int64_t u, acc
    try:
        for v in range(cn):
            acc = 0
            for j in range(ip[v], ip[v + 1]):
                u = ix[j]
                for w in range(nwords):
                    acc += __builtin_popcountll(bits[v * nwords + w] & bits[u * nwords + w])
            ov[v] = acc // 2
    finally:
        free(bits)
    return out


def k4_counts(indptr, indices, n):
    """Per-vertex number of triangles inside its open neighborhood."""
    cdef const int64_t[::1] ip = np.ascontiguousarray(indptr, dtype=np.int64)
    cdef const int64_t[::1] ix = np.ascontiguousarray(indices, dtype=np.int64)
    cdef Py_ssize_t cn = n
    cdef Py_ssize_t nwords = (cn + 63) >> 6 if cn else 1
    cdef uint64_t* bits = _build_bits(ip, ix, cn, nwords)
    cdef uint64_t* ma = <uint64_t*> malloc(nwords * sizeof(uint64_t))
    out = np.zeros(cn, dtype=np.int64)
    cdef int64_t[::1] ov = out
    cdef Py_ssize_t v, j, w, w2, wb
    cdef int64_t a, b, cnt
    cdef uint64_t word, hi
    if ma == NULL:
        free(bits)
        raise MemoryError()
    try:
        for v in range(cn):
            cnt = 0
            for j in range(ip[v], ip[v + 1]):
                a = ix[j]
                # neighbors of a inside N(v), above a
                wb = a >> 6
                for w in range(nwords):
                    word = bits[a * nwords + w] & bits[v * nwords + w]
                    if w < wb:
                        word = 0
                    elif w == wb:
                        if (a & 63) == 63:
                            word = 0
                        else:
                            word &= (<uint64_t> 0xFFFFFFFFFFFFFFFF) << ((a & 63) + 1)
                    ma[w] = word
                for w in range(nwords):
                    word = ma[w]
                    while word:
                        b = (w << 6) + __builtin_ctzll(word)
                        word &= word - 1
                        wb = b >> 6
                        for w2 in range(wb, nwords):
                            hi = bits[b * nwords + w2] & ma[w2]
                            if w2 == wb:
                                if (b & 63) == 63:
                                    hi = 0
                                else:
                                    hi &= (<uint64_t> 0xFFFFFFFFFFFFFFFF) << ((b & 63) + 1)
                            cnt += __builtin_popcountll(hi)
            ov[v] = cnt
    finally:
        free(ma)
        free(bits)
    return out


cdef class _MaxCliqueSearch:
    cdef Py_ssize_t n, nwords, max_levels
    cdef uint64_t* adj
    cdef uint64_t** live
    cdef uint64_t** child
    cdef uint64_t** uncolored
    cdef uint64_t** avail
    cdef int** order
    cdef int** colors
    cdef int64_t* rstack
    cdef Py_ssize_t best
    cdef long long nodes
    cdef list found
    cdef double deadline
    cdef bint has_deadline

    def __cinit__(self, Py_ssize_t n, Py_ssize_t nwords):
        self.n = n
        self.nwords = nwords
        self.max_levels = n + 2
        self.adj = NULL
        self.live = <uint64_t**> calloc(self.max_levels, sizeof(uint64_t*))
        self.child = <uint64_t**> calloc(self.max_levels, sizeof(uint64_t*))
        self.uncolored = <uint64_t**> calloc(self.max_levels, sizeof(uint64_t*))
        self.avail = <uint64_t**> calloc(self.max_levels, sizeof(uint64_t*))
        self.order = <int**> calloc(self.max_levels, sizeof(int*))
        self.colors = <int**> calloc(self.max_levels, sizeof(int*))
        self.rstack = <int64_t*> malloc((n + 1) * sizeof(int64_t))
        if (self.live == NULL or self.child == NULL or self.uncolored == NULL
                or self.avail == NULL or self.order == NULL or self.colors == NULL
                or self.rstack == NULL):
            raise MemoryError()
        self.best = 0
        self.nodes = 0
        self.found = []
        self.has_deadline = False

    def __dealloc__(self):
        cdef Py_ssize_t d
        if self.live != NULL:
            for d in range(self.max_levels):
                free(self.live[d])
            free(self.live)
        if self.child != NULL:
            for d in range(self.max_levels):
                free(self.child[d])
            free(self.child)
        if self.uncolored != NULL:
            for d in range(self.max_levels):
                free(self.uncolored[d])
            free(self.uncolored)
        if self.avail != NULL:
            for d in range(self.max_levels):
                free(self.avail[d])
            free(self.avail)
        if self.order != NULL:
            for d in range(self.max_levels):
                free(self.order[d])
            free(self.order)
        if self.colors != NULL:
            for d in range(self.max_levels):
                free(self.colors[d])
            free(self.colors)
        free(self.rstack)
        free(self.adj)

    cdef int _ensure_level(self, Py_ssize_t depth) except -1:
        if self.live[depth] == NULL:
            self.live[depth] = <uint64_t*> malloc(self.nwords * sizeof(uint64_t))
            self.child[depth] = <uint64_t*> malloc(self.nwords * sizeof(uint64_t))
            self.uncolored[depth] = <uint64_t*> malloc(self.nwords * sizeof(uint64_t))
            self.avail[depth] = <uint64_t*> malloc(self.nwords * sizeof(uint64_t))
            self.order[depth] = <int*> malloc(self.n * sizeof(int))
            self.colors[depth] = <int*> malloc(self.n * sizeof(int))
            if (self.live[depth] == NULL or self.child[depth] == NULL
                    or self.uncolored[depth] == NULL or self.avail[depth] == NULL
                    or self.order[depth] == NULL or self.colors[depth] == NULL):
                raise MemoryError()
        return 0

    cdef int _expand(self, Py_ssize_t depth, uint64_t* cand, int64_t pcount) except -1:
        cdef Py_ssize_t i, w, v
        cdef int color, idx
        cdef uint64_t bit
        cdef uint64_t* unc
        cdef uint64_t* av
        cdef uint64_t* lv
        cdef uint64_t* ch
        cdef int* order
        cdef int* colors
        cdef int64_t ccount

        self.nodes += 1
        if self.has_deadline and (self.nodes & TIME_CHECK_MASK) == 1:
            if time.monotonic() >= self.deadline:
                raise SolverTimeout(self.best)
        if pcount == 0:
            if depth > self.best:
                self.best = depth
                self.found.clear()
                self.found.append(tuple([self.rstack[i] for i in range(depth)]))
            elif depth == self.best:
                self.found.append(tuple([self.rstack[i] for i in range(depth)]))
            return 0

        self._ensure_level(depth)
        unc = self.uncolored[depth]
        av = self.avail[depth]
        lv = self.live[depth]
        ch = self.child[depth]
        order = self.order[depth]
        colors = self.colors[depth]

        memcpy(unc, cand, self.nwords * sizeof(uint64_t))
        idx = 0
        color = 0
        while _first_bit(unc, self.nwords) >= 0:
            color += 1
            memcpy(av, unc, self.nwords * sizeof(uint64_t))
            while True:
                v = _first_bit(av, self.nwords)
                if v < 0:
                    break
                order[idx] = <int> v
                colors[idx] = color
                idx += 1
                bit = (<uint64_t> 1) << (v & 63)
                unc[v >> 6] ^= bit
                av[v >> 6] ^= bit
                for w in range(self.nwords):
                    av[w] &= ~self.adj[v * self.nwords + w]

        memcpy(lv, cand, self.nwords * sizeof(uint64_t))
        for i in range(idx - 1, -1, -1):
            if depth + colors[i] < <Py_ssize_t> self.best:
                break
            v = order[i]
            lv[v >> 6] ^= (<uint64_t> 1) << (v & 63)
            ccount = 0
            for w in range(self.nwords):
                ch[w] = lv[w] & self.adj[v * self.nwords + w]
                ccount += __builtin_popcountll(ch[w])
            self.rstack[depth] = v
            self._expand(depth + 1, ch, ccount)
        return 0


def solve_max_cliques(indptr, indices, n, deadline=None):
    """Enumerate all maximum cliques; see the pure-Python twin for semantics."""
    cdef Py_ssize_t cn = n
    if cn == 0:
        return 0, [()], 1
    cdef const int64_t[::1] ip = np.ascontiguousarray(indptr, dtype=np.int64)
    cdef const int64_t[::1] ix = np.ascontiguousarray(indices, dtype=np.int64)
    cdef Py_ssize_t nwords = (cn + 63) >> 6
    cdef _MaxCliqueSearch search = _MaxCliqueSearch(cn, nwords)
    search.adj = _build_bits(ip, ix, cn, nwords)
    if deadline is not None:
        search.deadline = deadline
        search.has_deadline = True
    cdef uint64_t* root = <uint64_t*> malloc(nwords * sizeof(uint64_t))
    if root == NULL:
        raise MemoryError()
    cdef Py_ssize_t w
    cdef Py_ssize_t rem = cn & 63
    try:
        for w in range(nwords):
            root[w] = <uint64_t> 0xFFFFFFFFFFFFFFFF
        if rem:
            root[nwords - 1] = ((<uint64_t> 1) << rem) - 1
        search._expand(0, root, cn)
    finally:
        free(root)
    return int(search.best), search.found, int(search.nodes)
