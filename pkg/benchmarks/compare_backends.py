#!/usr/bin/env python3
"""Compare the compiled kernels against the pure-Python fallback.

Times triangle counting, order-4 neighborhood counting, and full maximum
clique enumeration on seeded G(n, p) instances, and verifies that both
backends return identical results (including search-node counts).

Usage:
    python benchmarks/compare_backends.py [--n 64 128] [--p 0.5] [--repeat 3]
"""

import argparse
import statistics
import time

import numpy as np

from cliqueprune import _purekern, gen_gnp

try:
    from cliqueprune import _ckern
except ImportError:
    _ckern = None


def _time(fn, repeat):
    durations = []
    result = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        result = fn()
        durations.append(time.perf_counter() - t0)
    return result, min(durations)


def bench_graph(g, repeat):
    jobs = [
        ("triangle_counts", lambda impl: impl.triangle_counts(
            g.indptr, g.indices, g.num_vertices)),
        ("k4_counts", lambda impl: impl.k4_counts(
            g.indptr, g.indices, g.num_vertices)),
        ("solve_max_cliques", lambda impl: impl.solve_max_cliques(
            g.indptr, g.indices, g.num_vertices, None)),
    ]
    rows = []
    for name, call in jobs:
        py_res, py_t = _time(lambda: call(_purekern), repeat)
        if _ckern is None:
            rows.append((name, py_t, None, None, "n/a"))
            continue
        c_res, c_t = _time(lambda: call(_ckern), repeat)
        if name == "solve_max_cliques":
            same = c_res == py_res
        else:
            same = bool(np.array_equal(c_res, py_res))
        rows.append((name, py_t, c_t, py_t / c_t if c_t else None,
                     "ok" if same else "MISMATCH"))
    return rows


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, nargs="+", default=[64, 128, 200])
    ap.add_argument("--p", type=float, default=0.5)
    ap.add_argument("--seed", type=int, default=1)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    if _ckern is None:
        print("compiled extension not available; timing the fallback only\n")

    header = f"{'kernel':<20} {'n':>5} {'python (s)':>12} {'c (s)':>12} {'speedup':>9}  agree"
    print(header)
    print("-" * len(header))
    speedups = []
    for n in args.n:
        g = gen_gnp(n, args.p, seed=args.seed)
        for name, py_t, c_t, speedup, same in bench_graph(g, args.repeat):
            c_txt = f"{c_t:12.6f}" if c_t is not None else f"{'-':>12}"
            s_txt = f"{speedup:8.1f}x" if speedup else f"{'-':>9}"
            print(f"{name:<20} {n:>5} {py_t:12.6f} {c_txt} {s_txt}  {same}")
            if speedup:
                speedups.append(speedup)
    if speedups:
        print(f"\ngeometric-mean speedup: "
              f"{statistics.geometric_mean(speedups):.1f}x")


if __name__ == "__main__":
    main()
