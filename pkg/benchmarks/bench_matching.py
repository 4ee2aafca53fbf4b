#!/usr/bin/env python3
"""Benchmark the matching kernels: compiled extension vs pure Python.

Instances mirror the production workload: the candidate graph of an N x N
triangulated grid (one diagonal merge per cell plus the cross-cell edges)
and dense random graphs. Run after building the extension:

    python setup.py build_ext --inplace
    python benchmarks/bench_matching.py
"""

import random
import time

from quadkit.matching import WeightedGraph
from quadkit.matching import _blossom as kernel_py

try:
    from quadkit.matching import _blossom_cy as kernel_cy
except ImportError:
    kernel_cy = None


def grid_instance(n):
    def lo(i, j):
        return 2 * (i * n + j)

    def up(i, j):
        return 2 * (i * n + j) + 1

    edges = []
    for i in range(n):
        for j in range(n):
            edges.append((lo(i, j), up(i, j), 0.9))
            if i + 1 < n:
                edges.append((lo(i, j), up(i + 1, j), 0.5))
            if j + 1 < n:
                edges.append((up(i, j), lo(i, j + 1), 0.5))
    return WeightedGraph(2 * n * n, edges)


def random_instance(n, m, seed):
    rng = random.Random(seed)
    pairs = set()
    while len(pairs) < m:
        u, v = rng.randrange(n), rng.randrange(n)
        if u != v:
            pairs.add((min(u, v), max(u, v)))
    return WeightedGraph(n, [(u, v, rng.random()) for u, v in sorted(pairs)])


def run(kernel, graph):
    eu = [e[0] for e in graph.edges]
    ev = [e[1] for e in graph.edges]
    ew = [e[2] for e in graph.edges]
    t0 = time.perf_counter()
    mate = kernel.solve(graph.node_count, eu, ev, ew)
    elapsed = time.perf_counter() - t0
    matched = sum(1 for v in mate if v >= 0) // 2
    return elapsed, matched


def main():
    cases = [
        ("grid 16x16", grid_instance(16)),
        ("grid 32x32", grid_instance(32)),
        ("grid 64x64", grid_instance(64)),
        ("random n=400 m=2000", random_instance(400, 2000, 1)),
        ("random n=1000 m=5000", random_instance(1000, 5000, 2)),
    ]
    print(f"{'instance':<22} {'nodes':>6} {'edges':>6} "
          f"{'python':>9} {'compiled':>9} {'speedup':>8}")
    for name, g in cases:
        t_py, m_py = run(kernel_py, g)
        if kernel_cy is not None:
            t_cy, m_cy = run(kernel_cy, g)
            assert m_py == m_cy, "kernel disagreement"
            print(f"{name:<22} {g.node_count:>6} {g.edge_count:>6} "
                  f"{t_py:>8.3f}s {t_cy:>8.3f}s {t_py / t_cy:>7.1f}x")
        else:
            print(f"{name:<22} {g.node_count:>6} {g.edge_count:>6} "
                  f"{t_py:>8.3f}s {'n/a':>9} {'n/a':>8}")
    if kernel_cy is None:
        print("\ncompiled kernel not built; showing pure-Python timings only")


if __name__ == "__main__":
    main()
