#!/usr/bin/env python3
"""Benchmark the compiled kernels against the pure-Python fallbacks.

Runs the co-occurrence pair emission and the layout relaxation sweep on
synthetic inputs under every available backend and prints a timing
table. Pair counts must match exactly between backends; layout
positions agree to float rounding.

Usage: python3 benchmarks/bench_kernels.py [--docs 100000] [--nodes 150]
"""

import argparse
import math
import random
import time

import numpy as np

from actantnet.kernels import available_backends


def synth_incidence(n_docs: int, n_cols: int, seed: int = 7):
    rng = random.Random(seed)
    rows = []
    for _ in range(n_docs):
        k = rng.randint(0, 8)
        rows.append(sorted(rng.sample(range(n_cols), k)))
    indptr = np.zeros(n_docs + 1, dtype=np.int64)
    for d, row in enumerate(rows):
        indptr[d + 1] = indptr[d] + len(row)
    indices = np.fromiter(
        (j for row in rows for j in row), dtype=np.int64, count=int(indptr[-1])
    )
    return indptr, indices


def synth_layout_problem(n: int, seed: int = 7):
    rng = random.Random(seed)
    # random connected graph: spanning chain plus extra edges
    dist = np.full((n, n), np.inf)
    np.fill_diagonal(dist, 0.0)
    edges = {(i, i + 1) for i in range(n - 1)}
    for _ in range(n):
        a, b = rng.sample(range(n), 2)
        edges.add((min(a, b), max(a, b)))
    adj = [[] for _ in range(n)]
    for a, b in edges:
        adj[a].append(b)
        adj[b].append(a)
    for start in range(n):  # BFS hops
        frontier = [start]
        while frontier:
            nxt = []
            for u in frontier:
                for v in adj[u]:
                    if math.isinf(dist[start, v]):
                        dist[start, v] = dist[start, u] + 1.0
                        nxt.append(v)
            frontier = nxt
    wts = np.where(dist > 0, 1.0 / np.square(np.maximum(dist, 1e-12)), 0.0)
    pos = np.empty((n, 2))
    for i in range(n):
        a = 2 * math.pi * i / n
        pos[i] = (0.5 * n * math.cos(a), 0.5 * n * math.sin(a))
    return pos, dist, wts


def bench_pairs(backend, indptr, indices, ncols, repeats):
    counts = np.diff(indptr)
    total = int((counts * (counts + 1) // 2).sum())
    out = np.empty(total, dtype=np.int64)
    best = math.inf
    for _ in range(repeats):
        t0 = time.perf_counter()
        backend.emit_pair_keys(indptr, indices, ncols, out)
        best = min(best, time.perf_counter() - t0)
    return best, out.copy()

def bench_sweeps(backend, pos, dist, wts, sweeps):
    work = pos.copy()
    t0 = time.perf_counter()
    for _ in range(sweeps):
        backend.kk_sweep(work, dist, wts, 20, 1e-6)
    return time.perf_counter() - t0, work


def main() -> int:
    ap = argparse.ArgumentParser()
    ap.add_argument("--docs", type=int, default=100_000)
    ap.add_argument("--cols", type=int, default=5_000)
    ap.add_argument("--nodes", type=int, default=150)
    ap.add_argument("--sweeps", type=int, default=20)
    ap.add_argument("--repeats", type=int, default=3)
    args = ap.parse_args()

    backends = available_backends()
    print(f"backends: {', '.join(backends)}")
    indptr, indices = synth_incidence(args.docs, args.cols)
    pos, dist, wts = synth_layout_problem(args.nodes)

    pair_results = {}
    sweep_results = {}
    print(f"\npair emission ({args.docs} docs, {int(indptr[-1])} cells):")
    for name, backend in backends.items():
        secs, keys = bench_pairs(backend, indptr, indices, args.cols, args.repeats)
        pair_results[name] = (secs, keys)
        print(f"  {name:<8} {secs * 1e3:10.2f} ms")
    print(f"\nlayout sweeps ({args.nodes} nodes x {args.sweeps} sweeps):")
    for name, backend in backends.items():
        secs, placed = bench_sweeps(backend, pos, dist, wts, args.sweeps)
        sweep_results[name] = (secs, placed)
        print(f"  {name:<8} {secs * 1e3:10.2f} ms")

    if len(backends) == 2:
        (k_py,), (k_cy,) = (
            (pair_results["python"][1],),
            (pair_results["cython"][1],),
        )
        assert np.array_equal(k_py, k_cy), "pair keys differ between backends"
        d = np.abs(sweep_results["python"][1] - sweep_results["cython"][1]).max()
        print(f"\npair keys identical; max |coord delta| = {d:.3e}")
        print(
            "speedup: pairs x{:.1f}, sweeps x{:.1f}".format(
                pair_results["python"][0] / pair_results["cython"][0],
                sweep_results["python"][0] / sweep_results["cython"][0],
            )
        )
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
