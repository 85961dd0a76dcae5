"""Weighted-modularity clustering by local moving and aggregation.

A Louvain-style optimizer: nodes are moved greedily between communities
while the resolution-scaled modularity gain is positive, then the
community graph is aggregated and the process repeats. Deterministic
for a fixed seed (the seed only shuffles visit order). This
approximates the clustering the original workflow delegated to an
external viewer; it is not an emulation of any specific tool.
"""

from __future__ import annotations

import random
from collections import defaultdict

from .errors import DomainError
from .graph import ActantGraph

_GAIN_EPS = 1e-12


def modularity(g: ActantGraph, partition: dict[int, int], resolution: float = 1.0) -> float:
    """Weighted modularity of a partition (node index -> cluster id)."""
    m2 = 2.0 * sum(g.edges.values())
    if m2 == 0.0:
        return 0.0
    inner = 0.0
    deg = [0.0] * g.n_nodes
    for (i, j), w in g.edges.items():
        if partition[i] == partition[j]:
            inner += 2.0 * w
        deg[i] += w
        deg[j] += w
    tot: dict[int, float] = defaultdict(float)
    for idx in range(g.n_nodes):
        tot[partition[idx]] += deg[idx]
    return inner / m2 - resolution * sum((t / m2) ** 2 for t in tot.values())


def _renumber(comm: list[int]) -> list[int]:
    mapping: dict[int, int] = {}
    out = []
    for c in comm:
        if c not in mapping:
            mapping[c] = len(mapping)
        out.append(mapping[c])
    return out


def _local_move(adj, self_w, resolution, rng) -> tuple[list[int], bool]:
    n = len(adj)
    deg = [sum(nbrs.values()) + 2.0 * self_w[i] for i, nbrs in enumerate(adj)]
    m2 = sum(deg)
    if m2 == 0.0:
        return list(range(n)), False
    comm = list(range(n))
    tot = deg.copy()
    order = list(range(n))
    rng.shuffle(order)
    improved = False
    moved = True
    while moved:
        moved = False
        for i in order:
            ci = comm[i]
            ki = deg[i]
            links: dict[int, float] = defaultdict(float)
            for j, w in adj[i].items():
                if j != i:
                    links[comm[j]] += w
            tot[ci] -= ki
            base = links.get(ci, 0.0) - resolution * tot[ci] * ki / m2
            best_c = ci
            best_gain = base
            for c in sorted(links):
                if c == ci:
                    continue
                gain = links[c] - resolution * tot[c] * ki / m2
                if gain > best_gain + _GAIN_EPS:
                    best_c = c
                    best_gain = gain
            tot[best_c] += ki
            if best_c != ci:
                comm[i] = best_c
                moved = True
                improved = True
    return _renumber(comm), improved


def _aggregate(adj, self_w, comm):
    k = max(comm) + 1
    new_adj: list[dict[int, float]] = [defaultdict(float) for _ in range(k)]
    new_self = [0.0] * k
    for i, nbrs in enumerate(adj):
        ci = comm[i]
        new_self[ci] += self_w[i]
        for j, w in nbrs.items():
            if i < j:
                cj = comm[j]
                if ci == cj:
                    new_self[ci] += w
                else:
                    new_adj[ci][cj] += w
                    new_adj[cj][ci] += w
    return [dict(d) for d in new_adj], new_self


def cluster(g: ActantGraph, resolution: float = 1.0, seed: int = 0) -> dict[int, int]:
    """Partition the graph; returns node index -> 1-based cluster id.

    Cluster ids are contiguous from 1, ordered by descending cluster
    size, ties broken by the smallest (class, canonical) member. The
    result is never worse than the single-cluster partition.
    """
    if g.n_nodes == 0:
        raise DomainError("cluster requires a non-empty graph")
    rng = random.Random(seed)

    adj: list[dict[int, float]] = [
        {j: float(w) for j, w in nbrs.items()} for nbrs in g.adjacency()
    ]
    self_w = [0.0] * g.n_nodes
    node_comm = list(range(g.n_nodes))  # original node -> current supernode
    while True:
        comm, improved = _local_move(adj, self_w, resolution, rng)
        node_comm = [comm[c] for c in node_comm]
        if not improved:
            break
        adj, self_w = _aggregate(adj, self_w, comm)

    partition = {i: c for i, c in enumerate(node_comm)}
    one_cluster = {i: 0 for i in range(g.n_nodes)}
    if modularity(g, partition, resolution) < modularity(g, one_cluster, resolution):
        partition = one_cluster

    groups: dict[int, list[int]] = defaultdict(list)
    for i, c in partition.items():
        groups[c].append(i)
    ordered = sorted(
        groups.values(), key=lambda ms: (-len(ms), min(g.nodes[i].sort_key for i in ms))
    )
    out: dict[int, int] = {}
    for cid, members in enumerate(ordered, start=1):
        for i in members:
            out[i] = cid
    return out
