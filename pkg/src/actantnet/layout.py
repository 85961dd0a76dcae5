"""Stress-minimizing 2-D placement with graph-distance targets.

Implements the classic spring layout of Kamada and Kawai: the ideal
distance between two nodes is their unweighted shortest-path hop count,
and the energy sum_{i<j} (|p_i - p_j| - d_ij)^2 / d_ij^2 is driven down
by node-wise 2-D Newton relaxation. Nodes start on a circle whose
rotation is derived from the seed; sweeps run in fixed node order, so
the result is bit-reproducible for a fixed seed. A backtracking line
search makes the stress non-increasing across sweeps.

`layout` handles one connected component (its contract); callers with
disconnected graphs use `layout_components`, which lays out each
component and tiles them left to right by descending size.
"""

from __future__ import annotations

import math
import random
from collections import deque
from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import DomainError
from .graph import ActantGraph, connected_components

INNER_NEWTON_CAP = 20


def hop_distances(g: ActantGraph) -> np.ndarray:
    """All-pairs unweighted shortest-path hop counts (inf if unreachable)."""
    n = g.n_nodes
    adj = g.adjacency()
    dist = np.full((n, n), np.inf)
    for start in range(n):
        dist[start, start] = 0.0
        queue = deque([start])
        while queue:
            u = queue.popleft()
            du = dist[start, u]
            for v in adj[u]:
                if math.isinf(dist[start, v]):
                    dist[start, v] = du + 1.0
                    queue.append(v)
    return dist


def stress_from_positions(pos: np.ndarray, dist: np.ndarray) -> float:
    """sum_{i<j} (|p_i - p_j| - d_ij)^2 / d_ij^2 over finite-d pairs."""
    n = pos.shape[0]
    total = 0.0
    for i in range(n):
        for j in range(i + 1, n):
            d = dist[i, j]
            if not math.isfinite(d) or d <= 0:
                continue
            dx = pos[i, 0] - pos[j, 0]
            dy = pos[i, 1] - pos[j, 1]
            r = math.sqrt(dx * dx + dy * dy) - d
            total += (r * r) / (d * d)
    return total


def compute_stress(g: ActantGraph, coords: dict[int, tuple[float, float]]) -> float:
    """Stress of a coordinate assignment for ``g`` (hop-count targets)."""
    n = g.n_nodes
    pos = np.array([coords[i] for i in range(n)], dtype=np.float64)
    return stress_from_positions(pos, hop_distances(g))


def _initial_circle(n: int, radius: float, seed: int) -> np.ndarray:
    theta0 = random.Random(seed).random() * 2.0 * math.pi
    pos = np.empty((n, 2), dtype=np.float64)
    for i in range(n):
        a = theta0 + 2.0 * math.pi * i / n
        pos[i, 0] = radius * math.cos(a)
        pos[i, 1] = radius * math.sin(a)
    return pos


@dataclass
class LayoutResult:
    coords: dict[int, tuple[float, float]]
    stress_history: list[float]  # stress before sweep 1, then after each sweep
    sweeps: int
    converged: bool
    diameter: float


def layout_detailed(
    g: ActantGraph,
    iterations: int | None = None,
    tolerance: float = 1e-6,
    seed: int = 0,
    track_stress: bool = False,
) -> LayoutResult:
    """Run the relaxation; exposes per-sweep stress for diagnostics."""
    n = g.n_nodes
    if n == 0:
        raise DomainError("layout requires a non-empty graph")
    if len(connected_components(g)) > 1:
        raise DomainError(
            "layout requires a connected graph; use layout_components"
        )
    if n == 1:
        return LayoutResult({0: (0.0, 0.0)}, [0.0], 0, True, 0.0)

    dist = hop_distances(g)
    diam = float(dist.max())
    with np.errstate(divide="ignore"):
        wts = np.where(dist > 0, 1.0 / np.square(np.maximum(dist, 1e-12)), 0.0)
    pos = _initial_circle(n, diam / 2.0, seed)

    max_sweeps = iterations if iterations is not None else 100 * n
    history = [stress_from_positions(pos, dist)] if track_stress else []
    sweeps = 0
    converged = False
    for _ in range(max_sweeps):
        maxg = kernels.kk_sweep(pos, dist, wts, INNER_NEWTON_CAP, tolerance)
        sweeps += 1
        if track_stress:
            history.append(stress_from_positions(pos, dist))
        if maxg < tolerance:
            converged = True
            break
    coords = {i: (float(pos[i, 0]), float(pos[i, 1])) for i in range(n)}
    return LayoutResult(coords, history, sweeps, converged, diam)


def layout(
    g: ActantGraph,
    iterations: int | None = None,
    tolerance: float = 1e-6,
    seed: int = 0,
) -> dict[int, tuple[float, float]]:
    """Coordinates for one connected graph.

    Stops when the maximum node gradient norm drops below ``tolerance``
    or after ``iterations`` sweeps (default 100 * |V|). Disconnected
    input raises :class:`DomainError`.
    """
    return layout_detailed(g, iterations, tolerance, seed).coords


def _circle_fallback(n: int, seed: int) -> tuple[dict[int, tuple[float, float]], float]:
    # oversized components skip the quadratic relaxation; plain circle
    radius = max(1.0, n / (2.0 * math.pi))
    pos = _initial_circle(n, radius, seed)
    return {i: (float(pos[i, 0]), float(pos[i, 1])) for i in range(n)}, 2.0 * radius


def layout_components(
    g: ActantGraph,
    iterations: int | None = None,
    tolerance: float = 1e-6,
    seed: int = 0,
    max_kk_nodes: int | None = None,
) -> dict[int, tuple[float, float]]:
    """Lay out every component and tile them left to right by descending
    size, separated by the placed component's diameter. Components
    larger than ``max_kk_nodes`` get a plain circle placement."""
    coords: dict[int, tuple[float, float]] = {}
    x_cursor = 0.0
    first = True
    for comp in connected_components(g):
        sub = g.induced(comp)
        if max_kk_nodes is not None and sub.n_nodes > max_kk_nodes:
            local, diam = _circle_fallback(sub.n_nodes, seed)
        else:
            res = layout_detailed(sub, iterations, tolerance, seed)
            local, diam = res.coords, res.diameter
        pad = max(1.0, diam)
        xs = [xy[0] for xy in local.values()]
        min_x = min(xs)
        if not first:
            x_cursor += pad
        shift = x_cursor - min_x
        for local_i, (x, y) in local.items():
            coords[comp[local_i]] = (x + shift, y)
        x_cursor += max(xs) - min_x
        first = False
    return coords
