"""Pure-Python kernels: reference implementations of the hot loops.

Semantics match ``_speedups.pyx`` operation for operation; these run
when the compiled extension is unavailable or ACTANTNET_PURE is set.
"""

from __future__ import annotations

import math

NAME = "python"


def emit_pair_keys(indptr, indices, ncols, out) -> int:
    """Fill ``out`` with packed keys i*ncols+j for every within-row pair
    i <= j of the CSR-like structure; returns the number of keys."""
    ptr = indptr.tolist()
    idx = indices.tolist()
    ncols = int(ncols)
    keys = []
    append = keys.append
    for d in range(len(ptr) - 1):
        row = idx[ptr[d] : ptr[d + 1]]
        k = len(row)
        for a in range(k):
            base = row[a] * ncols
            for b in range(a, k):
                append(base + row[b])
    out[: len(keys)] = keys
    return len(keys)


def _pair_terms(m, px, py, drow, wrow, n):
    """Yield (i, dx, dy, dist, w, l) for i != m with the coincidence guard."""
    xm = px[m]
    ym = py[m]
    for i in range(n):
        if i == m:
            continue
        dx = xm - px[i]
        dy = ym - py[i]
        dd = math.sqrt(dx * dx + dy * dy)
        if dd < 1e-9:
            dd = 1e-9
            dx = 1e-9
            dy = 0.0
        yield i, dx, dy, dd, wrow[i], drow[i]


def _gradient(m, px, py, drow, wrow, n):
    gx = 0.0
    gy = 0.0
    for _i, dx, dy, dd, w, l in _pair_terms(m, px, py, drow, wrow, n):
        f = 2.0 * w * (1.0 - l / dd)
        gx += f * dx
        gy += f * dy
    return gx, gy


def _local_stress(m, x, y, px, py, drow, wrow, n):
    s = 0.0
    for i in range(n):
        if i == m:
            continue
        dx = x - px[i]
        dy = y - py[i]
        dd = math.sqrt(dx * dx + dy * dy)
        r = dd - drow[i]
        s += wrow[i] * r * r
    return s


def _relax_node(m, px, py, drow, wrow, inner_cap, tol, n):
    for _ in range(inner_cap):
        gx, gy = _gradient(m, px, py, drow, wrow, n)
        gn = math.sqrt(gx * gx + gy * gy)
        if gn < tol:
            return
        hxx = 0.0
        hyy = 0.0
        hxy = 0.0
        for _i, dx, dy, dd, w, l in _pair_terms(m, px, py, drow, wrow, n):
            d3 = dd * dd * dd
            hxx += 2.0 * w * (1.0 - l * dy * dy / d3)
            hyy += 2.0 * w * (1.0 - l * dx * dx / d3)
            hxy += 2.0 * w * l * dx * dy / d3
        det = hxx * hyy - hxy * hxy
        if abs(det) > 1e-12:
            sx = (-gx * hyy + gy * hxy) / det
            sy = (gx * hxy - gy * hxx) / det
        else:
            sx = -0.1 * gx / gn
            sy = -0.1 * gy / gn
        s0 = _local_stress(m, px[m], py[m], px, py, drow, wrow, n)
        t = 1.0
        accepted = False
        for _h in range(30):
            nx = px[m] + t * sx
            ny = py[m] + t * sy
            if _local_stress(m, nx, ny, px, py, drow, wrow, n) <= s0:
                px[m] = nx
                py[m] = ny
                accepted = True
                break
            t *= 0.5
        if not accepted:
            return


def kk_sweep(pos, dist, wts, inner_cap: int, tol: float) -> float:
    """One Gauss-Seidel sweep of node-wise Newton relaxation over the
    stress sum_{i<j} w_ij (|p_i - p_j| - d_ij)^2 with w = 1/d^2.

    Mutates ``pos`` in place; returns the maximum node gradient norm
    after the sweep. A backtracking step guarantees the node-local
    stress never increases, so the total stress is non-increasing.
    """
    n = pos.shape[0]
    px = pos[:, 0].tolist()
    py = pos[:, 1].tolist()
    D = dist.tolist()
    W = wts.tolist()
    for m in range(n):
        _relax_node(m, px, py, D[m], W[m], inner_cap, tol, n)
    maxg = 0.0
    for m in range(n):
        gx, gy = _gradient(m, px, py, D[m], W[m], n)
        gn = math.sqrt(gx * gx + gy * gy)
        if gn > maxg:
            maxg = gn
    pos[:, 0] = px
    pos[:, 1] = py
    return maxg
