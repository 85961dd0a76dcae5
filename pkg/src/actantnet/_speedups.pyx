# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels for the two hot loops: co-occurrence pair emission
and the node-wise stress relaxation sweep. Mirrors ``_pykernels``."""

from libc.math cimport fabs, sqrt

NAME = "cython"


def emit_pair_keys(long long[::1] indptr, long long[::1] indices,
                   long long ncols, long long[::1] out):
    cdef Py_ssize_t nrows = indptr.shape[0] - 1
    cdef Py_ssize_t d, a, b, s, e
    cdef Py_ssize_t pos = 0
    cdef long long base
    for d in range(nrows):
        s = <Py_ssize_t> indptr[d]
        e = <Py_ssize_t> indptr[d + 1]
        for a in range(s, e):
            base = indices[a] * ncols
            for b in range(a, e):
                out[pos] = base + indices[b]
                pos += 1
    return pos


cdef inline double _local_stress(double[:, ::1] pos, double[:, ::1] dist,
                                 double[:, ::1] wts, Py_ssize_t m,
                                 double x, double y) nogil:
    cdef Py_ssize_t n = pos.shape[0]
    cdef Py_ssize_t i
    cdef double dx, dy, dd, r
    cdef double s = 0.0
    for i in range(n):
        if i == m:
            continue
        dx = x - pos[i, 0]
        dy = y - pos[i, 1]
        dd = sqrt(dx * dx + dy * dy)
        r = dd - dist[m, i]
        s += wts[m, i] * r * r
    return s


cdef inline void _gradient(double[:, ::1] pos, double[:, ::1] dist,
                           double[:, ::1] wts, Py_ssize_t m,
                           double* gx, double* gy) nogil:
    cdef Py_ssize_t n = pos.shape[0]
    cdef Py_ssize_t i
    cdef double dx, dy, dd, f
    cdef double ax = 0.0
    cdef double ay = 0.0
    for i in range(n):
        if i == m:
            continue
        dx = pos[m, 0] - pos[i, 0]
        dy = pos[m, 1] - pos[i, 1]
        dd = sqrt(dx * dx + dy * dy)
        if dd < 1e-9:
            dd = 1e-9
            dx = 1e-9
            dy = 0.0
        f = 2.0 * wts[m, i] * (1.0 - dist[m, i] / dd)
        ax += f * dx
        ay += f * dy
    gx[0] = ax
    gy[0] = ay


cdef void _relax_node(double[:, ::1] pos, double[:, ::1] dist,
                      double[:, ::1] wts, Py_ssize_t m,
                      int inner_cap, double tol) nogil:
    cdef Py_ssize_t n = pos.shape[0]
    cdef Py_ssize_t i
    cdef int it, h
    cdef bint accepted
    cdef double gx, gy, gn, dx, dy, dd, d3, w, l
    cdef double hxx, hyy, hxy, det, sx, sy, s0, t, nx, ny
    for it in range(inner_cap):
        _gradient(pos, dist, wts, m, &gx, &gy)
        gn = sqrt(gx * gx + gy * gy)
        if gn < tol:
            return
        hxx = 0.0
        hyy = 0.0
        hxy = 0.0
        for i in range(n):
            if i == m:
                continue
            dx = pos[m, 0] - pos[i, 0]
            dy = pos[m, 1] - pos[i, 1]
            dd = sqrt(dx * dx + dy * dy)
            if dd < 1e-9:
                dd = 1e-9
                dx = 1e-9
                dy = 0.0
            d3 = dd * dd * dd
            w = wts[m, i]
            l = dist[m, i]
            hxx += 2.0 * w * (1.0 - l * dy * dy / d3)
            hyy += 2.0 * w * (1.0 - l * dx * dx / d3)
            hxy += 2.0 * w * l * dx * dy / d3
        det = hxx * hyy - hxy * hxy
        if fabs(det) > 1e-12:
            sx = (-gx * hyy + gy * hxy) / det
            sy = (gx * hxy - gy * hxx) / det
        else:
            sx = -0.1 * gx / gn
            sy = -0.1 * gy / gn
        s0 = _local_stress(pos, dist, wts, m, pos[m, 0], pos[m, 1])
        t = 1.0
        accepted = False
        for h in range(30):
            nx = pos[m, 0] + t * sx
            ny = pos[m, 1] + t * sy
            if _local_stress(pos, dist, wts, m, nx, ny) <= s0:
                pos[m, 0] = nx
                pos[m, 1] = ny
                accepted = True
                break
            t *= 0.5
        if not accepted:
            return


def kk_sweep(double[:, ::1] pos, double[:, ::1] dist, double[:, ::1] wts,
             int inner_cap, double tol):
    cdef Py_ssize_t n = pos.shape[0]
    cdef Py_ssize_t m
    cdef double gx, gy, gn
    cdef double maxg = 0.0
    with nogil:
        for m in range(n):
            _relax_node(pos, dist, wts, m, inner_cap, tol)
        for m in range(n):
            _gradient(pos, dist, wts, m, &gx, &gy)
            gn = sqrt(gx * gx + gy * gy)
            if gn > maxg:
                maxg = gn
    return maxg
