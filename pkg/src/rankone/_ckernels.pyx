# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels: banded biorthogonality defect and CSR Dijkstra."""

import numpy as np
cimport numpy as cnp
from libc.math cimport fabs, INFINITY

cnp.import_array()


def band_defect(double[:, :] f, double[:, :] fstar, Py_ssize_t bandwidth, Py_ssize_t m):
    cdef Py_ssize_t n, j, k, lo, hi, jlo, jhi, size = f.shape[1]
    cdef double s, worst = 0.0
    for n in range(m):
        jlo = n - 2 * bandwidth if n >= 2 * bandwidth else 0
        jhi = n + 2 * bandwidth + 1 if n + 2 * bandwidth + 1 < m else m
        lo = n - bandwidth if n >= bandwidth else 0
        hi = n + bandwidth + 1 if n + bandwidth + 1 < size else size
        for j in range(jlo, jhi):
            s = 0.0
            for k in range(lo, hi):
                s += f[n, k] * fstar[j, k]
            if n == j:
                s -= 1.0
            if fabs(s) > worst:
                worst = fabs(s)
    return worst


cdef inline void _sift_up(double[:] hk, cnp.int64_t[:] hv, Py_ssize_t i) noexcept nogil:
    cdef Py_ssize_t parent
    cdef double k = hk[i]
    cdef cnp.int64_t v = hv[i]
    while i > 0:
        parent = (i - 1) >> 1
        if hk[parent] < k or (hk[parent] == k and hv[parent] <= v):
            break
        hk[i] = hk[parent]
        hv[i] = hv[parent]
        i = parent
    hk[i] = k
    hv[i] = v


cdef inline void _sift_down(double[:] hk, cnp.int64_t[:] hv, Py_ssize_t size) noexcept nogil:
    cdef Py_ssize_t i = 0, child
    cdef double k = hk[0]
    cdef cnp.int64_t v = hv[0]
    while True:
        child = 2 * i + 1
        if child >= size:
            break
        if child + 1 < size and (hk[child + 1] < hk[child] or
                                 (hk[child + 1] == hk[child] and hv[child + 1] < hv[child])):
            child += 1
        if k < hk[child] or (k == hk[child] and v <= hv[child]):
            break
        hk[i] = hk[child]
        hv[i] = hv[child]
        i = child
    hk[i] = k
    hv[i] = v


def dijkstra(indptr, indices, weights, Py_ssize_t source):
    cdef cnp.int64_t[:] ip = np.ascontiguousarray(indptr, dtype=np.int64)
    cdef cnp.int64_t[:] ix = np.ascontiguousarray(indices, dtype=np.int64)
    cdef double[:] w = np.ascontiguousarray(weights, dtype=np.float64)
    cdef Py_ssize_t n = ip.shape[0] - 1
    dist_arr = np.full(n, np.inf)
    pred_arr = np.full(n, -1, dtype=np.int64)
    cdef double[:] dist = dist_arr
    cdef cnp.int64_t[:] pred = pred_arr
    cdef cnp.uint8_t[:] done = np.zeros(n, dtype=np.uint8)
    cap = max(1, ix.shape[0] + 1)
    cdef double[:] hk = np.empty(cap)
    cdef cnp.int64_t[:] hv = np.empty(cap, dtype=np.int64)
    cdef Py_ssize_t size = 0, e
    cdef cnp.int64_t u, v
    cdef double d, nd
    with nogil:
        dist[source] = 0.0
        hk[0] = 0.0
        hv[0] = source
        size = 1
        while size > 0:
            d = hk[0]
            u = hv[0]
            size -= 1
            if size > 0:
                hk[0] = hk[size]
                hv[0] = hv[size]
                _sift_down(hk, hv, size)
            if done[u]:
                continue
            done[u] = 1
            for e in range(ip[u], ip[u + 1]):
                v = ix[e]
                nd = d + w[e]
                if nd < dist[v] or (nd == dist[v] and not done[v] and u < pred[v]):
                    dist[v] = nd
                    pred[v] = u
                    hk[size] = nd
                    hv[size] = v
                    _sift_up(hk, hv, size)
                    size += 1
    return dist_arr, pred_arr
