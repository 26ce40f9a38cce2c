"""Pure-Python/numpy versions of the hot kernels.

Same signatures and results as the compiled ``_ckernels`` module; used when
the extension is not built or ``RANKONE_PURE_PYTHON`` is set.
"""

import heapq
import math

import numpy as np


def band_defect(f, fstar, bandwidth, m):
    """max |(F F*^T)[n, j] - delta| over 0 <= n, j < m (dense float arrays)."""
    g = np.asarray(f)[:m] @ np.asarray(fstar)[:m].T
    g[np.diag_indices(m)] -= 1.0
    return float(np.abs(g).max()) if m else 0.0


def dijkstra(indptr, indices, weights, source):
    """Single-source shortest paths on a CSR graph with nonnegative weights.

    Returns ``(dist, pred)``; unreachable vertices get ``inf`` and ``-1``.
    Ties between equal tentative distances go to the lower vertex id.
    """
    n = len(indptr) - 1
    dist = [math.inf] * n
    pred = [-1] * n
    done = [False] * n
    dist[source] = 0.0
    heap = [(0.0, source)]
    while heap:
        d, u = heapq.heappop(heap)
        if done[u]:
            continue
        done[u] = True
        for e in range(indptr[u], indptr[u + 1]):
            v = indices[e]
            nd = d + weights[e]
            if nd < dist[v] or (nd == dist[v] and not done[v] and u < pred[v]):
                dist[v] = nd
                pred[v] = u
                heapq.heappush(heap, (nd, v))
    return np.array(dist, dtype=float), np.array(pred, dtype=np.int64)
