import random

import numpy as np
import pytest
from hypothesis import given, strategies as st

from rankone import _pykernels, kernels
from rankone.system import _dense, random_b_class

ck = pytest.importorskip("rankone._ckernels")


def _csr(n, arcs):
    adj = [[] for _ in range(n)]
    for u, v, w in arcs:
        adj[u].append((v, w))
    indptr, indices, weights = [0], [], []
    for nbrs in adj:
        for v, w in sorted(nbrs):
            indices.append(v)
            weights.append(w)
        indptr.append(len(indices))
    return (np.array(indptr, dtype=np.int64), np.array(indices, dtype=np.int64),
            np.array(weights, dtype=float))


def test_backend_selected():
    assert kernels.BACKEND == "cython"


def test_dijkstra_small():
    g = _csr(4, [(0, 1, 1.0), (0, 2, 4.0), (1, 2, 1.0), (2, 3, 0.5)])
    for mod in (_pykernels, ck):
        dist, pred = mod.dijkstra(*g, 0)
        assert list(dist) == [0.0, 1.0, 2.0, 2.5]
        assert list(pred) == [-1, 0, 1, 2]


def test_dijkstra_unreachable_and_ties():
    g = _csr(4, [(0, 2, 1.0), (0, 1, 1.0), (1, 3, 1.0), (2, 3, 1.0)])
    for mod in (_pykernels, ck):
        dist, pred = mod.dijkstra(*g, 0)
        assert pred[3] == 1  # equal routes: lower id predecessor
    g = _csr(3, [(0, 1, 1.0)])
    for mod in (_pykernels, ck):
        dist, pred = mod.dijkstra(*g, 0)
        assert np.isinf(dist[2]) and pred[2] == -1


@given(st.integers(0, 2**32 - 1), st.integers(2, 60))
def test_dijkstra_parity(seed, n):
    rng = random.Random(seed)
    arcs = [(rng.randrange(n), rng.randrange(n), rng.uniform(0.1, 3)) for _ in range(3 * n)]
    g = _csr(n, [a for a in arcs if a[0] != a[1]])
    d1, p1 = _pykernels.dijkstra(*g, 0)
    d2, p2 = ck.dijkstra(*g, 0)
    assert np.array_equal(d1, d2)
    assert np.array_equal(p1, p2)


@given(st.integers(0, 2**32 - 1), st.integers(1, 5))
def test_band_defect_parity(seed, b):
    sys = random_b_class(random.Random(seed), 40, b)
    f, fs = _dense(sys)
    f[3, 3] += 0.25  # make the defect nonzero
    m = sys.n_max - b
    assert _pykernels.band_defect(f, fs, b, m) == pytest.approx(ck.band_defect(f, fs, b, m), abs=1e-15)
    assert ck.band_defect(f, fs, b, m) >= 0.25 - 1e-12


def test_pure_python_switch():
    import os
    import subprocess
    import sys

    env = dict(os.environ, RANKONE_PURE_PYTHON="1")
    out = subprocess.run([sys.executable, "-c", "import rankone.kernels as k; print(k.BACKEND)"],
                         capture_output=True, text=True, env=env, check=True)
    assert out.stdout.strip() == "python"
