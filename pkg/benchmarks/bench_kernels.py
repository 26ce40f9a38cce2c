"""Compiled vs pure-Python kernels on the same inputs.

    python3 benchmarks/bench_kernels.py [--n 20000] [--repeat 5]

Reports best-of-``repeat`` wall times for the frontier Dijkstra (a long
Larson-Wogen path plus a random sparse graph) and the banded
biorthogonality defect, and checks both backends agree.
"""

from __future__ import annotations

import argparse
import random
import time

import numpy as np

from rankone import _pykernels
from rankone.system import _dense, random_b_class

try:
    from rankone import _ckernels
except ImportError:
    _ckernels = None


def path_csr(n: int):
    indptr, indices, weights = [0], [], []
    for v in range(n):
        for u in (v - 1, v + 1):
            if 0 <= u < n:
                indices.append(u)
                weights.append(1.0 / (max(u, v) + 1) ** 2)
        indptr.append(len(indices))
    return np.array(indptr, dtype=np.int64), np.array(indices, dtype=np.int64), np.array(weights)


def random_csr(n: int, degree: int, rng: random.Random):
    adj = [[] for _ in range(n)]
    for v in range(1, n):
        u = rng.randrange(v)  # spanning tree keeps everything reachable
        w = rng.uniform(0.1, 2.0)
        adj[u].append((v, w))
        adj[v].append((u, w))
    for _ in range(n * (degree - 1) // 2):
        u, v = rng.randrange(n), rng.randrange(n)
        if u != v:
            w = rng.uniform(0.1, 2.0)
            adj[u].append((v, w))
            adj[v].append((u, w))
    indptr, indices, weights = [0], [], []
    for nbrs in adj:
        for v, w in sorted(nbrs):
            indices.append(v)
            weights.append(w)
        indptr.append(len(indices))
    return np.array(indptr, dtype=np.int64), np.array(indices, dtype=np.int64), np.array(weights)


def best_time(fn, repeat: int) -> float:
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=20000, help="vertices in the Dijkstra inputs")
    ap.add_argument("--n-max", type=int, default=400, help="system size for the band defect")
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)
    if _ckernels is None:
        print("compiled kernels not built; only the pure-Python backend is available")
        return 1
    rng = random.Random(args.seed)
    sys_ = random_b_class(rng, args.n_max, 5)
    f, fs = _dense(sys_)
    m = sys_.n_max - sys_.bandwidth
    cases = [
        ("dijkstra/path", lambda mod, a=path_csr(args.n): mod.dijkstra(*a, 0)),
        ("dijkstra/random", lambda mod, a=random_csr(args.n, 4, rng): mod.dijkstra(*a, 0)),
        ("band_defect", lambda mod: mod.band_defect(f, fs, sys_.bandwidth, m)),
    ]
    print(f"{'kernel':<18}{'python [s]':>12}{'cython [s]':>12}{'speedup':>10}")
    for name, call in cases:
        ref, got = call(_pykernels), call(_ckernels)
        if isinstance(ref, tuple):
            assert np.allclose(ref[0], got[0]) and np.array_equal(ref[1], got[1]), name
        else:
            assert abs(ref - got) <= 1e-12, name
        tp = best_time(lambda: call(_pykernels), args.repeat)
        tc = best_time(lambda: call(_ckernels), args.repeat)
        print(f"{name:<18}{tp:>12.4f}{tc:>12.4f}{tp / tc:>10.1f}x")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
