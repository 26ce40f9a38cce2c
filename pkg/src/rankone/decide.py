"""Rank-one density verdicts: every infinite ray must have a divergent length series.

Two routes:

* analytic -- the family's ray tails follow a catalog rule (constant, p-series,
  geometric, asserted l1) and the series test gives an exact answer;
* numeric -- the frontier distance profile m_n = min over BFS layer n of the
  root distance.  m_n > threshold certifies divergence up to that threshold;
  a profile that stops moving, with a path reaching the last layer, is
  reported as NotDense at the observed bound; anything else is Inconclusive.

A finite-length ray exists iff the profile is bounded (the graph is locally
finite), which is what makes the numeric route meaningful at all.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import kernels
from .bridge import annihilation_check, flow_to_operator
from .errors import CertificateFailure, NonAdjacentRay, UnsupportedTail, WitnessExhausted
from .flows import flow_from_ray, flow_stats, is_preserving
from .graph import LazyGraph, build_bipartite, larson_wogen_graph, network_for
from .layers import RayWitness, extract_ray_full, witness_from_path
from .system import LEFT, BandSystem, make_larson_wogen
from .weights import WeightSequenceSpec

DEFAULT_DEPTH = 10_000
DEFAULT_THRESHOLD = 1_000.0
DEFAULT_WITNESS_DEPTH = 50


class Kind(str, enum.Enum):
    DENSE = "Dense"
    NOT_DENSE = "NotDense"
    INCONCLUSIVE = "Inconclusive"


EXIT_CODES = {Kind.DENSE: 0, Kind.NOT_DENSE: 1, Kind.INCONCLUSIVE: 2}


@dataclass(frozen=True)
class LarsonWogenFamily:
    weights: WeightSequenceSpec

    name = "larson_wogen"

    def graph(self) -> LazyGraph:
        return larson_wogen_graph(self.weights)

    def float_graph(self) -> LazyGraph:
        w = self.weights

        def nbrs(k):
            out = [(k + 1, w.float_length(k + 1))]
            if k >= 2:
                out.append((k - 1, w.float_length(k)))
            return out

        return LazyGraph(nbrs, start=1)

    def system(self, n_max: int) -> BandSystem:
        return make_larson_wogen(self.weights, n_max)

    def catalog_tail(self):
        return self.weights.tail


@dataclass(frozen=True)
class ExplicitFamily:
    """A fixed finite system; its graph has no infinite rays to speak of."""

    sys: BandSystem

    name = "explicit"

    def graph(self) -> LazyGraph:
        return LazyGraph.from_graph(build_bipartite(self.sys))

    float_graph = graph

    def system(self, n_max: int) -> BandSystem:
        if n_max > self.sys.n_max:
            raise WitnessExhausted(
                f"explicit system stops at n_max = {self.sys.n_max}", depth=self.sys.n_max)
        return self.sys

    def catalog_tail(self):
        raise UnsupportedTail("explicit systems carry no tail rule")


@dataclass(frozen=True)
class Profile:
    """m_n for n = 1..len, with the vertex attaining each minimum."""

    values: tuple
    argmins: tuple
    start: object
    pred: dict = field(repr=False, default_factory=dict)

    def __len__(self):
        return len(self.values)

    def __getitem__(self, i):
        return self.values[i]

    def __iter__(self):
        return iter(self.values)

    def path_to(self, v) -> list:
        path = [v]
        while path[-1] != self.start:
            path.append(self.pred[path[-1]])
        return path[::-1]


def frontier_distance_profile(graph: LazyGraph, max_depth: int, start=None) -> Profile:
    """Minimum root distance over each BFS layer 1..max_depth.

    Distances are taken inside the explored ball of radius ``max_depth``;
    the profile is shorter than ``max_depth`` when the graph runs out.
    """
    start = graph.start if start is None else start
    index = {start: 0}
    order = [start]
    hop = [0]
    frontier = [start]
    for depth in range(1, max_depth + 1):
        nxt = []
        for u in frontier:
            for v, _ in graph.neighbors(u):
                if v not in index:
                    index[v] = len(order)
                    order.append(v)
                    hop.append(depth)
                    nxt.append(v)
        if not nxt:
            break
        frontier = nxt
    indptr = [0]
    indices, weights = [], []
    for u in order:
        if hop[index[u]] < max_depth:
            for v, w in graph.neighbors(u):
                if v in index:
                    indices.append(index[v])
                    weights.append(float(w))
        else:
            # edges out of the outermost layer stay inside the ball only
            for v, w in graph.neighbors(u):
                if v in index and hop[index[v]] <= max_depth:
                    indices.append(index[v])
                    weights.append(float(w))
        indptr.append(len(indices))
    dist, pred = kernels.dijkstra(np.asarray(indptr, dtype=np.int64),
                                  np.asarray(indices, dtype=np.int64),
                                  np.asarray(weights, dtype=float), 0)
    best = {}
    for i, v in enumerate(order):
        h = hop[i]
        if h == 0:
            continue
        key = (dist[i], v)
        if h not in best or key < best[h]:
            best[h] = key
    depth = max(best) if best else 0
    values = tuple(float(best[h][0]) for h in range(1, depth + 1))
    argmins = tuple(best[h][1] for h in range(1, depth + 1))
    pred_map = {order[i]: order[p] for i, p in enumerate(pred) if p >= 0}
    return Profile(values, argmins, start, pred_map)


@dataclass(frozen=True)
class Verdict:
    kind: Kind
    ray: Optional[RayWitness]
    profile: tuple
    depth: int
    threshold: float
    certificate: dict = field(default_factory=dict)

    @property
    def exit_code(self) -> int:
        return EXIT_CODES[self.kind]

    def to_json(self, profile_points: int = 20) -> dict:
        prof = list(self.profile)
        if len(prof) > profile_points:
            step = max(1, len(prof) // profile_points)
            keep = sorted(set(range(0, len(prof), step)) | {len(prof) - 1})
            sample = [[i + 1, prof[i]] for i in keep]
        else:
            sample = [[i + 1, x] for i, x in enumerate(prof)]
        return {
            "verdict": self.kind.value,
            "depth": self.depth,
            "threshold": self.threshold,
            "certificate": self.certificate,
            "profile": sample,
            "witness": self.ray.to_json() if self.ray else None,
        }


def decide(family, depth: int = DEFAULT_DEPTH, threshold: float = DEFAULT_THRESHOLD,
           mode: str = "auto", witness_depth: int = DEFAULT_WITNESS_DEPTH,
           stabilization: float = 1e-9, start=None) -> Verdict:
    """Decide rank-one density for ``family``.

    ``mode`` is ``"analytic"`` (catalog only, raising UnsupportedTail),
    ``"numeric"`` (profile only) or ``"auto"`` (catalog when available).
    """
    if depth < 2:
        raise ValueError("depth must be at least 2")
    if not threshold > 0:
        raise ValueError("threshold must be positive")
    if mode not in ("auto", "analytic", "numeric"):
        raise ValueError(f"unknown mode {mode!r}")
    tail = None
    if mode != "numeric":
        try:
            tail = family.catalog_tail()
        except UnsupportedTail:
            if mode == "analytic":
                raise
    profile = frontier_distance_profile(family.float_graph(), depth, start)
    crossed = next((i + 1 for i, m in enumerate(profile) if m > threshold), None)
    if tail is not None:
        return _analytic(family, tail, profile, depth, threshold, witness_depth, crossed)
    return _numeric(family, profile, depth, threshold, stabilization, crossed)


def _analytic(family, tail, profile, depth, threshold, witness_depth, crossed) -> Verdict:
    cert = {"method": "series", "rule": tail.rule()}
    if crossed is not None:
        cert["threshold_crossed_at"] = crossed
    if not tail.converges():
        return Verdict(Kind.DENSE, None, profile.values, depth, threshold, cert)
    total = family.weights.series_total(start=2)
    cert["series_total"] = total
    g = family.graph()
    ray = list(range(1, witness_depth + 2))
    witness = witness_from_path(lambda u, v: _edge_length(g, u, v), ray, total, witness_depth)
    return Verdict(Kind.NOT_DENSE, witness, profile.values, depth, threshold, cert)


def _edge_length(g: LazyGraph, u, v):
    for w, length in g.neighbors(u):
        if w == v:
            return length
    raise NonAdjacentRay(f"{u} and {v} are not adjacent")


def _numeric(family, profile, depth, threshold, stabilization, crossed) -> Verdict:
    cert = {"method": "profile"}
    if crossed is not None:
        cert["threshold_crossed_at"] = crossed
        return Verdict(Kind.DENSE, None, profile.values, depth, threshold, cert)
    if len(profile) < depth:
        cert["note"] = f"graph exhausted after {len(profile)} layers; no ray reaches depth {depth}"
        return Verdict(Kind.INCONCLUSIVE, None, profile.values, depth, threshold, cert)
    last = profile[-1]
    drift = last - profile[len(profile) // 2 - 1]
    cert["drift"] = drift
    if drift <= stabilization * max(1.0, last):
        g = family.float_graph()
        path = profile.path_to(profile.argmins[-1])
        witness = witness_from_path(lambda u, v: _edge_length(g, u, v), path, last, depth)
        cert["bound"] = last
        return Verdict(Kind.NOT_DENSE, witness, profile.values, depth, threshold, cert)
    return Verdict(Kind.INCONCLUSIVE, None, profile.values, depth, threshold, cert)


@dataclass(frozen=True)
class CrossValidation:
    trace: object
    defect: object
    mass: object
    l1_norm: object
    d_source: object
    d_sink: object
    n_max: int
    ray: tuple
    extracted: RayWitness

    def to_json(self) -> dict:
        def num(x):
            return float(x)

        return {
            "trace": num(self.trace),
            "defect": num(self.defect),
            "mass": num(self.mass),
            "l1_norm": num(self.l1_norm),
            "d_source": num(self.d_source),
            "d_sink": num(self.d_sink),
            "n_max": self.n_max,
            "ray": list(self.ray),
            "extracted_ray": self.extracted.to_json(),
        }


def cross_validate(family, verdict: Verdict, depth: Optional[int] = None,
                   tol: float = 1e-10) -> CrossValidation:
    """End-to-end certificate that a NotDense verdict is genuine.

    The witness ray, cut at the truncation frontier, becomes a unit escaping
    flow; its operator must annihilate every interior row with trace one, and
    re-extracting a ray from that flow must succeed.
    """
    if verdict.kind is not Kind.NOT_DENSE or verdict.ray is None:
        raise ValueError("cross-validation needs a NotDense verdict with a ray witness")
    ray = list(verdict.ray.vertices)
    n_max = max(ray) if depth is None else depth
    sys = family.system(n_max) if not isinstance(family, BandSystem) else family
    ray = _cut(ray, sys)
    net = network_for(sys)
    start = net.source if sys.side_of(ray[0]) is LEFT else net.sink
    try:
        flow = flow_from_ray(net, [start] + ray)
    except NonAdjacentRay as exc:
        raise CertificateFailure(f"witness ray is broken: {exc}") from exc
    st = flow_stats(net, flow)
    for n in sys.interior:
        if st.d[n] != 0:
            raise CertificateFailure(f"ray flow is not balanced at interior vertex {n}")
    T = flow_to_operator(net, flow)
    defect = annihilation_check(sys, T)
    trace = T.trace
    d_sum = st.d[net.source] + st.d[net.sink]
    if abs(trace - d_sum) > tol:
        raise CertificateFailure(f"trace {trace} differs from d(s) + d(t) = {d_sum}")
    if abs(trace - 1) > tol:
        raise CertificateFailure(f"trace {trace} instead of 1")
    if defect > tol:
        raise CertificateFailure(f"annihilation defect {defect} above {tol}")
    if abs(T.l1_norm - st.mass) > tol * max(1, abs(st.mass)):
        raise CertificateFailure("operator l1 norm differs from the flow mass")
    if is_preserving(net, flow):
        raise CertificateFailure("the ray flow is preserved, so it certifies nothing")
    extraction = extract_ray_full(net, flow, list(range(1, len(ray) + 1)))
    w = extraction.witness
    if any(x > w.bound + tol for x in w.partial_lengths):
        raise CertificateFailure("re-extracted ray exceeds its length bound")
    return CrossValidation(trace, defect, st.mass, T.l1_norm, st.d[net.source], st.d[net.sink],
                           sys.n_max, tuple(ray), w)


def _cut(ray, sys: BandSystem) -> list:
    out = []
    for v in ray:
        if v > sys.n_max:
            break
        out.append(v)
    interior = set(sys.interior)
    if not out or out[-1] in interior:
        raise CertificateFailure(
            f"the witness ray stops at vertex {out[-1] if out else None}, inside the "
            f"interior of the n_max = {sys.n_max} truncation; it must reach the frontier")
    return out


def series_partial_sums(weights: WeightSequenceSpec, depth: int) -> list:
    """Independent oracle: fsum of |1/a_k| for k = 2..j+1, j = 0..depth."""
    out = [0.0]
    terms = []
    for k in range(2, depth + 2):
        terms.append(abs(1.0 / float(weights.weight(k))))
        out.append(math.fsum(terms))
    return out
