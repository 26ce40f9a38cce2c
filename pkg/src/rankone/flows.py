"""Pseudo-flows, oriented flows and the operations that do not need layering.

Numbers are whatever the caller supplies: Fractions stay exact end to end,
floats are compared with a tolerance (``1e-9`` unless told otherwise).
"""

from __future__ import annotations

import heapq
import math
from collections import defaultdict, deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Optional

from .errors import NonAdjacentRay
from .graph import BNetwork, RootedNetwork

FLOAT_TOL = 1e-9


def is_exact(values: Iterable) -> bool:
    return all(isinstance(v, (int, Fraction)) for v in values)


def default_tol(values: Iterable):
    return 0 if is_exact(values) else FLOAT_TOL


class PseudoFlow:
    """Skew-symmetric valuation of vertex pairs: F(u, v) = -F(v, u).

    Only nonzero values are stored, under both orientations.
    """

    __slots__ = ("_v",)

    def __init__(self, values: Optional[Mapping] = None):
        self._v = {}
        for (u, v), x in (values or {}).items():
            self.set(u, v, x)

    @classmethod
    def from_triples(cls, triples) -> "PseudoFlow":
        pf = cls()
        for u, v, x in triples:
            pf.add(u, v, x)
        return pf

    def add(self, u, v, x):
        if u == v:
            raise ValueError("pseudo-flows live on edges, not loops")
        new = self._v.get((u, v), 0) + x
        if new == 0:
            self._v.pop((u, v), None)
            self._v.pop((v, u), None)
        else:
            self._v[(u, v)] = new
            self._v[(v, u)] = -new

    def set(self, u, v, x):
        if u == v:
            raise ValueError("pseudo-flows live on edges, not loops")
        if x == 0:
            self._v.pop((u, v), None)
            self._v.pop((v, u), None)
        else:
            self._v[(u, v)] = x
            self._v[(v, u)] = -x

    def __getitem__(self, key):
        return self._v.get(key, 0)

    def __eq__(self, other):
        return isinstance(other, PseudoFlow) and self._v == other._v

    def __neg__(self):
        return PseudoFlow({k: -x for k, x in self.positive().items()})

    def __add__(self, other):
        out = PseudoFlow(self.positive())
        for (u, v), x in other.positive().items():
            out.add(u, v, x)
        return out

    def scaled(self, c) -> "PseudoFlow":
        return PseudoFlow({k: c * x for k, x in self.positive().items()})

    def positive(self) -> dict:
        """The entries with positive value, keyed by their orientation."""
        return {k: x for k, x in self._v.items() if x > 0}

    def items(self):
        return sorted(self.positive().items())

    def support(self) -> list:
        return sorted(self.positive())

    def values(self):
        return self._v.values()

    def is_skew(self) -> bool:
        return all(self._v.get((v, u)) == -x for (u, v), x in self._v.items())

    def __repr__(self):
        return f"PseudoFlow({dict(self.items())!r})"


@dataclass
class OrientedFlow:
    """Nonnegative values on oriented edges; at most one orientation per edge is positive."""

    values: dict = field(default_factory=dict)

    def __getitem__(self, arc):
        return self.values.get(arc, 0)

    def arcs(self) -> list:
        return sorted(a for a, x in self.values.items() if x > 0)

    def copy(self) -> "OrientedFlow":
        return OrientedFlow(dict(self.values))

    def out_adjacency(self) -> dict:
        out = defaultdict(list)
        for (u, v) in self.arcs():
            out[u].append(v)
        return out

    def in_adjacency(self) -> dict:
        inn = defaultdict(list)
        for (u, v) in self.arcs():
            inn[v].append(u)
        return inn


@dataclass(frozen=True)
class OrientedNetwork:
    base: object  # BNetwork or RootedNetwork, supplies the lengths
    arcs: tuple
    out: Mapping = field(repr=False)
    inn: Mapping = field(repr=False)

    def length(self, u, v):
        return self.base.length(u, v)


@dataclass(frozen=True)
class FlowStats:
    d_plus: dict
    d_minus: dict
    d: dict
    mass: object

    def to_json(self) -> dict:
        return {"d_plus": {str(k): _num(v) for k, v in sorted(self.d_plus.items())},
                "d_minus": {str(k): _num(v) for k, v in sorted(self.d_minus.items())},
                "d": {str(k): _num(v) for k, v in sorted(self.d.items())},
                "mass": _num(self.mass)}


def _positive_entries(flow) -> dict:
    if isinstance(flow, PseudoFlow):
        return flow.positive()
    return {a: x for a, x in flow.values.items() if x > 0}


def flow_stats(net, flow) -> FlowStats:
    """Per-vertex outflow, inflow, total flow d = d+ - d-, and the mass."""
    pos = _positive_entries(flow)
    d_plus = {v: 0 for v in net.adjacency}
    d_minus = {v: 0 for v in net.adjacency}
    mass = 0
    for (u, v), x in sorted(pos.items()):
        if not net.has_edge(u, v):
            raise ValueError(f"flow on ({u}, {v}) which is not an edge of the network")
        d_plus[u] += x
        d_minus[v] += x
        mass += x * net.length(u, v)
    d = {v: d_plus[v] - d_minus[v] for v in d_plus}
    return FlowStats(d_plus, d_minus, d, mass)


def is_preserving(net, flow, tol=None) -> bool:
    """d(t) = -d(s) for a B-network; d(root) = 0 for a rooted network."""
    st = flow_stats(net, flow)
    if tol is None:
        tol = default_tol(_positive_entries(flow).values())
    if isinstance(net, RootedNetwork):
        return abs(st.d[net.root]) <= tol
    return abs(st.d[net.sink] + st.d[net.source]) <= tol


def orient(net, pf: PseudoFlow):
    """Direct each edge along its positive flow; zero-flow edges disappear."""
    values = {}
    for (u, v), x in pf.items():
        if not net.has_edge(u, v):
            raise ValueError(f"flow on ({u}, {v}) which is not an edge of the network")
        if x > 0:
            values[(u, v)] = x
    flow = OrientedFlow(values)
    return _oriented_network(net, flow), flow


def _oriented_network(net, flow: OrientedFlow) -> OrientedNetwork:
    arcs = tuple(flow.arcs())
    out = {k: tuple(v) for k, v in flow.out_adjacency().items()}
    inn = {k: tuple(v) for k, v in flow.in_adjacency().items()}
    return OrientedNetwork(net, arcs, out, inn)


def deorient(flow: OrientedFlow) -> PseudoFlow:
    return PseudoFlow({a: x for a, x in flow.values.items() if x != 0})


def _sccs(vertices, out) -> list:
    """Strongly connected components (iterative Tarjan, lowlink)."""
    index = {}
    low = {}
    on_stack = set()
    stack = []
    comps = []
    counter = 0
    for root in vertices:
        if root in index:
            continue
        work = [(root, iter(out.get(root, ())))]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack.add(root)
        while work:
            v, it = work[-1]
            advanced = False
            for w in it:
                if w not in index:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack.add(w)
                    work.append((w, iter(out.get(w, ()))))
                    advanced = True
                    break
                if w in on_stack:
                    low[v] = min(low[v], index[w])
            if advanced:
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[v])
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack.discard(w)
                    comp.append(w)
                    if w == v:
                        break
                comps.append(comp)
    return comps


def find_positive_cycle(flow: OrientedFlow) -> Optional[list]:
    """A positive cycle through the smallest edge lying on any cycle, else None.

    Every edge inside a nontrivial strongly connected component lies on a
    cycle, so the cycle returned has the smallest possible minimum.
    """
    out = flow.out_adjacency()
    vertices = sorted(set(out) | {v for vs in out.values() for v in vs})
    comp_of = {}
    for i, comp in enumerate(_sccs(vertices, out)):
        for v in comp:
            comp_of[v] = i
    best = None
    for (u, v) in flow.arcs():
        if comp_of[u] == comp_of[v]:
            key = (flow[(u, v)], u, v)
            if best is None or key < best:
                best = key
    if best is None:
        return None
    _, u, v = best
    comp = comp_of[u]
    prev = {v: None}
    queue = deque([v])
    while queue:
        w = queue.popleft()
        if w == u:
            break
        for x in out.get(w, ()):
            if x not in prev and comp_of.get(x) == comp:
                prev[x] = w
                queue.append(x)
    path = [u]
    while path[-1] != v:
        path.append(prev[path[-1]])
    path.reverse()  # v ... u
    return [u] + path[:-1]


def eliminate_positive_cycles(net, flow: OrientedFlow, log: Optional[list] = None) -> OrientedFlow:
    """Cancel positive cycles until none is left.

    Each pass subtracts the cycle minimum along one cycle, which zeroes at
    least one edge, so at most ``len(arcs)`` passes run.  Canceled cycles and
    amounts are appended to ``log`` when given.
    """
    cur = OrientedFlow({a: x for a, x in flow.values.items() if x > 0})
    while True:
        cycle = find_positive_cycle(cur)
        if cycle is None:
            return cur
        arcs = list(zip(cycle, cycle[1:] + cycle[:1]))
        m = min(cur[a] for a in arcs)
        for a in arcs:
            left = cur.values[a] - m
            if left > 0:
                cur.values[a] = left
            else:
                del cur.values[a]
        if log is not None:
            log.append((tuple(cycle), m))


def shortest_paths(adjacency: Mapping, length, source, allowed=None):
    """Dijkstra over ``adjacency[v] -> heads``; works for Fractions and floats.

    Returns ``(dist, pred)`` dictionaries over the reached vertices.
    """
    dist = {source: 0}
    pred = {source: None}
    done = set()
    heap = [(0, source)]
    while heap:
        d, u = heapq.heappop(heap)
        if u in done:
            continue
        done.add(u)
        for v in adjacency.get(u, ()):
            if allowed is not None and not allowed(u, v):
                continue
            nd = d + length(u, v)
            if v not in dist or nd < dist[v]:
                dist[v] = nd
                pred[v] = u
                heapq.heappush(heap, (nd, v))
    return dist, pred


def distance(net, targets=None, arcs=None, source=None) -> dict:
    """phi(v): infimum of path lengths from the root (or ``source``) to v.

    ``arcs`` restricts travel to the given directed edges; by default every
    edge of ``net`` is usable in both directions.  Unreachable targets map to
    ``inf``.
    """
    if source is None:
        source = net.root if isinstance(net, RootedNetwork) else net.source
    if arcs is None:
        adjacency = net.adjacency
    else:
        adjacency = defaultdict(list)
        for (u, v) in sorted(arcs):
            adjacency[u].append(v)
    dist, _ = shortest_paths(adjacency, net.length, source)
    if targets is None:
        targets = set(net.adjacency) | set(adjacency)
    return {v: dist.get(v, math.inf) for v in sorted(targets)}


def flow_from_ray(net, ray) -> PseudoFlow:
    """Unit flow along consecutive ray vertices; it escapes through the last one."""
    pf = PseudoFlow()
    for u, v in zip(ray, ray[1:]):
        if not net.has_edge(u, v):
            raise NonAdjacentRay(f"ray steps from {u} to {v}, which are not adjacent")
        pf.add(u, v, 1)
    return pf


def merge_flow(net: BNetwork, flow: PseudoFlow, root: Optional[int] = None) -> PseudoFlow:
    """Carry a B-network flow over to the merged network (sink becomes root)."""
    root = net.source if root is None else root

    def rename(v):
        return root if v in (net.source, net.sink) else v

    return PseudoFlow({(rename(u), rename(v)): x for (u, v), x in flow.items()})


def split_flow(rooted: RootedNetwork, flow: PseudoFlow) -> PseudoFlow:
    """Inverse of :func:`merge_flow`, using the recorded terminal of each root edge."""
    if rooted.sink is None:
        raise ValueError("rooted network does not remember its sink")

    def rename(v, other):
        if v != rooted.root:
            return v
        return rooted.source if rooted.terminal[other] == "source" else rooted.sink

    return PseudoFlow({(rename(u, v), rename(v, u)): x for (u, v), x in flow.items()})


def flow_to_json(flow) -> list:
    return [[str(u), str(v), _num(x)] for (u, v), x in sorted(_positive_entries(flow).items())]


def flow_from_json(rows) -> PseudoFlow:
    from .weights import parse_number

    return PseudoFlow.from_triples((_vid(u), _vid(v), parse_number(x)) for u, v, x in rows)


def _vid(v):
    try:
        return int(v)
    except (TypeError, ValueError):
        return v


def _num(x):
    if isinstance(x, Fraction):
        return x.numerator if x.denominator == 1 else str(x)
    if isinstance(x, float) and math.isinf(x):
        return "inf"
    return x
