"""Bipartite graph B(F), its B-network, and the rooted (merged) network.

Vertex ids are basis indices.  The source is ``0`` and the sink is
``n_max + 1``; after merging, the root takes id ``0``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Mapping, Optional

from .errors import DisconnectedSourceSink, SpecParseError
from .system import LEFT, BandSystem
from .weights import WeightSequenceSpec, parse_number

SOURCE = 0
ROOT = 0


def _abs(x):
    return abs(x)


@dataclass(frozen=True)
class BipartiteGraph:
    left: frozenset
    right: frozenset
    lhat: Mapping  # (u, v) -> signed weight, stored for both orientations
    adjacency: Mapping = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        adj = {v: [] for v in self.left | self.right}
        for (u, v) in self.lhat:
            adj[u].append(v)
        object.__setattr__(self, "adjacency", {v: tuple(sorted(ns)) for v, ns in adj.items()})

    @property
    def vertices(self) -> list:
        return sorted(self.left | self.right)

    def edges(self) -> list:
        """Edges as (left, right) pairs, sorted."""
        return sorted((u, v) for (u, v) in self.lhat if u in self.left)

    def neighbors(self, v) -> tuple:
        return self.adjacency.get(v, ())

    def degree(self, v) -> int:
        return len(self.neighbors(v))

    def length(self, u, v):
        return _abs(self.lhat[(u, v)])

    def to_json(self) -> dict:
        return {
            "left": sorted(self.left),
            "right": sorted(self.right),
            "edges": [[l, r, _num(self.lhat[(l, r)])] for l, r in self.edges()],
        }


def graph_from_json(obj: dict) -> BipartiteGraph:
    try:
        left = frozenset(int(v) for v in obj["left"])
        right = frozenset(int(v) for v in obj["right"])
        lhat = {}
        for l, r, w in obj["edges"]:
            l, r, w = int(l), int(r), parse_number(w)
            if l not in left or r not in right:
                raise SpecParseError(f"edge ({l}, {r}) must join a left and a right vertex")
            if w == 0:
                raise SpecParseError(f"edge ({l}, {r}) has zero weight")
            lhat[(l, r)] = w
            lhat[(r, l)] = -w
    except (KeyError, TypeError, ValueError) as exc:
        raise SpecParseError(f"malformed graph spec: {exc}") from exc
    if left & right:
        raise SpecParseError("left and right vertex sets overlap")
    return BipartiteGraph(left, right, lhat)


def build_bipartite(sys: BandSystem) -> BipartiteGraph:
    """Left vertices where f*_n = e_n, right where f_n = e_n.

    Edge (l, r) whenever <f_l, e_r> != 0, weighted by its reciprocal.
    """
    left = frozenset(sys.left)
    right = frozenset(sys.right)
    lhat = {}
    for l in sorted(left):
        for r, v in sys.row(l).items():
            if r == l or v == 0 or r not in right:
                continue
            w = Fraction(1) / v if isinstance(v, (int, Fraction)) else 1.0 / v
            lhat[(l, r)] = w
            lhat[(r, l)] = -w
    return BipartiteGraph(left, right, lhat)


@dataclass(frozen=True)
class BNetwork:
    """B(F) plus a source tied to every left vertex and a sink tied to every right one."""

    graph: BipartiteGraph
    source: int
    sink: int
    adjacency: Mapping = field(repr=False)
    lengths: Mapping = field(repr=False)  # (u, v) -> positive length, both orientations

    @property
    def vertices(self) -> list:
        return sorted(self.adjacency)

    def neighbors(self, v) -> tuple:
        return self.adjacency.get(v, ())

    def length(self, u, v):
        return self.lengths[(u, v)]

    def has_edge(self, u, v) -> bool:
        return (u, v) in self.lengths

    def edges(self) -> list:
        """Each undirected edge once, oriented source->left->right->sink."""
        s, t, g = self.source, self.sink, self.graph
        out = [(s, l) for l in sorted(g.left)]
        out += g.edges()
        out += [(r, t) for r in sorted(g.right)]
        return out

    def to_json(self) -> dict:
        out = self.graph.to_json()
        out["source"] = self.source
        out["sink"] = self.sink
        out["terminal_edges"] = [[u, v, _num(self.length(u, v))]
                                 for u, v in self.edges() if self.source in (u, v) or self.sink in (u, v)]
        return out


def build_network(g: BipartiteGraph, sink: Optional[int] = None) -> BNetwork:
    if not g.left or not g.right:
        raise DisconnectedSourceSink("both parts of the bipartite graph must be nonempty")
    if not g.lhat:
        raise DisconnectedSourceSink("no edge joins the two parts, so no source-sink path exists")
    if sink is None:
        sink = max(g.left | g.right) + 1
    if sink in g.left or sink in g.right or sink == SOURCE:
        raise ValueError(f"sink id {sink} collides with a vertex")
    adj = {SOURCE: [], sink: []}
    lengths = {}
    for v in g.vertices:
        adj[v] = list(g.neighbors(v))
    for (u, v) in g.lhat:
        lengths[(u, v)] = g.length(u, v)
    for l in sorted(g.left):
        adj[SOURCE].append(l)
        adj[l].append(SOURCE)
        lengths[(SOURCE, l)] = lengths[(l, SOURCE)] = 1
    for r in sorted(g.right):
        adj[sink].append(r)
        adj[r].append(sink)
        lengths[(sink, r)] = lengths[(r, sink)] = 1
    return BNetwork(g, SOURCE, sink, {v: tuple(sorted(ns)) for v, ns in adj.items()}, lengths)


def network_for(sys: BandSystem) -> BNetwork:
    return build_network(build_bipartite(sys), sink=sys.n_max + 1)


@dataclass(frozen=True)
class RootedNetwork:
    """Network with source and sink identified as a single root.

    ``terminal`` remembers, for every neighbour of the root, whether the edge
    used to end at the source or at the sink.  ``tail`` optionally describes
    the untruncated graph for lazy expansion past ``n_max``.
    """

    root: int
    adjacency: Mapping = field(repr=False)
    lengths: Mapping = field(repr=False)
    terminal: Mapping = field(default_factory=dict, repr=False)
    source: int = SOURCE
    sink: Optional[int] = None
    tail: Optional["LazyGraph"] = field(default=None, repr=False, compare=False)

    @property
    def vertices(self) -> list:
        return sorted(self.adjacency)

    def neighbors(self, v) -> tuple:
        return self.adjacency.get(v, ())

    def length(self, u, v):
        return self.lengths[(u, v)]

    def has_edge(self, u, v) -> bool:
        return (u, v) in self.lengths

    def edges(self) -> list:
        return sorted((u, v) for (u, v) in self.lengths if u < v)


def merge_source_sink(net: BNetwork, tail: Optional["LazyGraph"] = None) -> RootedNetwork:
    root = net.source
    adj = {v: [] for v in net.adjacency if v != net.sink}
    lengths = {}
    terminal = {}

    def rename(v):
        return root if v == net.sink else v

    for (u, v), w in net.lengths.items():
        a, b = rename(u), rename(v)
        lengths[(a, b)] = w
        if a == root:
            terminal[b] = "source" if u == net.source else "sink"
    for (a, b) in lengths:
        adj[a].append(b)
    return RootedNetwork(root, {v: tuple(sorted(ns)) for v, ns in adj.items()}, lengths,
                         terminal, net.source, net.sink, tail)


def rooted_from_edges(edges, root: int = ROOT) -> RootedNetwork:
    """Rooted network from ``(u, v, length)`` triples (test and oracle helper)."""
    adj = {root: []}
    lengths = {}
    for u, v, w in edges:
        if u == v:
            raise ValueError("loops are not allowed")
        if (u, v) in lengths:
            raise ValueError(f"multiple edge ({u}, {v})")
        if not w > 0:
            raise ValueError("lengths must be positive")
        lengths[(u, v)] = lengths[(v, u)] = w
        adj.setdefault(u, []).append(v)
        adj.setdefault(v, []).append(u)
    return RootedNetwork(root, {v: tuple(sorted(ns)) for v, ns in adj.items()}, lengths)


class LazyGraph:
    """Locally finite weighted graph whose neighbourhoods are produced on demand.

    ``neighbors_fn(v)`` must be a pure function returning ``(u, length)``
    pairs; results are memoised, which is race-free because recomputation
    yields the same answer.
    """

    def __init__(self, neighbors_fn: Callable, start, finite: bool = False):
        self._fn = neighbors_fn
        self.start = start
        self.finite = finite
        self._cache = {}

    def neighbors(self, v) -> tuple:
        try:
            return self._cache[v]
        except KeyError:
            ns = tuple(sorted(self._fn(v)))
            self._cache[v] = ns
            return ns

    @classmethod
    def from_graph(cls, g: BipartiteGraph, start=None) -> "LazyGraph":
        if start is None:
            start = min(g.left | g.right)
        return cls(lambda v: [(u, g.length(v, u)) for u in g.neighbors(v)], start, finite=True)


def larson_wogen_graph(weights: WeightSequenceSpec, limit: Optional[int] = None) -> LazyGraph:
    """The ray v_1 - v_2 - v_3 - ... with edge (v_{k-1}, v_k) of length |1/a_k|.

    ``limit`` truncates the ray at v_limit; ``None`` keeps it infinite.
    """

    def nbrs(k):
        out = []
        if k >= 2:
            out.append((k - 1, weights.length(k)))
        if limit is None or k + 1 <= limit:
            out.append((k + 1, weights.length(k + 1)))
        return out

    return LazyGraph(nbrs, start=1, finite=limit is not None)


def _num(x):
    if isinstance(x, Fraction):
        return x.numerator if x.denominator == 1 else str(x)
    return x
