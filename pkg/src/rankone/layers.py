"""Layered preflow construction and finite-length ray extraction.

Given a rooted network and a positive reference flow F that leaves the root
(d(root) > 0), has no positive cycles and no zero edges, we grow finite
subgraphs G_1 in G_2 in ... by breadth-first layers L_n and maintain a
preflow Phi_n on the edges of G_n such that

* P1  Phi_{n+1} >= Phi_n on the edges of G_n,
* P2  Phi_n <= F,
* P3  the root emits exactly one unit,
* P4  every non-root vertex of G_{n-1} is balanced,
* P5  every vertex of L_n only receives flow.

Each step first spreads the inflow of L_{n-1} over all its out-edges in
proportion to F, then relaxes the vertices that back edges made active by
pushing along augmenting paths (positive residual F - Phi) into L_n.

At truncation scale the reference flow exits through frontier vertices that
are not balanced; layering stops before such a vertex would need spreading.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Optional

from .errors import (FrontierEmpty, FrontierReached, RelaxationStuck,
                     WitnessExhausted)
from .flows import (FLOAT_TOL, OrientedFlow, PseudoFlow, default_tol, deorient,
                    eliminate_positive_cycles, find_positive_cycle, is_exact,
                    flow_stats, merge_flow, orient, shortest_paths)
from .graph import BNetwork, RootedNetwork, merge_source_sink


@dataclass(frozen=True)
class Push:
    vertex: object
    path: tuple
    amount: object
    saturated: bool


@dataclass(frozen=True)
class LayeredState:
    n: int
    root: object
    layers: tuple  # layers[k] is L_k as a sorted tuple; layers[0] = (root,)
    forward: tuple  # forward[k] for k >= 1; forward[1] is E_1
    back: tuple
    edges: frozenset  # E_n
    preflow: Mapping = field(repr=False)  # Phi_n
    reference: OrientedFlow = field(repr=False)  # scaled F
    net: object = field(repr=False)
    scale: object = 1
    tol: object = 0
    pushes: tuple = ()

    @property
    def vertices(self) -> frozenset:
        return frozenset(v for layer in self.layers for v in layer)

    @property
    def frontier(self) -> tuple:
        return self.layers[-1]

    def length(self, u, v):
        return self.net.length(u, v)

    def degrees(self):
        """(d_plus, d_minus) of the preflow over the vertices of G_n."""
        d_plus = {v: 0 for v in self.vertices}
        d_minus = {v: 0 for v in self.vertices}
        for (u, v) in self.edges:
            x = self.preflow.get((u, v), 0)
            d_plus[u] += x
            d_minus[v] += x
        return d_plus, d_minus

    def distances(self) -> dict:
        """phi_n: root distances inside G_n."""
        adj = {}
        for (u, v) in sorted(self.edges):
            adj.setdefault(u, []).append(v)
        dist, _ = shortest_paths(adj, self.net.length, self.root)
        return {v: dist.get(v, math.inf) for v in self.vertices}

    def reference_mass(self):
        return sum((x * self.net.length(u, v) for (u, v), x in sorted(self.reference.values.items())), 0)


def prepare_reference(net: RootedNetwork, flow, root_scale=1):
    """Orient, point away from the root, cancel positive cycles and rescale.

    Returns ``(reference, factor, rho)`` where ``reference`` is the scaled
    oriented flow, ``factor`` the applied multiplier (negative when the flow
    had to be reversed) and ``rho`` the original d(root).
    """
    if isinstance(flow, PseudoFlow):
        _, flow = orient(net, flow)
    st = flow_stats(net, flow)
    rho = st.d[net.root]
    tol = default_tol(flow.values.values())
    if abs(rho) <= tol:
        raise WitnessExhausted("the flow is preserved at the root; nothing escapes", depth=0)
    if rho < 0:
        flow = OrientedFlow({(v, u): x for (u, v), x in flow.values.items()})
    flow = eliminate_positive_cycles(net, flow)
    factor = _div(root_scale, abs(rho))
    ref = OrientedFlow({a: x * factor for a, x in flow.values.items() if x > 0})
    return ref, (factor if rho > 0 else -factor), rho


def _div(a, b):
    if isinstance(a, (int, Fraction)) and isinstance(b, (int, Fraction)):
        return Fraction(a) / b
    return a / b


def first_layer(net: RootedNetwork, reference: OrientedFlow, tol=None) -> LayeredState:
    if tol is None:
        tol = default_tol(reference.values.values())
    root = net.root
    if find_positive_cycle(reference) is not None:
        raise ValueError("reference flow still has a positive cycle")
    out = sorted(((x, v) for (u, v), x in reference.values.items() if u == root and x > 0),
                 key=lambda t: (-t[0], t[1]))
    if not out:
        raise FrontierEmpty("the root has no outgoing flow", depth=0)
    chosen, total = [], 0
    for x, v in out:
        chosen.append((root, v))
        total += x
        if total >= 1:
            break
    if total < 1 - tol:
        raise ValueError(f"root outflow {total} is below one; rescale the flow first")
    preflow = {a: min(_div(reference[a], total), reference[a]) for a in chosen}
    layer = tuple(sorted(v for _, v in chosen))
    return LayeredState(1, root, ((root,), layer), ((), tuple(sorted(chosen))), ((), ()),
                        frozenset(chosen), preflow, reference, net, 1, tol)


def next_layer(state: LayeredState) -> LayeredState:
    """G_{n+1} and Phi_{n+1} from G_n and Phi_n (spreading, then relaxation)."""
    ref, tol, root = state.reference, state.tol, state.root
    n = state.n + 1
    out_ref, in_ref = ref.out_adjacency(), ref.in_adjacency()
    prev_layer = state.frontier
    seen = state.vertices

    for u in prev_layer:
        d_out = sum((ref[(u, w)] for w in out_ref.get(u, ())), 0)
        d_in = sum((ref[(w, u)] for w in in_ref.get(u, ())), 0)
        if abs(d_out - d_in) > tol:
            raise FrontierReached(
                f"vertex {u} of layer {state.n} is not balanced under the reference flow "
                "(truncation frontier)", depth=state.n)

    forward, back = [], []
    for u in prev_layer:
        for w in out_ref.get(u, ()):
            (back if w in seen else forward).append((u, w))
    forward.sort()
    back.sort()
    layer = tuple(sorted({w for _, w in forward}))
    if not layer:
        raise FrontierEmpty(f"layer {n} would be empty", depth=state.n)

    edges = state.edges | frozenset(forward) | frozenset(back)
    g = dict(state.preflow)

    # spreading: push each frontier vertex's inflow one edge further, in proportion to F
    for u in prev_layer:
        inflow = sum((g.get((w, u), 0) for w in in_ref.get(u, ()) if (w, u) in state.edges), 0)
        d_out = sum((ref[(u, w)] for w in out_ref.get(u, ())), 0)
        for w in out_ref.get(u, ()):
            x = ref[(u, w)] * _div(inflow, d_out)
            g[(u, w)] = min(x, ref[(u, w)])

    out_g = {}
    for (u, v) in sorted(edges):
        out_g.setdefault(u, []).append(v)
    d_plus = {v: 0 for v in seen | set(layer)}
    d_minus = dict(d_plus)
    for (u, v) in edges:
        d_plus[u] += g.get((u, v), 0)
        d_minus[v] += g.get((u, v), 0)

    targets = set(layer)
    pushes = []
    active = sorted({v for _, v in back})
    for s in active:
        while d_minus[s] - d_plus[s] > tol:
            excess = d_minus[s] - d_plus[s]
            path = _augmenting_path(s, targets, out_g, g, ref, state.net.length, tol)
            if path is None:
                raise RelaxationStuck(
                    f"no augmenting path from active vertex {s} to layer {n}; "
                    "the reference flow violates the construction's preconditions")
            arcs = list(zip(path, path[1:]))
            room = min(ref[a] - g.get(a, 0) for a in arcs)
            amount = min(room, excess)
            for a in arcs:
                g[a] = g.get(a, 0) + amount
                if ref[a] - g[a] <= tol:
                    g[a] = min(g[a], ref[a])
            d_plus[s] += amount
            d_minus[path[-1]] += amount
            pushes.append(Push(s, tuple(path), amount, room <= excess))

    return LayeredState(n, root, state.layers + (layer,), state.forward + (tuple(forward),),
                        state.back + (tuple(back),), edges, g, ref, state.net, state.scale,
                        tol, tuple(pushes))


def _augmenting_path(s, targets, out_g, g, ref, length, tol):
    """Shortest (by length) path from s into ``targets`` along unsaturated edges."""
    dist = {s: 0}
    pred = {s: None}
    done = set()
    heap = [(0, s)]
    while heap:
        d, u = heapq.heappop(heap)
        if u in done:
            continue
        done.add(u)
        if u in targets:
            path = [u]
            while pred[path[-1]] is not None:
                path.append(pred[path[-1]])
            return path[::-1]
        for v in out_g.get(u, ()):
            if ref[(u, v)] - g.get((u, v), 0) <= tol:
                continue
            nd = d + length(u, v)
            if v not in dist or nd < dist[v]:
                dist[v] = nd
                pred[v] = u
                heapq.heappush(heap, (nd, v))
    return None


def iter_layers(net: RootedNetwork, reference: OrientedFlow, depth: int, tol=None):
    """Yield the states G_1, ..., G_depth (stops early by raising at the frontier)."""
    state = first_layer(net, reference, tol)
    yield state
    while state.n < depth:
        state = next_layer(state)
        yield state


def build_layers(net: RootedNetwork, flow: OrientedFlow, n: int, root_scale=1) -> LayeredState:
    """Layered state G_n for a cycle-free flow with no zero edges.

    The flow is rescaled so that the root emits ``root_scale`` units.
    """
    if any(x <= 0 for x in flow.values.values()):
        raise ValueError("drop zero-flow edges before layering")
    if find_positive_cycle(flow) is not None:
        raise ValueError("eliminate positive cycles before layering")
    rho = flow_stats(net, flow).d[net.root]
    if rho <= 0:
        raise ValueError("the flow must leave the root (d(root) > 0)")
    factor = _div(root_scale, rho)
    ref = OrientedFlow({a: x * factor for a, x in flow.values.items()})
    state = None
    for state in iter_layers(net, ref, n):
        pass
    return _with_scale(state, factor)


def _with_scale(state: LayeredState, factor) -> LayeredState:
    return LayeredState(state.n, state.root, state.layers, state.forward, state.back, state.edges,
                        state.preflow, state.reference, state.net, factor, state.tol, state.pushes)


def check_properties(state: LayeredState, previous: Optional[LayeredState] = None) -> list:
    """Violations of P1-P5 (empty when the state is sound)."""
    tol = state.tol
    bad = []
    if previous is not None:
        for e in previous.edges:
            if state.preflow.get(e, 0) < previous.preflow.get(e, 0) - tol:
                bad.append(f"P1 at {e}")
    for e in state.edges:
        if state.preflow.get(e, 0) > state.reference[e] + tol:
            bad.append(f"P2 at {e}")
        if state.preflow.get(e, 0) < -tol:
            bad.append(f"negative preflow at {e}")
    d_plus, d_minus = state.degrees()
    root = state.root
    if abs(d_plus[root] - d_minus[root] - 1) > tol:
        bad.append(f"P3: d(root) = {d_plus[root] - d_minus[root]}")
    inner = set(v for layer in state.layers[:-1] for v in layer) - {root}
    for v in sorted(inner):
        if abs(d_plus[v] - d_minus[v]) > tol:
            bad.append(f"P4 at {v}: d = {d_plus[v] - d_minus[v]}")
    for v in state.frontier:
        if d_plus[v] != 0 or not d_minus[v] > 0:
            bad.append(f"P5 at {v}: d+ = {d_plus[v]}, d- = {d_minus[v]}")
    return bad


@dataclass(frozen=True)
class KeyInequality:
    lhs: object  # sum over L_n of d_n^-(v) phi_n(v)
    preflow_mass: object  # sum over E_n of L(e) Phi_n(e)
    rhs: object  # sum over E_n of L(e) F(e)
    holds: bool


def check_key_inequality(state: LayeredState, phi: Optional[Mapping] = None) -> KeyInequality:
    """Frontier-weighted distances never exceed the reference mass carried by G_n.

    ``phi`` overrides the computed distances (used for negative controls).
    """
    if phi is None:
        phi = state.distances()
    _, d_minus = state.degrees()
    lhs = sum((d_minus[v] * phi[v] for v in state.frontier), 0)
    edges = sorted(state.edges)
    mid = sum((state.length(u, v) * state.preflow.get((u, v), 0) for u, v in edges), 0)
    rhs = sum((state.length(u, v) * state.reference[(u, v)] for u, v in edges), 0)
    tol = state.tol * (1 + abs(rhs)) if state.tol else 0
    return KeyInequality(lhs, mid, rhs, lhs <= rhs + tol)


def min_frontier_vertex(state: LayeredState):
    """Vertex of L_n closest to the root (lowest id on ties) and its distance."""
    _, d_minus = state.degrees()
    inflow = sum((d_minus[v] for v in state.frontier), 0)
    if abs(inflow - 1) > (state.tol * 10 if state.tol else 0):
        raise ValueError(f"the last layer receives {inflow} units instead of one")
    phi = state.distances()
    v = min(state.frontier, key=lambda w: (phi[w], w))
    return v, phi[v]


@dataclass(frozen=True)
class RayWitness:
    vertices: tuple
    partial_lengths: tuple  # partial_lengths[j] = length of the path r_0 ... r_j
    bound: object
    depth: int = 0

    def __post_init__(self):
        if len(self.vertices) != len(self.partial_lengths):
            raise ValueError("one partial length per ray vertex")

    @property
    def total(self):
        return self.partial_lengths[-1]

    def to_json(self) -> dict:
        return {"ray": list(self.vertices),
                "partial_lengths": [_num(x) for x in self.partial_lengths],
                "bound": _num(self.bound),
                "depth": self.depth}


def witness_from_path(length, vertices, bound, depth=None) -> RayWitness:
    partial = [0]
    for u, v in zip(vertices, vertices[1:]):
        partial.append(partial[-1] + length(u, v))
    return RayWitness(tuple(vertices), tuple(partial), bound,
                      len(vertices) - 1 if depth is None else depth)


@dataclass(frozen=True)
class Extraction:
    """Everything :func:`extract_ray` derived on the way to its witness."""

    witness: RayWitness
    states: tuple
    reference: OrientedFlow
    factor: object
    rho: object


def extract_ray(net, flow, depth_schedule, root_scale=1) -> RayWitness:
    return extract_ray_full(net, flow, depth_schedule, root_scale).witness


def extract_ray_full(net, flow, depth_schedule, root_scale=1) -> Extraction:
    """Finite-length ray from an escaping finite-mass flow.

    ``depth_schedule`` is a target depth or an increasing list of acceptable
    depths; the deepest one the truncation supports is used.  The ray is
    chosen greedily: from the current vertex, step to the child from which the
    most deepest-layer vertices are reachable within the remaining length
    budget (the reference mass); ties go to the shorter prefix, then the
    lower id.
    """
    if isinstance(net, BNetwork):
        if isinstance(flow, OrientedFlow):
            flow = deorient(flow)
        flow = merge_flow(net, flow)
        net = merge_source_sink(net)
    schedule = sorted({depth_schedule} if isinstance(depth_schedule, int) else set(depth_schedule))
    if not schedule or schedule[0] < 1:
        raise ValueError("depths must be positive")
    ref, factor, rho = prepare_reference(net, flow, root_scale)
    states = []
    try:
        for state in iter_layers(net, ref, schedule[-1]):
            states.append(state)
    except (FrontierReached, FrontierEmpty) as exc:
        achieved = states[-1].n if states else 0
        if achieved < schedule[0]:
            raise WitnessExhausted(
                f"layering stopped at depth {achieved} ({exc}); "
                f"depth {schedule[0]} needed to certify a ray", depth=achieved) from exc
    achieved = states[-1].n
    depth = max(d for d in schedule if d <= achieved)
    states = states[:depth]
    final = states[-1]
    bound = final.reference_mass()
    witness = _koenig(final, bound)
    return Extraction(witness, tuple(states), ref, factor, rho)


def _koenig(state: LayeredState, bound) -> RayWitness:
    out = {}
    for (u, v) in sorted(state.edges):
        out.setdefault(u, []).append(v)
    deepest = set(state.frontier)
    tol = state.tol
    if not is_exact([bound]):
        # exact flow values over float lengths still need a rounding allowance
        tol = max(tol, FLOAT_TOL * max(1.0, abs(bound)))
    length = state.net.length
    reach_cache = {}

    def reachable(c):
        if c not in reach_cache:
            dist, _ = shortest_paths(out, length, c)
            reach_cache[c] = sorted(dist[v] for v in deepest if v in dist)
        return reach_cache[c]

    ray = [state.root]
    spent = 0
    while ray[-1] not in deepest:
        u = ray[-1]
        best = None
        for c in out.get(u, ()):
            prefix = spent + length(u, c)
            budget = bound - prefix
            count = sum(1 for d in reachable(c) if d <= budget + tol)
            key = (-count, prefix, c)
            if count and (best is None or key < best):
                best = key
        if best is None:
            raise WitnessExhausted(f"no bounded continuation from vertex {u}", depth=state.n)
        _, spent, c = best
        ray.append(c)
    return witness_from_path(length, ray, bound, depth=state.n)


def unmerge_ray(rooted: RootedNetwork, ray) -> tuple:
    """Replace the root by the terminal (source or sink) its first edge came from."""
    ray = tuple(ray)
    if len(ray) < 2 or ray[0] != rooted.root or rooted.sink is None:
        return ray
    start = rooted.source if rooted.terminal[ray[1]] == "source" else rooted.sink
    return (start,) + ray[1:]


def _num(x):
    if isinstance(x, Fraction):
        return x.numerator if x.denominator == 1 else str(x)
    return x
