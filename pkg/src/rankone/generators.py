"""Seeded random instances for property suites and the CLI oracle.

All amounts are small rationals so identities can be checked exactly.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from .flows import PseudoFlow
from .graph import BNetwork, RootedNetwork, network_for, rooted_from_edges
from .system import BandSystem, make_larson_wogen
from .weights import Tail, WeightSequenceSpec


def _rational(rng: random.Random, lo: int = 1, hi: int = 9, den: int = 6) -> Fraction:
    return Fraction(rng.randint(lo, hi), rng.randint(1, den))


@dataclass(frozen=True)
class FlowInstance:
    net: object
    flow: PseudoFlow


def _edges_of(walks) -> set:
    out = set()
    for w in walks:
        for u, v in zip(w, w[1:]):
            out.add((min(u, v), max(u, v)))
    return out


def _rooted(rng: random.Random, pairs: set) -> RootedNetwork:
    return rooted_from_edges((u, v, _rational(rng, 1, 5, 4)) for u, v in sorted(pairs))


def random_rooted_instance(rng: random.Random, max_vertices: int = 12) -> FlowInstance:
    """Small rooted graph carrying root paths plus planted circulations."""
    n = rng.randint(3, max_vertices)
    others = list(range(1, n))
    walks = []
    flow = PseudoFlow()
    for _ in range(rng.randint(1, 3)):
        path = [0] + rng.sample(others, rng.randint(1, min(4, len(others))))
        if rng.random() < 0.3:
            path.reverse()  # some flow runs back into the root
        walks.append(path)
        x = _rational(rng)
        for u, v in zip(path, path[1:]):
            flow.add(u, v, x)
    for _ in range(rng.randint(1, 4)):
        k = rng.randint(3, min(6, n))
        cyc = rng.sample(range(n), k)
        walks.append(cyc + [cyc[0]])
        x = _rational(rng)
        for u, v in zip(cyc, cyc[1:] + cyc[:1]):
            flow.add(u, v, x)
    return FlowInstance(_rooted(rng, _edges_of(walks)), flow)


def random_layered_instance(rng: random.Random, levels: int = 24,
                            max_width: int = 4) -> FlowInstance:
    """Root-to-level-``levels`` paths (with lateral and backward detours) plus circulations.

    Every vertex off the last level is balanced, so layering proceeds until
    the deepest level is reached.
    """
    level_of = {0: 0}
    by_level = [[0]]
    nxt = 1
    for lvl in range(1, levels + 1):
        width = rng.randint(1, max_width)
        by_level.append(list(range(nxt, nxt + width)))
        for v in by_level[-1]:
            level_of[v] = lvl
        nxt += width
    walks = []
    flow = PseudoFlow()
    for _ in range(rng.randint(1, 3)):
        path = [0]
        seen = {0}
        lvl = 0
        while lvl < levels:
            r = rng.random()
            options = []
            if r < 0.15:
                options = [v for v in by_level[lvl] if v not in seen]
            elif r < 0.22 and lvl >= 2:
                options = [v for v in by_level[lvl - 1] if v not in seen]
            if not options:
                options = [v for v in by_level[lvl + 1] if v not in seen]
                if not options:
                    break
            v = rng.choice(options)
            path.append(v)
            seen.add(v)
            lvl = level_of[v]
        if level_of[path[-1]] != levels:
            continue
        walks.append(path)
        x = _rational(rng)
        for u, v in zip(path, path[1:]):
            flow.add(u, v, x)
    if not walks:
        return random_layered_instance(rng, levels, max_width)
    for _ in range(rng.randint(0, 3)):
        # keep circulations within two adjacent levels so they add no long shortcuts
        lvl = rng.randint(1, levels - 2)
        pool = by_level[lvl] + by_level[lvl + 1]
        k = rng.randint(3, 5)
        if len(pool) < k:
            continue
        cyc = rng.sample(pool, k)
        walks.append(cyc + [cyc[0]])
        x = _rational(rng)
        for u, v in zip(cyc, cyc[1:] + cyc[:1]):
            flow.add(u, v, x)
    return FlowInstance(_rooted(rng, _edges_of(walks)), flow)


def random_lw_weights(rng: random.Random, n_max: int) -> WeightSequenceSpec:
    prefix = []
    for _ in range(n_max + 1):
        a = _rational(rng, 1, 8, 4)
        prefix.append(-a if rng.random() < 0.3 else a)
    return WeightSequenceSpec(tuple(prefix), Tail.constant(1))


def random_network_flow(rng: random.Random, sys: BandSystem) -> FlowInstance:
    """Rational flow on the B-network of ``sys``.

    Interior basis vertices are balanced; frontier vertices (whose band is
    clipped) get arbitrary terminal flow, so d(s) + d(t) need not vanish.
    """
    net: BNetwork = network_for(sys)
    g = net.graph
    interior = set(sys.interior)
    flow = PseudoFlow()
    for (l, r) in g.edges():
        if rng.random() < 0.8:
            x = _rational(rng, -9, 9)
            if x:
                flow.add(l, r, x)
    for terminal, part in ((net.source, g.left), (net.sink, g.right)):
        for v in sorted(part):
            if v in interior:
                out = sum((flow[(v, w)] for w in g.neighbors(v)), Fraction(0))
            else:
                out = _rational(rng, -9, 9)
            if out:
                flow.add(terminal, v, out)
    return FlowInstance(net, flow)


def random_lw_flow(rng: random.Random, depth: int = 30) -> tuple:
    """(system, instance) for a random exact Larson-Wogen truncation."""
    sys = make_larson_wogen(random_lw_weights(rng, depth), depth)
    return sys, random_network_flow(rng, sys)
