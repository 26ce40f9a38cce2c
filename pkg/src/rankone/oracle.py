"""Exhaustive reference computations for small instances.

Nothing here shares code with the library routines it is compared against:
distances come from enumerating simple paths, cycles from enumerating
simple cycles, degrees from summing edge values directly.
"""

from __future__ import annotations

import math
from fractions import Fraction

from .errors import InstanceTooLarge

MAX_VERTICES = 14
MAX_LW_DEPTH = 20


def check_size(n_vertices: int, lw_depth=None) -> None:
    if lw_depth is not None and lw_depth <= MAX_LW_DEPTH:
        return
    if n_vertices > MAX_VERTICES:
        raise InstanceTooLarge(
            f"{n_vertices} vertices; the oracle handles at most {MAX_VERTICES} "
            f"(or Larson-Wogen depth {MAX_LW_DEPTH})")


def simple_path_distances(adjacency, length, source, prune: bool = True) -> dict:
    """min over simple paths from ``source`` of the summed length, per vertex.

    Depth-first enumeration.  With ``prune`` a branch is dropped once it
    reaches a vertex no faster than an earlier branch did; lengths are
    positive, so a shortest walk is always a simple path and nothing is lost.
    """
    best = {source: 0}
    stack = [(source, 0, frozenset([source]))]
    while stack:
        u, d, seen = stack.pop()
        for v in adjacency.get(u, ()):
            if v in seen:
                continue
            nd = d + length(u, v)
            if v in best and nd >= best[v]:
                if prune:
                    continue
            else:
                best[v] = nd
            stack.append((v, nd, seen | {v}))
    return best


def simple_cycles(arcs) -> list:
    """All simple directed cycles of the arc set, each listed once from its smallest vertex."""
    out_adj = {}
    for u, v in arcs:
        out_adj.setdefault(u, set()).add(v)
    found = []
    for start in sorted(out_adj):
        stack = [(start, [start])]
        while stack:
            u, path = stack.pop()
            for v in sorted(out_adj.get(u, ())):
                if v == start:
                    found.append(path[:])
                elif v > start and v not in path:
                    stack.append((v, path + [v]))
    return found


def positive_cycles(values) -> list:
    """Simple cycles along arcs carrying strictly positive flow."""
    return simple_cycles([a for a, x in values.items() if x > 0])


def direct_degrees(values, vertices) -> dict:
    """d(v) = outflow - inflow, summing the positive orientation of every edge."""
    d = {v: Fraction(0) for v in vertices}
    for (u, v), x in values.items():
        if x > 0:
            d[u] = d.get(u, 0) + x
            d[v] = d.get(v, 0) - x
    return d


def direct_mass(values, length) -> object:
    return sum((x * length(u, v) for (u, v), x in values.items() if x > 0), 0)


def ray_partial_sums(lengths) -> list:
    """Running fsum of a list of edge lengths, starting with 0."""
    out = [0.0]
    for j in range(1, len(lengths) + 1):
        out.append(math.fsum(lengths[:j]))
    return out
