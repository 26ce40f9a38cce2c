"""Flows on the B-network versus band operators annihilating the rank-one algebra.

Entries follow T_ij = <T e_j, e_i>.  A flow F on the B-network and an
operator T correspond through

    F(s, v_l)   = T_ll
    F(t, v_r)   = T_rr
    F(v_l, v_r) = T_lr <f*_r, e_l> = -T_lr <f_l, e_r>

with every other entry of T zero.  Balance of F at v_l is then exactly
sum_j T_lj <f_l, e_j> = 0, balance at v_r is sum_j T_jr <f*_r, e_j> = 0,
Tr(T) = d(s) + d(t), and the l1 norm of the entries equals the mass of F.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

from .errors import InconsistentOperator
from .flows import PseudoFlow
from .graph import BNetwork
from .system import LEFT, BandSystem
from .weights import parse_number


@dataclass(frozen=True)
class OperatorMatrix:
    entries: Mapping = field(repr=False)  # (i, j) -> T_ij, zeros omitted
    bandwidth: int = 0

    def __getitem__(self, ij):
        return self.entries.get(ij, 0)

    @property
    def trace(self):
        return sum((x for (i, j), x in sorted(self.entries.items()) if i == j), 0)

    @property
    def l1_norm(self):
        return sum((abs(x) for _, x in sorted(self.entries.items())), 0)

    def to_json(self) -> dict:
        return {"entries": [[i, j, _num(x)] for (i, j), x in sorted(self.entries.items())],
                "trace": _num(self.trace)}


def operator_from_json(obj: dict) -> OperatorMatrix:
    entries = {}
    for i, j, x in obj["entries"]:
        x = parse_number(x)
        if x != 0:
            entries[(int(i), int(j))] = x
    band = max((abs(i - j) for i, j in entries), default=0)
    return OperatorMatrix(entries, band)


def flow_to_operator(net: BNetwork, flow: PseudoFlow) -> OperatorMatrix:
    g, s, t = net.graph, net.source, net.sink
    entries = {}
    for l in sorted(g.left):
        x = flow[(s, l)]
        if x != 0:
            entries[(l, l)] = x
    for r in sorted(g.right):
        x = flow[(t, r)]
        if x != 0:
            entries[(r, r)] = x
    for (l, r) in g.edges():
        x = flow[(l, r)]
        if x != 0:
            entries[(l, r)] = -x * g.lhat[(l, r)]
    for (u, v), x in flow.items():
        if not net.has_edge(u, v):
            raise ValueError(f"flow on ({u}, {v}) which is not an edge of the network")
    band = max((abs(i - j) for i, j in entries), default=0)
    return OperatorMatrix(entries, band)


def operator_to_flow(net: BNetwork, T: OperatorMatrix) -> PseudoFlow:
    g, s, t = net.graph, net.source, net.sink
    pf = PseudoFlow()
    for (i, j), x in sorted(T.entries.items()):
        if x == 0:
            continue
        if i == j:
            if i in g.left:
                pf.add(s, i, x)
            elif i in g.right:
                pf.add(t, i, x)
            else:
                raise InconsistentOperator(f"diagonal entry ({i}, {i}) has no vertex")
        elif i in g.left and j in g.right and (i, j) in g.lhat:
            # F(v_l, v_r) = T_lr <f*_r, e_l> and <f*_r, e_l> = -1 / lhat(l, r)
            w = g.lhat[(i, j)]
            inv = Fraction(1) / w if isinstance(w, (int, Fraction)) else 1.0 / w
            pf.add(i, j, -x * inv)
        else:
            raise InconsistentOperator(
                f"T[{i},{j}] = {x} lies off the support of the graph; "
                "such an operator cannot come from a flow")
    return pf


def annihilation_check(sys: BandSystem, T: OperatorMatrix, tol: float = 1e-12):
    """Largest residual of <T f_n, f*_n> = 0 over interior rows.

    Left rows use sum_j T_nj <f_n, e_j>; right rows sum_j T_jn <f*_n, e_j>.
    ``tol`` is for the caller's comparison; the defect itself is returned.
    """
    by_row, by_col = {}, {}
    for (i, j), x in T.entries.items():
        by_row.setdefault(i, {})[j] = x
        by_col.setdefault(j, {})[i] = x
    worst = 0
    for n in sys.interior:
        if sys.side_of(n) is LEFT:
            row = by_row.get(n, {})
            s = sum((x * sys.f(n, j) for j, x in sorted(row.items())), 0)
        else:
            col = by_col.get(n, {})
            s = sum((x * sys.fstar(n, j) for j, x in sorted(col.items())), 0)
        worst = max(worst, abs(s))
    return worst


def _num(x):
    if isinstance(x, Fraction):
        return x.numerator if x.denominator == 1 else str(x)
    return x
