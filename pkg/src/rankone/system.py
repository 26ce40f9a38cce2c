"""Truncated B-class biorthogonal systems.

A system is stored through two sparse matrices, ``f_entries[(n, k)] =
<f_n, e_k>`` and ``fstar_entries[(n, k)] = <f*_n, e_k>``, indexed from 1 to
``n_max``.  Every index is either Left (f*_n = e_n) or Right (f_n = e_n).
Rows whose band reaches past ``n_max`` are clipped; checks that would see the
clipping are restricted to the interior ``n <= n_max - bandwidth``.
"""

from __future__ import annotations

import enum
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Optional

from . import kernels
from .errors import TruncationTooShallow, ZeroWeight
from .weights import WeightSequenceSpec


class Side(enum.Enum):
    LEFT = "L"
    RIGHT = "R"


LEFT = Side.LEFT
RIGHT = Side.RIGHT


@dataclass(frozen=True)
class BandSystem:
    n_max: int
    bandwidth: int
    side: tuple  # side[n - 1] is the Side of index n
    f_entries: Mapping = field(repr=False)
    fstar_entries: Mapping = field(repr=False)

    def side_of(self, n: int) -> Side:
        return self.side[n - 1]

    @property
    def left(self) -> list:
        return [n for n in range(1, self.n_max + 1) if self.side[n - 1] is LEFT]

    @property
    def right(self) -> list:
        return [n for n in range(1, self.n_max + 1) if self.side[n - 1] is RIGHT]

    def f(self, n: int, k: int):
        return self.f_entries.get((n, k), 0)

    def fstar(self, n: int, k: int):
        return self.fstar_entries.get((n, k), 0)

    @property
    def interior(self) -> range:
        """Indices whose band is not clipped by the truncation."""
        return range(1, self.n_max - self.bandwidth + 1)

    @property
    def exact(self) -> bool:
        return all(isinstance(v, (int, Fraction)) for v in self.f_entries.values())

    def row(self, n: int, star: bool = False) -> dict:
        src = self.fstar_entries if star else self.f_entries
        lo, hi = max(1, n - self.bandwidth), min(self.n_max, n + self.bandwidth)
        return {k: src[(n, k)] for k in range(lo, hi + 1) if (n, k) in src}


@dataclass(frozen=True)
class Violation:
    condition: str  # C2, C3, C4, C5, BOTH_PARTS
    index: Optional[tuple]
    detail: str

    def to_json(self) -> dict:
        return {"condition": self.condition,
                "index": list(self.index) if self.index else None,
                "detail": self.detail}


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple = ()

    def __len__(self):
        return len(self.violations)

    def __iter__(self):
        return iter(self.violations)

    @property
    def ok(self) -> bool:
        return not self.violations

    def conditions(self) -> set:
        return {v.condition for v in self.violations}

    def to_json(self) -> dict:
        return {"ok": self.ok, "violations": [v.to_json() for v in self.violations]}


def from_f_entries(side, f_offdiag: Mapping, bandwidth: int) -> BandSystem:
    """Assemble a system from the off-diagonal entries of f.

    The rest is forced: unit diagonals, f*_k gets ``-f_n[k]`` at position n,
    and the designated unit rows stay unit unless the input breaks them (which
    :func:`validate_system` then reports).
    """
    side = tuple(Side(s) if not isinstance(s, Side) else s for s in side)
    n_max = len(side)
    f = {}
    fstar = {}
    for n in range(1, n_max + 1):
        f[(n, n)] = 1
        fstar[(n, n)] = 1
    for (n, k), v in f_offdiag.items():
        if n == k or v == 0:
            continue
        f[(n, k)] = v
        fstar[(k, n)] = -v
    return BandSystem(n_max, bandwidth, side, f, fstar)


def validate_system(sys: BandSystem) -> ValidationReport:
    out = []
    n_max, b = sys.n_max, sys.bandwidth

    def inside(n, k):
        return 1 <= n <= n_max and 1 <= k <= n_max

    for name, entries in (("f", sys.f_entries), ("fstar", sys.fstar_entries)):
        for (n, k), v in sorted(entries.items()):
            if not inside(n, k):
                out.append(Violation("C5", (n, k), f"{name} entry outside 1..{n_max}"))
            elif v != 0 and abs(n - k) > b:
                out.append(Violation("C5", (n, k), f"{name}({n},{k}) outside band {b}"))

    for n in range(1, n_max + 1):
        if sys.f(n, n) != 1:
            out.append(Violation("C3", (n, n), f"<f_{n}, e_{n}> = {sys.f(n, n)}"))
        if sys.fstar(n, n) != 1:
            out.append(Violation("C3", (n, n), f"<f*_{n}, e_{n}> = {sys.fstar(n, n)}"))
        unit, name = (sys.fstar_entries, "f*") if sys.side_of(n) is LEFT else (sys.f_entries, "f")
        lo, hi = max(1, n - b), min(n_max, n + b)
        for k in range(lo, hi + 1):
            if k != n and unit.get((n, k), 0) != 0:
                out.append(Violation("C2", (n, k), f"{name}_{n} should equal e_{n}"))

    seen = set()
    for (n, k) in sorted(set(sys.f_entries) | {(k, n) for (n, k) in sys.fstar_entries}):
        if n == k or (n, k) in seen or not inside(n, k):
            continue
        seen.add((n, k))
        if sys.f(n, k) != -sys.fstar(k, n):
            out.append(Violation(
                "C4", (n, k), f"<f_{n},e_{k}> = {sys.f(n, k)} but <f*_{k},e_{n}> = {sys.fstar(k, n)}"))

    has_left = any(s is LEFT for s in sys.side)
    has_right = any(s is RIGHT for s in sys.side)
    if not (has_left and has_right):
        out.append(Violation("BOTH_PARTS", None, "Left and Right index sets must both be nonempty"))
    elif not any(v != 0 for (n, k), v in sys.f_entries.items() if n != k):
        out.append(Violation("BOTH_PARTS", None, "no off-diagonal entries: degenerate split"))
    return ValidationReport(tuple(out))


def biorthogonality_check(sys: BandSystem, tol: float = 1e-12) -> float:
    """Largest |<f_n, f*_m> - delta_nm| over interior pairs.

    ``tol`` is accepted for symmetry with the other checks; comparing the
    returned defect against it is left to the caller.
    """
    if sys.n_max <= 2 * sys.bandwidth:
        raise TruncationTooShallow(
            f"n_max = {sys.n_max} must exceed twice the bandwidth {sys.bandwidth}")
    m = sys.n_max - sys.bandwidth
    if sys.exact:
        return _exact_defect(sys, m)
    return kernels.band_defect(*_dense(sys), sys.bandwidth, m)


def _exact_defect(sys: BandSystem, m: int):
    b = sys.bandwidth
    worst = Fraction(0)
    rows = {n: sys.row(n) for n in range(1, m + 1)}
    stars = {n: sys.row(n, star=True) for n in range(1, m + 1)}
    for n in range(1, m + 1):
        fn = rows[n]
        for mm in range(max(1, n - 2 * b), min(m, n + 2 * b) + 1):
            s = sum(v * stars[mm].get(k, 0) for k, v in fn.items())
            worst = max(worst, abs(s - (1 if n == mm else 0)))
    return worst


def _dense(sys: BandSystem):
    import numpy as np

    n = sys.n_max
    f = np.zeros((n, n))
    fs = np.zeros((n, n))
    for (i, k), v in sys.f_entries.items():
        f[i - 1, k - 1] = v
    for (i, k), v in sys.fstar_entries.items():
        fs[i - 1, k - 1] = v
    return f, fs


def make_larson_wogen(a: WeightSequenceSpec, n_max: int) -> BandSystem:
    """Larson-Wogen system truncated to indices 1..n_max.

    f_{2j-1} = -a_{2j-1} e_{2j-2} + e_{2j-1} + a_{2j} e_{2j}, f_{2j} = e_{2j};
    odd indices are Left, even indices Right, a_0 = 0.
    """
    if n_max < 1:
        raise ValueError("n_max must be positive")
    weights = {}
    for k in range(2, n_max + 1):
        w = a.weight(k)
        if w == 0:
            raise ZeroWeight(f"a_{k} = 0")
        weights[k] = w
    side = tuple(LEFT if n % 2 else RIGHT for n in range(1, n_max + 1))
    off = {}
    for n in range(1, n_max + 1, 2):
        if n - 1 >= 1:
            off[(n, n - 1)] = -weights[n]
        if n + 1 <= n_max:
            off[(n, n + 1)] = weights[n + 1]
    return from_f_entries(side, off, bandwidth=1)


def diagonal_system(side) -> BandSystem:
    """f_n = f*_n = e_n for every n (an orthonormal basis)."""
    return from_f_entries(side, {}, bandwidth=1)


def random_b_class(rng: random.Random, n_max: int, bandwidth: int) -> BandSystem:
    """Random band system satisfying C2-C5.

    Sides come from fair coins (at least one of each is forced); each Left row
    gets a value uniform on [-2, -0.1] U [0.1, 2] at every Right column inside
    the band, and f* follows from the skew relation.
    """
    side = [LEFT if rng.random() < 0.5 else RIGHT for _ in range(n_max)]
    if all(s is LEFT for s in side):
        side[rng.randrange(n_max)] = RIGHT
    elif all(s is RIGHT for s in side):
        side[rng.randrange(n_max)] = LEFT
    off = {}
    for n in range(1, n_max + 1):
        if side[n - 1] is not LEFT:
            continue
        for k in range(max(1, n - bandwidth), min(n_max, n + bandwidth) + 1):
            if side[k - 1] is RIGHT:
                mag = rng.uniform(0.1, 2.0)
                off[(n, k)] = mag if rng.random() < 0.5 else -mag
    return from_f_entries(side, off, bandwidth)
