"""Weight sequences with a closed-form tail.

A Larson-Wogen system is fixed by its weights a_k.  The edge lengths of its
graph are the reciprocals |1/a_k|, so the tail rules below are written on
the reciprocal sequence ``1/a_k``; that is the series the density criterion
inspects.  Explicit prefix entries are the weights themselves.

Tail kinds (k is the global basis index):

* ``constant(c)``      1/a_k = c
* ``power(c, p)``      1/a_k = c * k**(-p)
* ``geometric(c, q)``  1/a_k = c * q**k
* ``explicit_l1``      finitely many reciprocal weights plus an asserted
  summability flag and bound for the infinite remainder.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Real
from typing import Optional, Sequence

from scipy.special import zeta

from .errors import SpecParseError, TruncationTooShallow, ZeroWeight

TAIL_KINDS = ("constant", "power", "geometric", "explicit_l1")


@dataclass(frozen=True)
class Tail:
    kind: str
    c: Real = 1
    p: Real = 0
    q: Real = 0
    values: tuple = ()
    summable: Optional[bool] = None
    bound: Optional[Real] = None

    def __post_init__(self):
        if self.kind not in TAIL_KINDS:
            raise SpecParseError(f"unknown tail kind {self.kind!r}")
        if self.kind == "explicit_l1":
            if self.summable is None:
                raise SpecParseError("explicit_l1 tail needs a 'summable' flag")
            if any(v == 0 for v in self.values):
                raise ZeroWeight("explicit_l1 tail lists a zero reciprocal weight")
            return
        if self.c == 0:
            raise ZeroWeight("tail coefficient c must be nonzero")
        if self.kind == "geometric" and not self.q > 0:
            raise SpecParseError("geometric tail needs q > 0")

    @classmethod
    def constant(cls, c=1):
        return cls("constant", c=c)

    @classmethod
    def power(cls, c=1, p=1):
        return cls("power", c=c, p=p)

    @classmethod
    def geometric(cls, c=1, q=Fraction(1, 2)):
        return cls("geometric", c=c, q=q)

    @classmethod
    def explicit_l1(cls, values=(), summable=True, bound=None):
        return cls("explicit_l1", values=tuple(values), summable=summable, bound=bound)

    def reciprocal(self, k: int, start: int):
        """1/a_k for the tail entry at global index ``k`` (tail begins at ``start``)."""
        if self.kind == "constant":
            return self.c
        if self.kind == "power":
            p = self.p
            if isinstance(p, int) or (isinstance(p, Fraction) and p.denominator == 1):
                return self.c / Fraction(k) ** int(p) if _exact(self.c) else self.c / k ** int(p)
            return self.c * float(k) ** (-float(p))
        if self.kind == "geometric":
            return self.c * self.q ** k
        i = k - start
        if i >= len(self.values):
            raise TruncationTooShallow(
                f"explicit_l1 tail lists {len(self.values)} values; index {k} requested"
            )
        return self.values[i]

    def converges(self) -> bool:
        """Exact verdict of the series test on sum |1/a_k|."""
        if self.kind == "constant":
            return False
        if self.kind == "power":
            return self.p > 1
        if self.kind == "geometric":
            return self.q < 1
        return bool(self.summable)

    def rule(self) -> str:
        if self.kind == "constant":
            return "constant reciprocal weights: sum diverges"
        if self.kind == "power":
            verdict = "converges" if self.p > 1 else "diverges"
            return f"p-series with p={self.p}: {verdict} (converges iff p > 1)"
        if self.kind == "geometric":
            verdict = "converges" if self.q < 1 else "diverges"
            return f"geometric ratio q={self.q}: {verdict} (converges iff q < 1)"
        return f"asserted l1 membership: summable={self.summable}"

    def remainder(self, start: int) -> float:
        """sum_{k >= start} |1/a_k|; ``inf`` for divergent tails."""
        if not self.converges():
            return math.inf
        c = abs(float(self.c))
        if self.kind == "power":
            return c * float(zeta(float(self.p), start))
        if self.kind == "geometric":
            q = float(self.q)
            return c * q**start / (1.0 - q)
        if self.bound is None:
            raise SpecParseError("summable explicit_l1 tail needs a 'bound'")
        return float(self.bound)

    def to_json(self) -> dict:
        if self.kind == "constant":
            return {"kind": "constant", "c": _num_out(self.c)}
        if self.kind == "power":
            return {"kind": "power", "c": _num_out(self.c), "p": _num_out(self.p)}
        if self.kind == "geometric":
            return {"kind": "geometric", "c": _num_out(self.c), "q": _num_out(self.q)}
        out = {"kind": "explicit_l1", "values": [_num_out(v) for v in self.values],
               "summable": self.summable}
        if self.bound is not None:
            out["bound"] = _num_out(self.bound)
        return out


@dataclass(frozen=True)
class WeightSequenceSpec:
    """Weights a_1, a_2, ... as an explicit prefix followed by a tail rule.

    ``prefix[i]`` is a_{i+1}.  a_1 never enters a Larson-Wogen system (its
    coefficient multiplies e_0), but it is kept so indices line up.
    """

    prefix: tuple = ()
    tail: Tail = field(default_factory=Tail.constant)

    def __post_init__(self):
        object.__setattr__(self, "prefix", tuple(self.prefix))
        for i, a in enumerate(self.prefix, start=1):
            if a == 0:
                raise ZeroWeight(f"a_{i} = 0")

    def weight(self, k: int):
        if k < 1:
            raise ValueError("weights are indexed from 1")
        if k <= len(self.prefix):
            return self.prefix[k - 1]
        r = self.tail.reciprocal(k, len(self.prefix) + 1)
        if r == 0:
            raise ZeroWeight(f"tail produced 1/a_{k} = 0")
        return 1 / r if not _exact(r) else Fraction(1) / r

    def length(self, k: int):
        """|1/a_k|, the length of the k-th edge of the Larson-Wogen ray."""
        if k > len(self.prefix):
            r = self.tail.reciprocal(k, len(self.prefix) + 1)
            if r == 0 and _exact(r):
                raise ZeroWeight(f"tail produced 1/a_{k} = 0")
            return abs(r)
        a = self.weight(k)
        return abs(Fraction(1) / a) if _exact(a) else abs(1.0 / a)

    def float_length(self, k: int) -> float:
        """Float |1/a_k| without building huge exact intermediates."""
        t = self.tail
        if k > len(self.prefix) and t.kind == "geometric":
            return abs(float(t.c)) * float(t.q) ** k
        if k > len(self.prefix) and t.kind == "power":
            return abs(float(t.c)) * float(k) ** (-float(t.p))
        return float(self.length(k))

    def weights(self, n: int) -> list:
        return [self.weight(k) for k in range(1, n + 1)]

    def series_total(self, start: int = 2) -> float:
        """sum_{k >= start} |1/a_k|, closed form for the tail."""
        tail_start = len(self.prefix) + 1
        head = math.fsum(float(self.length(k)) for k in range(start, tail_start))
        return head + self.tail.remainder(max(start, tail_start))

    def to_json(self) -> dict:
        return {"prefix": [_num_out(a) for a in self.prefix], "tail": self.tail.to_json()}


def _exact(x) -> bool:
    return isinstance(x, (int, Fraction)) and not isinstance(x, bool)


def _num_out(x):
    if isinstance(x, Fraction):
        return str(x) if x.denominator != 1 else x.numerator
    return x


def parse_number(x):
    """JSON scalar -> number; strings like ``"3/4"`` become Fractions."""
    if isinstance(x, bool):
        raise SpecParseError(f"expected a number, got {x!r}")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, float):
        return x
    if isinstance(x, str):
        try:
            return Fraction(x)
        except (ValueError, ZeroDivisionError) as exc:
            raise SpecParseError(f"bad number {x!r}") from exc
    raise SpecParseError(f"expected a number, got {x!r}")


def tail_from_json(obj: dict) -> Tail:
    if not isinstance(obj, dict) or "kind" not in obj:
        raise SpecParseError("tail must be an object with a 'kind'")
    kind = obj["kind"]
    try:
        if kind == "constant":
            return Tail.constant(parse_number(obj.get("c", 1)))
        if kind == "power":
            p = parse_number(obj["p"])
            return Tail.power(parse_number(obj.get("c", 1)), p)
        if kind == "geometric":
            return Tail.geometric(parse_number(obj.get("c", 1)), parse_number(obj["q"]))
        if kind == "explicit_l1":
            bound = obj.get("bound")
            return Tail.explicit_l1(
                [parse_number(v) for v in obj.get("values", [])],
                summable=bool(obj["summable"]),
                bound=None if bound is None else parse_number(bound),
            )
    except KeyError as exc:
        raise SpecParseError(f"tail {kind!r} missing field {exc.args[0]!r}") from exc
    raise SpecParseError(f"unknown tail kind {kind!r}")


def weights_from_json(obj: dict) -> WeightSequenceSpec:
    prefix = [parse_number(a) for a in obj.get("prefix", [])]
    tail = tail_from_json(obj.get("tail", {"kind": "constant", "c": 1}))
    return WeightSequenceSpec(tuple(prefix), tail)


def explicit_weights(values: Sequence) -> WeightSequenceSpec:
    """Finite weight list with no usable tail (generation stops at the end)."""
    return WeightSequenceSpec(tuple(values), Tail.explicit_l1((), summable=False))
