"""System spec files.

Two families are understood::

    {"family": "larson_wogen", "prefix": [...], "tail": {...}, "n_max": N}
    {"family": "explicit", "side": ["L", "R", ...],
     "f_entries": [[n, k, v], ...], "bandwidth": b}

An explicit spec may also carry ``fstar_entries``; otherwise f* is derived
from the skew relation.  Numbers may be JSON ints, floats or ``"p/q"``
strings (the latter two kinds stay exact).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Union

from .decide import ExplicitFamily, LarsonWogenFamily
from .errors import SpecParseError, UnsupportedFamily
from .system import LEFT, RIGHT, BandSystem, from_f_entries
from .weights import parse_number, weights_from_json

FAMILIES = ("larson_wogen", "explicit")


@dataclass(frozen=True)
class LoadedSpec:
    family: Union[LarsonWogenFamily, ExplicitFamily]
    n_max: Optional[int]
    raw: dict

    def system(self, n_max: Optional[int] = None) -> BandSystem:
        n = n_max or self.n_max
        if n is None:
            raise SpecParseError("spec has no n_max and none was given")
        return self.family.system(n)


def load_spec(path) -> LoadedSpec:
    """Read and parse a spec file.  OSError propagates for the caller to map."""
    text = Path(path).read_text(encoding="utf-8")
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SpecParseError(f"{path}: not valid JSON ({exc})") from exc
    return parse_spec(obj)


def parse_spec(obj) -> LoadedSpec:
    if not isinstance(obj, dict):
        raise SpecParseError("spec must be a JSON object")
    fam = obj.get("family")
    if fam is None:
        raise SpecParseError("spec lacks a 'family' field")
    if fam not in FAMILIES:
        raise UnsupportedFamily(f"unknown family {fam!r}; supported: {', '.join(FAMILIES)}")
    n_max = obj.get("n_max")
    if n_max is not None and (not isinstance(n_max, int) or isinstance(n_max, bool) or n_max < 1):
        raise SpecParseError(f"n_max must be a positive integer, got {n_max!r}")
    if fam == "larson_wogen":
        return LoadedSpec(LarsonWogenFamily(weights_from_json(obj)), n_max, obj)
    return LoadedSpec(ExplicitFamily(_explicit(obj)), len(obj.get("side", [])), obj)


def _explicit(obj: dict) -> BandSystem:
    try:
        sides = obj["side"]
        rows = obj["f_entries"]
        bandwidth = obj["bandwidth"]
    except KeyError as exc:
        raise SpecParseError(f"explicit spec missing field {exc.args[0]!r}") from exc
    if not isinstance(bandwidth, int) or bandwidth < 0:
        raise SpecParseError("bandwidth must be a nonnegative integer")
    side = []
    for s in sides:
        if s not in ("L", "R"):
            raise SpecParseError(f"side entries must be 'L' or 'R', got {s!r}")
        side.append(LEFT if s == "L" else RIGHT)
    n_max = len(side)
    if n_max == 0:
        raise SpecParseError("explicit spec has no indices")
    f = _entries(rows, n_max, "f_entries")
    off = {nk: v for nk, v in f.items() if nk[0] != nk[1]}
    sys = from_f_entries(tuple(side), off, bandwidth)
    # keep what the file says so validation can flag bad diagonals or a broken skew relation
    f_full = dict(sys.f_entries)
    f_full.update(f)
    fstar_full = dict(sys.fstar_entries)
    if "fstar_entries" in obj:
        fstar_full = {(n, n): 1 for n in range(1, n_max + 1)}
        fstar_full.update(_entries(obj["fstar_entries"], n_max, "fstar_entries"))
    return BandSystem(n_max, bandwidth, tuple(side), _drop_zeros(f_full), _drop_zeros(fstar_full))


def _entries(rows, n_max: int, name: str) -> dict:
    out = {}
    if not isinstance(rows, list):
        raise SpecParseError(f"{name} must be a list of [n, k, value] triples")
    for row in rows:
        if not isinstance(row, list) or len(row) != 3:
            raise SpecParseError(f"{name}: bad entry {row!r}")
        n, k, v = row
        if not all(isinstance(i, int) and not isinstance(i, bool) for i in (n, k)):
            raise SpecParseError(f"{name}: indices must be integers in {row!r}")
        if not (1 <= n <= n_max and 1 <= k <= n_max):
            raise SpecParseError(f"{name}: index out of range 1..{n_max} in {row!r}")
        out[(n, k)] = parse_number(v)
    return out


def _drop_zeros(d: dict) -> dict:
    return {k: v for k, v in d.items() if v != 0}
