import math
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from rankone.errors import SpecParseError, TruncationTooShallow, ZeroWeight
from rankone.weights import (Tail, WeightSequenceSpec, parse_number, tail_from_json,
                             weights_from_json)


@pytest.mark.parametrize("tail, converges", [
    (Tail.constant(1), False),
    (Tail.power(1, 1), False),
    (Tail.power(1, Fraction(1, 2)), False),
    (Tail.power(1, 2), True),
    (Tail.power(3, Fraction(101, 100)), True),
    (Tail.geometric(1, Fraction(1, 2)), True),
    (Tail.geometric(1, 1), False),
    (Tail.geometric(2, 3), False),
    (Tail.explicit_l1((1, 2), summable=True, bound=5), True),
    (Tail.explicit_l1((1, 2), summable=False), False),
])
def test_series_test(tail, converges):
    assert tail.converges() is converges


def test_lengths_follow_reciprocals():
    w = WeightSequenceSpec((1, 2), Tail.power(1, 2))
    assert w.length(2) == Fraction(1, 2)
    assert w.length(3) == Fraction(1, 9)
    assert w.weight(3) == 9


def test_geometric_weights_are_powers_of_two():
    w = WeightSequenceSpec((), Tail.geometric(1, Fraction(1, 2)))
    assert [w.weight(k) for k in range(1, 5)] == [2, 4, 8, 16]
    assert w.float_length(2000) == 0.0 or w.float_length(2000) < 1e-300


def test_series_total_geometric():
    w = WeightSequenceSpec((), Tail.geometric(1, Fraction(1, 2)))
    assert w.series_total(2) == pytest.approx(0.5, abs=1e-15)


def test_series_total_matches_partial_sums():
    w = WeightSequenceSpec((1, 4), Tail.power(1, 2))
    partial = math.fsum(1 / k**2 for k in range(2, 200000))
    assert w.series_total(2) == pytest.approx(partial, abs=1e-5)
    assert w.series_total(2) == pytest.approx(math.pi**2 / 6 - 1, abs=1e-12)


def test_divergent_total_is_inf():
    assert WeightSequenceSpec((), Tail.constant(1)).series_total() == math.inf


def test_invalid_tails():
    with pytest.raises(ZeroWeight):
        Tail.constant(0)
    with pytest.raises(SpecParseError):
        Tail.geometric(1, 0)
    with pytest.raises(SpecParseError):
        Tail("harmonic")
    with pytest.raises(ZeroWeight):
        WeightSequenceSpec((1, 0), Tail.constant(1))


def test_explicit_tail_runs_out():
    w = WeightSequenceSpec((), Tail.explicit_l1((1, Fraction(1, 2)), summable=True, bound=2))
    assert w.length(2) == Fraction(1, 2)
    with pytest.raises(TruncationTooShallow):
        w.length(3)


def test_parse_number():
    assert parse_number(3) == Fraction(3)
    assert parse_number("3/4") == Fraction(3, 4)
    assert isinstance(parse_number(0.5), float)
    for bad in (True, "x", None, [1]):
        with pytest.raises(SpecParseError):
            parse_number(bad)


@given(st.sampled_from([
    {"kind": "constant", "c": 2},
    {"kind": "power", "c": 1, "p": "101/100"},
    {"kind": "geometric", "c": "1/3", "q": "1/2"},
    {"kind": "explicit_l1", "values": [1, "1/2"], "summable": True, "bound": 3},
]), st.lists(st.integers(1, 50), max_size=5))
def test_weights_json_round_trip(tail, prefix):
    w = weights_from_json({"prefix": prefix, "tail": tail})
    assert weights_from_json(w.to_json()) == w


def test_tail_json_missing_field():
    with pytest.raises(SpecParseError):
        tail_from_json({"kind": "power"})
