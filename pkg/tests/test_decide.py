import dataclasses
import math
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from rankone.decide import (ExplicitFamily, Kind, LarsonWogenFamily, cross_validate, decide,
                            frontier_distance_profile, series_partial_sums)
from rankone.errors import CertificateFailure, UnsupportedTail
from rankone.graph import LazyGraph
from rankone.layers import RayWitness
from rankone.system import LEFT, RIGHT, from_f_entries
from rankone.weights import Tail, WeightSequenceSpec

F = Fraction


def lw(tail):
    return LarsonWogenFamily(WeightSequenceSpec((), tail))


CATALOG = {
    "1": (Tail.constant(1), Kind.DENSE),
    "k": (Tail.power(1, 1), Kind.DENSE),
    "k^2": (Tail.power(1, 2), Kind.NOT_DENSE),
    "2^k": (Tail.geometric(1, F(1, 2)), Kind.NOT_DENSE),
    "k^1.01": (Tail.power(1, F(101, 100)), Kind.NOT_DENSE),
}


@pytest.mark.parametrize("name", list(CATALOG))
def test_lw_catalog_verdicts(name):
    tail, kind = CATALOG[name]
    v = decide(lw(tail))
    assert v.kind is kind
    assert v.certificate["method"] == "series"
    assert (v.ray is not None) == (kind is Kind.NOT_DENSE)


@pytest.mark.parametrize("name", ["k^2", "2^k", "k^1.01"])
def test_witness_matches_partial_sum_oracle(name):
    fam = lw(CATALOG[name][0])
    v = decide(fam)
    ref = series_partial_sums(fam.weights, 50)
    got = v.ray.partial_lengths
    assert len(got) == 51
    assert max(abs(float(a) - b) for a, b in zip(got, ref)) <= 1e-9
    assert all(float(x) <= v.ray.bound + 1e-12 for x in got)


def test_geometric_profile_converges():
    prof = frontier_distance_profile(lw(Tail.geometric(1, F(1, 2))).float_graph(), 60)
    expected = [math.fsum(2.0**-k for k in range(2, n + 2)) for n in range(1, 61)]
    assert list(prof) == pytest.approx(expected, abs=1e-15)
    assert prof[-1] == pytest.approx(0.5, abs=1e-15)


def test_unit_profile_is_depth():
    prof = frontier_distance_profile(lw(Tail.constant(1)).float_graph(), 200)
    assert list(prof) == [float(n) for n in range(1, 201)]


def test_branching_profile_bounded_by_summable_branch():
    # root 0 with a unit-length branch 1, 3, 5, ... and a halving branch 2, 4, 6, ...
    def nbrs(v):
        if v == 0:
            return [(1, 1.0), (2, 0.5)]
        k = (v + 1) // 2
        step = 1.0 if v % 2 else 0.5 ** (k + 1)
        back = 1.0 if v % 2 else 0.5**k
        prev = v - 2 if v > 2 else 0
        return [(prev, back), (v + 2, step)]

    prof = frontier_distance_profile(LazyGraph(nbrs, 0), 40)
    assert max(prof) <= 1.0
    assert list(prof) == sorted(prof)
    assert prof.argmins[5] == 12


def test_numeric_mode():
    assert decide(lw(Tail.constant(1)), mode="numeric").certificate["threshold_crossed_at"] == 1001
    assert decide(lw(Tail.power(1, 1)), mode="numeric").kind is Kind.INCONCLUSIVE
    v = decide(lw(Tail.geometric(1, F(1, 2))), mode="numeric")
    assert v.kind is Kind.NOT_DENSE
    assert v.ray.total <= v.ray.bound + 1e-12
    assert max(v.profile) <= v.ray.bound + 1e-12


def test_harmonic_profile_is_logarithmic():
    v = decide(lw(Tail.power(1, 1)), mode="numeric")
    # H_{10001} - 1 is about 8.79
    assert v.profile[-1] == pytest.approx(math.fsum(1 / k for k in range(2, 10002)), rel=1e-12)
    assert v.profile[-1] < 1000


def test_explicit_family():
    sys = from_f_entries([LEFT, RIGHT, LEFT, RIGHT], {(1, 2): 2, (3, 2): 1, (3, 4): 1}, 1)
    fam = ExplicitFamily(sys)
    with pytest.raises(UnsupportedTail):
        decide(fam, mode="analytic")
    v = decide(fam, depth=10)
    assert v.kind is Kind.INCONCLUSIVE
    assert len(v.profile) == 3


def test_decide_argument_checks():
    fam = lw(Tail.constant(1))
    for kwargs in ({"depth": 1}, {"threshold": 0}, {"mode": "exact"}):
        with pytest.raises(ValueError):
            decide(fam, **kwargs)


def test_cross_validate_geometric():
    fam = lw(Tail.geometric(1, F(1, 2)))
    cv = cross_validate(fam, decide(fam))
    assert cv.trace == 1
    assert cv.defect <= 1e-10
    assert cv.mass <= 1 + 2
    assert (cv.d_source, cv.d_sink) == (1, 0)
    assert cv.extracted.total <= cv.extracted.bound


def test_cross_validate_rejects_dense():
    fam = lw(Tail.constant(1))
    with pytest.raises(ValueError):
        cross_validate(fam, decide(fam))


def test_cross_validate_catches_broken_ray():
    fam = lw(Tail.geometric(1, F(1, 2)))
    v = decide(fam)
    bad = RayWitness((1, 2, 4, 5), (0, 0.25, 0.5, 0.6), v.ray.bound, 3)
    with pytest.raises(CertificateFailure):
        cross_validate(fam, dataclasses.replace(v, ray=bad))


def test_cross_validate_needs_frontier_ray():
    fam = lw(Tail.geometric(1, F(1, 2)))
    v = decide(fam)
    with pytest.raises(CertificateFailure):
        cross_validate(fam, v, depth=60)  # the ray stops inside the truncation


tails = st.one_of(
    st.builds(Tail.constant, st.fractions(1, 5)),
    st.builds(Tail.power, st.fractions(1, 5), st.fractions(F(1, 2), 3)),
    st.builds(Tail.geometric, st.fractions(1, 5), st.fractions(F(1, 4), F(7, 4))),
)


@settings(max_examples=30)
@given(tails)
def test_verdict_follows_series_test(tail):
    v = decide(lw(tail), depth=300, witness_depth=20)
    assert (v.kind is Kind.NOT_DENSE) == tail.converges()
    # never both a ray and a divergence certificate
    assert not (v.ray is not None and v.kind is Kind.DENSE)
    assert list(v.profile) == sorted(v.profile)
    if v.kind is Kind.NOT_DENSE:
        assert max(v.profile) <= v.ray.bound * (1 + 1e-12)
        cv = cross_validate(lw(tail), v)
        assert cv.trace == 1
