import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from rankone.bridge import (OperatorMatrix, annihilation_check, flow_to_operator,
                            operator_from_json, operator_to_flow)
from rankone.errors import InconsistentOperator
from rankone.flows import PseudoFlow, flow_from_ray, flow_stats
from rankone.generators import random_lw_flow, random_network_flow
from rankone.graph import network_for
from rankone.system import LEFT, RIGHT, from_f_entries, make_larson_wogen, random_b_class
from rankone.weights import Tail, WeightSequenceSpec

F = Fraction


@pytest.mark.parametrize("a", [F(1), F(3), F(5, 2)])
def test_short_path_flow_operator(a):
    sys = make_larson_wogen(WeightSequenceSpec((), Tail.constant(1 / a)), 6)
    net = network_for(sys)
    flow = flow_from_ray(net, [net.source, 1, 2, net.sink])
    T = flow_to_operator(net, flow)
    # out of the source at v_1, across (v_1, v_2), into the sink at v_2
    assert T.entries == {(1, 1): 1, (1, 2): -1 / a, (2, 2): -1}
    assert T.trace == 0
    st_ = flow_stats(net, flow)
    assert T.trace == st_.d[net.source] + st_.d[net.sink]
    assert T.l1_norm == st_.mass == 2 + 1 / a
    assert operator_to_flow(net, T) == flow


def test_zero_flow_zero_operator():
    net = network_for(make_larson_wogen(WeightSequenceSpec(), 6))
    T = flow_to_operator(net, PseudoFlow())
    assert T.entries == {} and T.trace == 0
    assert operator_to_flow(net, OperatorMatrix({})) == PseudoFlow()


def test_escaping_ray_has_unit_trace():
    w = WeightSequenceSpec((), Tail.geometric(1, F(1, 2)))
    sys = make_larson_wogen(w, 20)
    net = network_for(sys)
    T = flow_to_operator(net, flow_from_ray(net, [0] + list(range(1, 21))))
    assert T.trace == 1
    assert annihilation_check(sys, T) == 0


def test_entry_off_support_is_rejected():
    sys = from_f_entries([LEFT, RIGHT, LEFT, RIGHT], {(1, 2): 2, (3, 4): 1}, 1)
    net = network_for(sys)
    with pytest.raises(InconsistentOperator):
        operator_to_flow(net, OperatorMatrix({(3, 2): F(1)}))  # <f_3, e_2> = 0
    with pytest.raises(InconsistentOperator):
        operator_to_flow(net, OperatorMatrix({(2, 1): F(1)}))  # right row, left column


def test_identity_operator_defect_one():
    sys = make_larson_wogen(WeightSequenceSpec(), 10)
    eye = OperatorMatrix({(n, n): 1 for n in range(1, 11)})
    assert annihilation_check(sys, eye) == 1
    assert annihilation_check(sys, OperatorMatrix({})) == 0


def test_operator_json_round_trip():
    T = OperatorMatrix({(1, 1): F(1, 3), (1, 2): -2, (2, 2): 0.5}, 1)
    dump = T.to_json()
    assert dump["entries"] == [[1, 1, "1/3"], [1, 2, -2], [2, 2, 0.5]]
    assert operator_from_json(dump).entries == T.entries


@given(st.integers(0, 2**32 - 1))
def test_round_trip_on_lw_rationals(seed):
    sys, inst = random_lw_flow(random.Random(seed), depth=16)
    T = flow_to_operator(inst.net, inst.flow)
    st_ = flow_stats(inst.net, inst.flow)
    assert T.trace == st_.d[inst.net.source] + st_.d[inst.net.sink]
    assert T.l1_norm == st_.mass
    assert annihilation_check(sys, T) == 0
    assert operator_to_flow(inst.net, T) == inst.flow


@given(st.integers(0, 2**32 - 1), st.integers(1, 5))
def test_annihilation_on_random_b_class(seed, b):
    rng = random.Random(seed)
    sys = random_b_class(rng, 40, b)
    inst = random_network_flow(rng, sys)
    T = flow_to_operator(inst.net, inst.flow)
    assert annihilation_check(sys, T) <= 1e-12
    st_ = flow_stats(inst.net, inst.flow)
    assert abs(T.trace - (st_.d[inst.net.source] + st_.d[inst.net.sink])) <= 1e-12
    assert abs(T.l1_norm - st_.mass) <= 1e-9 * max(1, st_.mass)
