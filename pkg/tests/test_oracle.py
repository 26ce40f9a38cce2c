from fractions import Fraction

import pytest

from rankone.errors import InstanceTooLarge
from rankone.oracle import (check_size, direct_degrees, direct_mass, positive_cycles,
                            ray_partial_sums, simple_cycles, simple_path_distances)


def test_simple_cycles_triangle_and_square():
    arcs = [(1, 2), (2, 3), (3, 1), (3, 4), (4, 1)]
    assert sorted(simple_cycles(arcs)) == [[1, 2, 3], [1, 2, 3, 4]]


def test_positive_cycles_ignore_zero_arcs():
    assert positive_cycles({(1, 2): 1, (2, 1): 0}) == []
    assert positive_cycles({(1, 2): 1, (2, 1): 2}) == [[1, 2]]


def test_path_distances_with_and_without_pruning():
    adj = {0: [1, 2], 1: [0, 3], 2: [0, 3], 3: [1, 2]}
    lengths = {(0, 1): 3, (1, 0): 3, (0, 2): 1, (2, 0): 1, (1, 3): 1, (3, 1): 1, (2, 3): 1, (3, 2): 1}
    for prune in (True, False):
        d = simple_path_distances(adj, lambda u, v: lengths[(u, v)], 0, prune)
        assert d == {0: 0, 1: 3, 2: 1, 3: 2}


def test_direct_degrees_and_mass():
    values = {(0, 1): Fraction(1, 2), (1, 2): Fraction(1, 2), (2, 1): Fraction(-1, 2)}
    assert direct_degrees(values, [0, 1, 2]) == {0: Fraction(1, 2), 1: 0, 2: Fraction(-1, 2)}
    assert direct_mass(values, lambda u, v: 2) == 2


def test_size_limits():
    check_size(14)
    check_size(22, lw_depth=20)
    with pytest.raises(InstanceTooLarge):
        check_size(15)
    with pytest.raises(InstanceTooLarge):
        check_size(40, lw_depth=38)


def test_ray_partial_sums():
    assert ray_partial_sums([1.0, 0.5, 0.25]) == [0.0, 1.0, 1.5, 1.75]
