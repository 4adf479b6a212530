import pytest
from hypothesis import given

import oracles
from conftest import functions
from lowsens import families
from lowsens.core import dim
from lowsens.dtree import dt
from lowsens.treewalk.trees import spanning_tree, tree_sensitivity
from lowsens.treewalk.walks import (Walk, WalkError, full_dim_proper_walk, is_proper_walk,
                                    min_proper_walk, proper_walk_3n, spanning_tree_walk,
                                    tree_walk, walk_length_bound)


def test_is_proper_walk_example():
    f = families.and_(2)
    assert not is_proper_walk(f, Walk.from_vertices([0b00, 0b10]))
    assert is_proper_walk(f, Walk.from_vertices([0b11, 0b10, 0b11, 0b01]))
    with pytest.raises(WalkError):
        is_proper_walk(f, Walk(0, (3,)))
    with pytest.raises(WalkError):
        Walk.from_vertices([0, 3])


def test_full_dim_walk_examples():
    w = full_dim_proper_walk(families.parity(3))
    assert is_proper_walk(families.parity(3), w) and w.dimension == 3 and w.length <= 6
    f = families.and_(3)
    w = full_dim_proper_walk(f)
    assert is_proper_walk(f, w) and w.dimension == 3


def test_3n_walk_examples():
    f = families.parity(2)
    w = proper_walk_3n(f)
    assert is_proper_walk(f, w) and w.dimension == 2 and w.length <= 6
    g = families.and_(3)
    w = proper_walk_3n(g)
    assert is_proper_walk(g, w) and w.dimension == 3 and w.length <= 9
    with pytest.raises(ValueError):
        proper_walk_3n(families.address_tree(3))


def test_min_walk_examples():
    assert min_proper_walk(families.parity(2)) == 2
    assert min_proper_walk(families.and_(3)) == 4
    assert min_proper_walk(families.constant(3, 0)) is None
    assert min_proper_walk(families.hadamard_gadget(8)) == 11


def test_walk_json_round_trip():
    w = Walk(5, (1, 3, 1))
    assert Walk.from_json(w.to_json()) == w
    assert w.vertices() == [5, 4, 0, 1]


@given(functions(min_n=1, max_n=5))
def test_constructions(f):
    if dt(f) == f.n:
        w = proper_walk_3n(f)
        assert oracles.proper(f, w.start, w.flips)
        assert w.dimension == f.n and w.length <= 3 * f.n
    if dim(f) == f.n:
        w = full_dim_proper_walk(f)
        assert oracles.proper(f, w.start, w.flips)
        assert w.dimension == f.n and w.length <= walk_length_bound(f.n)


@given(functions(min_n=1, max_n=4))
def test_spanning_tree_walk(f):
    if tree_sensitivity(f) == f.n:
        w = spanning_tree_walk(f)
        assert is_proper_walk(f, w) and w.dimension == f.n and w.length <= 2 * f.n
        assert tree_walk(spanning_tree(f)).length == 2 * f.n


@given(functions(min_n=1, max_n=3))
def test_min_walk_is_a_lower_bound_on_constructions(f):
    m = min_proper_walk(f)
    if dim(f) == f.n:
        assert m is not None and f.n <= m <= full_dim_proper_walk(f).length
    else:
        assert m is None
