import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracles
from conftest import functions
from lowsens import families
from lowsens.dtree import dt
from lowsens.sensitivity import max_sensitivity, sensitivity_vector
from lowsens.treewalk.trees import (InvalidTree, can_shift, classify_tree,
                                    count_sensitive_trees, is_maximal, iter_sensitive_trees,
                                    lex_least_max_tree, make_tree, max_trees,
                                    non_maximal_shift, spanning_tree, tree_sensitivity)


def test_tree_sensitivity_examples():
    for n in range(1, 6):
        assert tree_sensitivity(families.parity(n)) == n
    assert tree_sensitivity(families.address_tree(7)) == 7
    assert tree_sensitivity(families.and_(3)) == 3
    assert tree_sensitivity(families.constant(3, 0)) == 0


def test_address_tree_15():
    f = families.address_tree(15)
    assert tree_sensitivity(f) == 15
    assert dt(f) == 4


def test_count_examples():
    p2 = families.parity(2)
    assert count_sensitive_trees(p2, 1) == 4
    assert count_sensitive_trees(p2, 2) == 4
    assert count_sensitive_trees(families.constant(3, 0), 2) == 0
    p3 = families.parity(3)
    assert [count_sensitive_trees(p3, j) for j in (1, 2, 3)] == [12, 24, 32]


def test_classify_examples():
    f = families.and_(3)
    t = make_tree(f, (0b011, 0b111))
    assert classify_tree(f, t).maximal is False
    assert non_maximal_shift(f, t) == 0
    m = lex_least_max_tree(f)
    assert classify_tree(f, m).orchard is True


def test_make_tree_validates():
    f = families.and_(2)
    with pytest.raises(InvalidTree):
        make_tree(f, (0b00, 0b01))  # edge not sensitive
    with pytest.raises(InvalidTree):
        make_tree(f, (0b00, 0b11))  # not connected
    with pytest.raises(ValueError):
        can_shift(f, make_tree(f, (0b01, 0b11)), 0b10)  # shift on a label


def test_lex_least_max_tree_of_address_tree():
    t = lex_least_max_tree(families.address_tree(3))
    assert t.vertices == (0, 1, 3, 7)


@given(functions(max_n=3))
def test_enumeration_matches_subset_oracle(f):
    for j in range(1, f.n + 1):
        mine = sorted(vs for vs, _ in iter_sensitive_trees(f, size=j))
        assert mine == sorted(oracles.sensitive_trees(f, j))


@given(functions(max_n=3))
def test_ts_matches_oracle(f):
    assert tree_sensitivity(f) == oracles.tree_sens(f)


@given(functions(max_n=4))
def test_trees_are_distinct_and_valid(f):
    seen = set()
    for vs, lm in iter_sensitive_trees(f):
        assert vs not in seen
        seen.add(vs)
        t = make_tree(f, vs)
        assert t.label_mask == lm


@given(functions(max_n=5))
def test_ts_lower_bounds(f):
    ts = tree_sensitivity(f)
    assert ts >= max_sensitivity(f)
    assert ts * (ts + 1) >= 2 * dt(f)


@given(functions(max_n=4), st.data())
def test_pointwise_ts_bounded_by_global(f, data):
    x = data.draw(st.integers(0, f.size - 1))
    assert max_sensitivity(f) >= int(sensitivity_vector(f)[x])
    assert tree_sensitivity(f, x) <= tree_sensitivity(f)
    assert tree_sensitivity(f, x) >= int(sensitivity_vector(f)[x])


@given(functions(max_n=4))
def test_tree_count_bound(f):
    sv = sensitivity_vector(f)
    for j in range(1, f.n + 1):
        assert count_sensitive_trees(f, j) <= 4 ** j * int((sv ** j).sum())


@given(functions(max_n=4))
def test_maximum_trees_are_pairwise_meeting_orchards(f):
    trees = [make_tree(f, vs) for vs in max_trees(f)]
    for t in trees:
        assert classify_tree(f, t).orchard is True
    for a in trees[:8]:
        for b in trees[:8]:
            assert a.label_mask & b.label_mask


@given(functions(max_n=4))
def test_non_orchards_have_a_non_maximal_shift(f):
    for vs, _ in iter_sensitive_trees(f):
        t = make_tree(f, vs)
        c = classify_tree(f, t)
        if not c.orchard:
            v = non_maximal_shift(f, t)
            assert v is not None and not is_maximal(f, t.shifted(v))


@given(functions(max_n=4))
def test_spanning_tree_iff_ts_is_n(f):
    sp = spanning_tree(f)
    assert (sp is not None) == (f.n > 0 and tree_sensitivity(f) == f.n)
    if sp is not None:
        assert sp.size == f.n


def test_orchard_budget_marks_unverified():
    f = families.parity(4)
    t = make_tree(f, (0, 1))
    assert classify_tree(f, t, max_shift_bits=2).to_json()["orchard"] == "unverified"
    assert math.comb(4, 1) == 4
