import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracles
from conftest import functions
from lowsens import families
from lowsens.core import CapacityError
from lowsens.dtree import dt
from lowsens.fourier import degree
from lowsens.restrictions import (CSV_HEADER, MEASURES, Restriction, apply, bound_check,
                                  measure_values, restriction_stats, restrictions,
                                  sandwich_rows, space_size)
from lowsens.sensitivity import max_sensitivity
from lowsens.treewalk.trees import tree_sensitivity

AND2 = families.and_(2)
DIRECT = {"sensitivity": max_sensitivity, "degree": degree, "dtdepth": dt,
          "treesens": tree_sensitivity}


def test_counts():
    assert len(list(restrictions(2, 1))) == 4
    assert [r.to_string() for r in restrictions(3, 3)] == ["***"]
    assert space_size(5, 2) == 80


def test_apply_examples():
    assert apply(AND2, Restriction.from_string("*1")) == families.dictator(1, 1)
    assert apply(AND2, Restriction.from_string("*0")) == families.constant(1, 0)
    assert apply(families.parity(3), Restriction.from_string("**1")) == families.parity(2).negate()


def test_restriction_string_round_trip_and_validation():
    r = Restriction.from_string("0*1*")
    assert (r.live, r.fixed) == ((2, 4), 0b0100)
    assert Restriction.from_string(r.to_string()) == r
    with pytest.raises(ValueError):
        Restriction.from_string("0x*")
    with pytest.raises(ValueError):
        Restriction(3, (2,), 0b010)


def test_stats_examples():
    assert restriction_stats(AND2, 1, 1, "sensitivity").probability == Fraction(1, 2)
    assert restriction_stats(AND2, 1, 1, "degree").probability == Fraction(1, 2)


def test_bound_examples():
    r = bound_check(AND2, 1, 1, "sk")
    assert (r.lower, r.observed, r.upper, r.passed) == (Fraction(1, 2), Fraction(1, 2), 1, True)
    r = bound_check(AND2, 1, 1, "ik")
    assert (r.lower, r.observed, r.upper, r.passed) == (Fraction(1, 2),) * 3 + (True,)
    assert r.to_csv_row() == ["2", "1", "1", "ik:degree", "1/2", "1/2", "1/2", "pass"]
    assert len(CSV_HEADER) == 8


def test_conditional_rows_never_fail():
    rows = sandwich_rows(families.majority(5), 3, ("dt_via_ts", "ts_dt", "ts_deg"))
    assert rows and all(r.passed is None for r in rows)
    assert {r.to_csv_row()[-1] for r in rows} == {"conditional"}


def test_capacity_and_argument_errors():
    with pytest.raises(CapacityError):
        list(restrictions(30, 15))
    with pytest.raises(ValueError):
        bound_check(AND2, 1, 2, "sk")
    with pytest.raises(ValueError):
        bound_check(AND2, 1, 1, "nope")
    with pytest.raises(ValueError):
        list(restrictions(3, 1, "sample", 5))


@given(st.integers(0, 5), st.data())
def test_enumeration_matches_oracle(n, data):
    k = data.draw(st.integers(0, n))
    mine = sorted((r.to_string(), r.live, r.fixed) for r in restrictions(n, k))
    assert mine == sorted(oracles.restrictions(n, k))
    assert len(mine) == space_size(n, k)


@given(functions(min_n=1, max_n=5), st.data())
def test_apply_matches_oracle(f, data):
    k = data.draw(st.integers(0, f.n))
    for r in restrictions(f.n, k):
        assert apply(f, r).bits.tolist() == oracles.restricted_bits(f, r.live, r.fixed)


@given(functions(min_n=1, max_n=5), st.data())
def test_vectorised_measures_match_direct(f, data):
    k = data.draw(st.integers(1, min(f.n, 4)))
    for m in MEASURES:
        vals = measure_values(f, k, m)
        assert vals.tolist() == [DIRECT[m](apply(f, r)) for r in restrictions(f.n, k)]


def test_direct_path_above_table_arity():
    f = families.random_function(6, 4)
    vals = measure_values(f, 5, "dtdepth")
    assert vals.tolist() == [dt(apply(f, r)) for r in restrictions(6, 5)]


@given(functions(min_n=1, max_n=4))
def test_all_sandwiches_pass(f):
    rows = sandwich_rows(f)
    assert rows and all(r.passed for r in rows)
    for r in rows:
        assert (r.observed * space_size(f.n, r.k)).denominator == 1


@given(functions(min_n=1, max_n=5), st.data())
def test_depth_dominates_degree_and_sensitivity(f, data):
    k = data.draw(st.integers(1, f.n))
    d = measure_values(f, k, "dtdepth")
    assert np.all(d >= measure_values(f, k, "degree"))
    assert np.all(d >= measure_values(f, k, "sensitivity"))


def test_sampled_values_match_restrictions_and_seed():
    f = families.majority(7)
    rhos = list(restrictions(7, 3, "sample", 50, 11))
    vals = measure_values(f, 3, "dtdepth", "sample", 50, 11)
    assert vals.tolist() == [dt(apply(f, r)) for r in rhos]
    assert rhos == list(restrictions(7, 3, "sample", 50, 11))


def test_sampled_estimate_within_five_standard_errors():
    f = families.majority(9)
    exact = restriction_stats(f, 3, 2, "sensitivity")
    est = restriction_stats(f, 3, 2, "sensitivity", "sample", 4000, 5)
    assert not est.exact
    assert abs(float(est.probability) - float(exact.probability)) <= 5 * est.stderr + 1e-12
    assert math.isclose(est.to_json()["estimate"], float(est.probability))
