import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import functions
from lowsens import families
from lowsens.core import (BooleanFunction, CapacityError, build, compress, depends_on, dim,
                          dumps_table, evaluate, from_hex, loads_table, max_arity, read_table,
                          restrict_coord, set_max_arity, subfunction, support_dims, to_hex,
                          write_table)


def test_build_identity_and_and2():
    f = build(1, [0, 1])
    assert (evaluate(f, 0), evaluate(f, 1)) == (1, -1)
    g = build(2, [0, 0, 0, 1])
    assert [g(x) for x in range(4)] == [1, 1, 1, -1]


def test_build_rejects_wrong_length_and_values():
    with pytest.raises(ValueError):
        build(2, [0, 1, 0])
    with pytest.raises(ValueError):
        build(1, [0, 2])


def test_capacity_error_names_the_cap():
    with pytest.raises(CapacityError) as exc:
        BooleanFunction(max_arity() + 1, [])
    assert exc.value.cap == max_arity()


def test_set_max_arity_is_configurable():
    old = max_arity()
    try:
        set_max_arity(3)
        with pytest.raises(CapacityError):
            families.parity(4)
    finally:
        set_max_arity(old)
    assert families.parity(4).n == 4


def test_evaluate_examples():
    par2, and2 = families.parity(2), families.and_(2)
    assert evaluate(par2, 0b01) == -1  # x = 10 in coordinate order
    assert evaluate(and2, 0b11) == -1
    assert evaluate(and2, 0b10) == 1
    with pytest.raises(IndexError):
        evaluate(and2, 4)


def test_support_dims_examples():
    assert support_dims(families.parity(3)) == {1, 2, 3}
    assert support_dims(families.constant(3, 0)) == frozenset()
    assert support_dims(families.dictator(3, 2)) == {2}


def test_hex_round_trip_known_value():
    f = families.and_(2)
    assert to_hex(f) == "8"
    assert dumps_table(f) == "n=2\n8\n"
    assert loads_table("n=2\n8\n") == f
    with pytest.raises(ValueError):
        from_hex(1, "4")  # padding bit set


def test_table_file_round_trip(tmp_path):
    f = families.majority(5)
    p = tmp_path / "maj.tt"
    write_table(f, p)
    assert read_table(p) == f


@given(functions(max_n=6))
def test_table_text_round_trip_is_bit_exact(f):
    g = loads_table(dumps_table(f))
    assert g == f and np.array_equal(g.bits, f.bits)
    assert BooleanFunction.from_int(f.n, f.to_int()) == f


@given(functions(max_n=5))
def test_values_are_signs_and_support_matches_dim(f):
    assert set(np.unique(f.values)) <= {-1, 1}
    sd = support_dims(f)
    assert len(sd) == dim(f) <= f.n
    assert (dim(f) == 0) == f.is_constant()
    for i in range(1, f.n + 1):
        expect = any(f.bits[x] != f.bits[x ^ (1 << (i - 1))] for x in range(f.size))
        assert depends_on(f, i) == expect


@given(functions(min_n=1, max_n=5), st.data())
def test_restrict_coord_matches_pointwise_definition(f, data):
    i = data.draw(st.integers(1, f.n))
    b = data.draw(st.integers(0, 1))
    g = restrict_coord(f, i, b)
    for y in range(g.size):
        low = y & ((1 << (i - 1)) - 1)
        x = low | (b << (i - 1)) | ((y >> (i - 1)) << i)
        assert g.bits[y] == f.bits[x]


@given(functions(max_n=5))
def test_compress_keeps_relevant_coordinates(f):
    g = compress(f)
    assert g.n == dim(f) == dim(g)


def test_subfunction_orders_live_coordinates():
    f = families.dictator(3, 3)
    g = subfunction(f, [1, 3], 0)
    assert g.bits.tolist() == [0, 0, 1, 1]
