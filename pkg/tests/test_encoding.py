import math
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import functions
from lowsens import families
from lowsens.dtree import dt
from lowsens.restrictions import Restriction, apply, restrictions
from lowsens.sensitivity import max_sensitivity
from lowsens.treewalk.encoding import (DecodeError, WalkEncoding, decode_walk, encode_walk,
                                       encoded_walk)
from lowsens.treewalk.walks import is_proper_walk


def test_parity2_encoding():
    f = families.parity(2)
    rho = Restriction.from_string("**")
    enc = encode_walk(f, rho)
    assert enc.to_json() == {"v0": 0, "K": [2], "b": "1010", "c": "00", "beta": [1, 2]}
    assert len(enc.K) == 1 and len(enc.b) == 4 and len(enc.c) == 2 and len(enc.beta) == 2
    assert decode_walk(f, enc, 2) == rho
    assert WalkEncoding.from_json(enc.to_json()) == enc


def test_decode_rejects_bad_encodings():
    f = families.parity(2)
    enc = encode_walk(f, Restriction.from_string("**"))
    bad = WalkEncoding(enc.v0, enc.K, enc.b, enc.c, (1, 9))
    with pytest.raises(DecodeError):
        decode_walk(f, bad, 2)
    with pytest.raises(DecodeError):
        WalkEncoding.from_json({"v0": 0})


def test_non_qualifying_restriction_is_rejected():
    with pytest.raises(ValueError):
        encode_walk(families.and_(3), Restriction.from_string("0**"))


def _qualifying(f, k):
    return [rho for rho in restrictions(f.n, k) if dt(apply(f, rho)) == k]


def test_exhaustive_round_trip_n4_k2():
    for seed in range(20):
        f = families.random_function(4, seed)
        rhos = _qualifying(f, 2)
        encs = [encode_walk(f, r) for r in rhos]
        assert [decode_walk(f, e, 2) for e in encs] == rhos
        assert len(set(encs)) == len(encs)


@given(functions(min_n=2, max_n=5), st.integers(1, 3))
def test_bijection_and_counting_bound(f, k):
    if k > f.n:
        return
    rhos = _qualifying(f, k)
    encs = set()
    for rho in rhos:
        enc = encode_walk(f, rho)
        assert decode_walk(f, enc, k) == rho
        w = encoded_walk(f, rho)
        assert is_proper_walk(f, w) and w.length <= 3 * k
        assert len(enc.K) <= k and len(enc.beta) == k
        encs.add(enc)
    assert len(encs) == len(rhos)
    s = max_sensitivity(f)
    assert len(rhos) <= 2 ** f.n * (16 * s) ** k
    prob = Fraction(len(rhos), math.comb(f.n, k) * 2 ** (f.n - k))
    assert prob <= Fraction((32 * s) ** k, math.comb(f.n, k))
