from fractions import Fraction

import numpy as np
from hypothesis import given
from hypothesis import strategies as st

import oracles
from conftest import functions
from lowsens import families
from lowsens.fourier import (deg_epsilon, degree, fwht, influence_falling_moment,
                             influence_moments, inverse, level_l1, level_weights,
                             spectral_entropy, spectrum, tail_weight, total_influence)
from lowsens.sensitivity import sensitivity_moment

AND2 = families.and_(2)
AND3 = families.and_(3)
PAR3 = families.parity(3)
CONST = families.constant(3, 0)


def test_and2_scaled_spectrum():
    assert spectrum(AND2).coeffs.tolist() == [2, 2, 2, -2]


def test_degree_examples():
    assert degree(AND2) == 2
    assert degree(CONST) == 0


def test_moment_examples():
    r1, r2 = influence_moments(AND2, 1), influence_moments(AND2, 2)
    assert r1.ik == r1.sk == 1
    assert r2.ik == r2.sk == Fraction(3, 2)
    r3 = influence_moments(AND3, 3)
    assert r3.ik == Fraction(54, 16) and r3.sk == Fraction(30, 8)
    assert r3.ik != r3.sk


def test_level_weight_examples():
    assert level_weights(AND2) == [Fraction(1, 4), Fraction(1, 2), Fraction(1, 4)]
    assert level_weights(PAR3) == [0, 0, 0, 1]
    assert level_weights(CONST) == [1, 0, 0, 0]


def test_deg_epsilon_example():
    assert deg_epsilon(AND2, Fraction(3, 10)) == 2
    assert tail_weight(AND2, 2) == Fraction(1, 4)
    assert tail_weight(AND2, 1) == Fraction(3, 4)


def test_level_l1_examples():
    assert level_l1(AND2, 1) == 1
    assert level_l1(PAR3, 3) == 1
    assert level_l1(CONST, 1) == 0


def test_entropy_examples():
    assert abs(spectral_entropy(AND2) - 2.0) < 1e-12
    assert spectral_entropy(CONST) == 0.0


def test_fwht_matches_hadamard_matrix():
    rng = np.random.default_rng(3)
    v = rng.integers(-5, 5, size=16)
    x = np.arange(16)
    H = 1 - 2 * (np.array([[bin(a & b).count("1") & 1 for b in x] for a in x]))
    assert np.array_equal(fwht(v), H @ v)


@given(functions(max_n=4))
def test_spectrum_matches_direct_summation(f):
    direct = oracles.spectrum(f)
    sp = spectrum(f)
    assert [sp.coefficient(S) for S in range(f.size)] == direct


@given(functions(max_n=6))
def test_parseval_and_inverse(f):
    assert sum(level_weights(f)) == 1
    assert inverse(spectrum(f)) == f


@given(functions(max_n=6))
def test_first_two_moments_equal_sensitivity_moments(f):
    for k in (1, 2):
        assert influence_moments(f, k).ik == sensitivity_moment(f, k)
    assert total_influence(f) == sensitivity_moment(f, 1)


@given(functions(max_n=4), st.integers(1, 4))
def test_moments_match_oracle(f, k):
    r = influence_moments(f, k)
    assert r.ik == oracles.infl_moment(f, k)
    assert r.sk == oracles.sens_moment(f, k)


@given(functions(max_n=5), st.fractions(0, 1), st.fractions(0, 1))
def test_deg_epsilon_non_increasing(f, a, b):
    lo, hi = sorted((a, b))
    assert deg_epsilon(f, hi) <= deg_epsilon(f, lo)


@given(functions(max_n=5), st.integers(1, 3))
def test_falling_moment_bounded_by_moment(f, k):
    assert 0 <= influence_falling_moment(f, k) <= influence_moments(f, k).ik
