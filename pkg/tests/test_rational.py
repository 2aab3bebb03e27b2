"""Rational points and additive characters."""

import cmath
import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cuspsums.rational import e, e_k, make_rational_point


def test_examples():
    assert make_rational_point(3, 7).h_bar == 5
    assert make_rational_point(0, 1) == make_rational_point(0, 1)
    assert make_rational_point(0, 1).h_bar == 0
    p = make_rational_point(2, 4)
    assert (p.h, p.k, p.h_bar) == (1, 2, 1)


def test_idempotent_on_reduced():
    p = make_rational_point(3, 7)
    q = make_rational_point(p.h, p.k)
    assert p == q


def test_validation():
    with pytest.raises(ValueError):
        make_rational_point(1, 0)
    with pytest.raises(ValueError):
        make_rational_point(7, 7)
    with pytest.raises(ValueError):
        make_rational_point(-1, 7)


def test_inverse_dense_small_k():
    for k in range(1, 513):
        for h in range(k):
            if math.gcd(h, k) != 1:
                continue
            p = make_rational_point(h, k)
            if k > 1:
                assert (p.h * p.h_bar) % p.k == 1


@settings(max_examples=300, deadline=None)
@given(st.integers(2, 10_000))
def test_inverse_sampled_large_k(k):
    for h in (1, k - 1, max(1, k // 3) | 1):
        if math.gcd(h, k) != 1:
            continue
        p = make_rational_point(h, k)
        assert (p.h * p.h_bar) % p.k == 1


def test_e_special_values():
    assert e(0.0) == 1.0 + 0.0j
    assert abs(e(0.5) - (-1.0)) <= 1e-15
    assert abs(e(0.25) - 1j) <= 1e-15
    # argument reduction keeps accuracy for large x
    assert abs(e(1e9 + 0.25) - 1j) <= 1e-12


def test_e_rejects_nonfinite():
    for bad in (math.inf, -math.inf, math.nan):
        with pytest.raises(ValueError):
            e(bad)


def test_e_k_examples():
    assert abs(e_k(1, 2) - (-1.0)) <= 1e-15
    assert e_k(7, 7) == 1.0 + 0.0j
    assert e_k(0, 5) == 1.0 + 0.0j
    # reduction of a negative twisted argument: -15 = -3*5 with h_bar(3,7)=5
    assert abs(e_k(-15, 7) - e(6 / 7)) <= 1e-15
    with pytest.raises(ValueError):
        e_k(1, 0)


def test_e_k_periodicity_exact():
    for a in range(-20, 20):
        assert e_k(a, 6) == e_k(a + 6, 6)


@settings(max_examples=200, deadline=None)
@given(st.integers(-10**6, 10**6), st.integers(-10**6, 10**6), st.integers(1, 5000))
def test_character_property(a, b, k):
    assert abs(e_k(a, k) * e_k(b, k) - e_k(a + b, k)) <= 1e-12


@settings(max_examples=100, deadline=None)
@given(st.integers(-10**6, 10**6), st.integers(1, 5000))
def test_conjugation(a, k):
    assert abs(e_k(-a, k) - e_k(a, k).conjugate()) <= 1e-12


def test_unit_modulus():
    for x in (0.1, 0.37, 123456.789, -9876.001):
        assert abs(abs(e(x)) - 1.0) <= 1e-15
