from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from phlab.intpoly import (
    IntPoly,
    count_unit_modulus_roots,
    cyclotomic,
    cyclotomic_indices,
    divmod_exact,
    factor_monic,
    halve_palindromic,
    is_irreducible,
    mignotte_bound,
    poly_gcd,
    sturm_count,
    totient,
)

from oracles import kronecker_reducible

QUARTIC = IntPoly((1, -1, -1, -1, 1))


def test_repr_and_degree():
    assert QUARTIC.degree == 4
    assert repr(QUARTIC) == "IntPoly('x^4 - x^3 - x^2 - x + 1')"
    assert IntPoly((0,)).is_zero


small_polys = st.lists(st.integers(-5, 5), min_size=1, max_size=6).map(lambda c: IntPoly(tuple(c)))


@given(small_polys, small_polys)
@settings(max_examples=200, deadline=None)
def test_mul_degree_and_evaluation(a, b):
    prod = a * b
    if a.is_zero or b.is_zero:
        assert prod.is_zero
    else:
        assert prod.degree == a.degree + b.degree
    for x in (-2, 0, 3):
        assert prod(x) == a(x) * b(x)


@given(small_polys, small_polys)
@settings(max_examples=200, deadline=None)
def test_divmod_roundtrip(a, b):
    if b.is_zero or not b.is_monic:
        return
    q, r = divmod_exact(a * b, b)
    assert r.is_zero and q == a


def test_divmod_inexact_raises():
    with pytest.raises(ValueError):
        divmod_exact(IntPoly((1, 0, 1)), IntPoly((1, 2)))


def test_cyclotomic_table():
    assert cyclotomic(1) == IntPoly((-1, 1))
    assert cyclotomic(2) == IntPoly((1, 1))
    assert cyclotomic(3) == IntPoly((1, 1, 1))
    assert cyclotomic(4) == IntPoly((1, 0, 1))
    assert cyclotomic(12) == IntPoly((1, 0, -1, 0, 1))
    # product over divisors reconstructs x^n - 1
    for n in (6, 10, 12):
        prod = IntPoly((1,))
        for d in range(1, n + 1):
            if n % d == 0:
                prod = prod * cyclotomic(d)
        assert prod == IntPoly((-1,) + (0,) * (n - 1) + (1,))


def test_totient_and_index_set():
    assert [totient(n) for n in (1, 2, 6, 12, 13)] == [1, 1, 2, 4, 12]
    idx = cyclotomic_indices(4)
    assert idx == [1, 2, 3, 4, 5, 6, 8, 10, 12]
    assert all(totient(n) <= 16 for n in cyclotomic_indices(16))


def test_irreducibility_examples():
    ok, factor = is_irreducible(QUARTIC)
    assert ok and factor is None
    ok, factor = is_irreducible(IntPoly((1, -2, -1, -2, 1)))
    assert not ok
    q, r = divmod_exact(IntPoly((1, -2, -1, -2, 1)), factor)
    assert r.is_zero
    ok, _ = is_irreducible(IntPoly((1, -3, 1)))
    assert ok
    with pytest.raises(ValueError):
        is_irreducible(IntPoly((5,)))


def test_factor_block_diagonal_square():
    p = QUARTIC * QUARTIC
    factors = factor_monic(p)
    assert factors == [(QUARTIC, 2)]


def test_mignotte_bound_contains_true_factors():
    p = IntPoly((1, -2, -1, -2, 1))
    b = mignotte_bound(p, 2)
    for q, _ in factor_monic(p):
        assert all(abs(c) <= b for c in q.coeffs)


def test_sturm_counts():
    # y^2 - y - 3: roots (1 +- sqrt(13))/2, one inside (-2, 2)
    assert sturm_count(IntPoly((-3, -1, 1)), Fraction(-2), Fraction(2)) == 1
    # wilkinson-ish: (y-1)(y+1) both inside
    assert sturm_count(IntPoly((-1, 0, 1)), Fraction(-2), Fraction(2)) == 2
    with pytest.raises(ValueError):
        sturm_count(IntPoly((-4, 0, 1)), Fraction(-2), Fraction(2))


def test_halve_palindromic():
    assert halve_palindromic(QUARTIC) == IntPoly((-3, -1, 1))
    with pytest.raises(ValueError):
        halve_palindromic(IntPoly((1, 2, 1, 1)))


def test_unit_circle_counts():
    assert count_unit_modulus_roots(QUARTIC) == 2
    assert count_unit_modulus_roots(IntPoly((1, -3, 1))) == 0
    assert count_unit_modulus_roots(IntPoly((1, -2, 1))) == 2  # (x-1)^2
    assert count_unit_modulus_roots(IntPoly((1, 0, 1))) == 2  # x^2 + 1
    assert count_unit_modulus_roots(QUARTIC * IntPoly((1, -3, 1))) == 2


def test_gcd_primitive():
    g = poly_gcd(QUARTIC * IntPoly((1, 1)), IntPoly((1, 1)) * IntPoly((1, -3, 1)))
    assert g == IntPoly((1, 1))


@given(st.lists(st.integers(-3, 3), min_size=2, max_size=4))
@settings(max_examples=300, deadline=None)
def test_irreducibility_matches_kronecker_oracle(tail):
    p = IntPoly(tuple(tail) + (1,))
    ok, _ = is_irreducible(p)
    assert ok == (not kronecker_reducible(p))
