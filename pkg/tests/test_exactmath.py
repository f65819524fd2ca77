from __future__ import annotations

import cmath
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hecke_ehrhart.exactmath import (
    CyclotomicNumber,
    MultiPoly,
    UniPoly,
    bernoulli,
    cyclotomic_pow,
    cyclotomic_polynomial,
    format_rational,
    gaussian_int,
    interpolate,
    parse_rational,
)

fractions = st.fractions(min_value=-20, max_value=20, max_denominator=12)


def cyclo(m):
    return st.lists(fractions, min_size=0, max_size=m).map(lambda cs: CyclotomicNumber(m, cs))


@st.composite
def cyclo_triples(draw):
    m = draw(st.integers(min_value=1, max_value=12))
    return m, draw(cyclo(m)), draw(cyclo(m)), draw(cyclo(m))


def test_bernoulli_values():
    assert [bernoulli(j) for j in range(5)] == [1, Fraction(1, 2), Fraction(1, 6), 0, Fraction(-1, 30)]
    assert bernoulli(12) == Fraction(-691, 2730)


def test_odd_bernoulli_vanish():
    for k in range(2, 11):
        assert bernoulli(2 * k - 1) == 0


def test_gaussian_int():
    for p in (2, 3, 5, 7):
        for n in range(8):
            assert gaussian_int(n, p) * (p - 1) + 1 == p**n


def test_rational_formatting_round_trip():
    for x in (Fraction(3, 4), Fraction(-7), Fraction(0), Fraction(-22, 7)):
        assert parse_rational(format_rational(x)) == x
    assert format_rational(Fraction(6, 3)) == "2"
    with pytest.raises(TypeError):
        parse_rational(0.5)


@settings(max_examples=60, deadline=None)
@given(st.lists(st.tuples(st.integers(-30, 30), fractions), min_size=1, max_size=7, unique_by=lambda p: p[0]))
def test_interpolation_exact(points):
    poly = interpolate(points)
    assert poly.degree < len(points)
    for x, y in points:
        assert poly(Fraction(x)) == y


def test_interpolation_rejects_duplicates():
    with pytest.raises(ValueError):
        interpolate([(1, 2), (1, 3)])


def test_unipoly_arithmetic():
    f = UniPoly([1, 2, 1])
    g = UniPoly([1, 1])
    q, r = f.divmod(g)
    assert q == g and r.is_zero()
    assert (g**2) == f
    assert f.scale_argument(3) == UniPoly([1, 6, 9])
    assert f.format() == "t^2 + 2t + 1"
    assert UniPoly([1, Fraction(3, 2), Fraction(1, 2)]).format() == "(1/2)t^2 + (3/2)t + 1"
    assert UniPoly.from_json(f.to_json()) == f


def test_multipoly_derivative_and_json():
    x = MultiPoly.variable(["x", "y"], 0)
    y = MultiPoly.variable(["x", "y"], 1)
    f = x * x * y + y * 3
    assert f.derivative(0) == x * y * 2
    assert f.apply_derivatives({0: 2, 1: 1}).constant_term() == 2
    assert f.evaluate([2, 5]) == 35
    assert MultiPoly.from_json(f.to_json()) == f


def test_cyclotomic_polynomials():
    assert cyclotomic_polynomial(1) == (-1, 1)
    assert cyclotomic_polynomial(4) == (1, 0, 1)
    assert cyclotomic_polynomial(6) == (1, -1, 1)
    assert cyclotomic_polynomial(12) == (1, 0, -1, 0, 1)


@settings(max_examples=80, deadline=None)
@given(cyclo_triples())
def test_cyclotomic_ring_axioms(data):
    m, a, b, c = data
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a * b == b * a
    assert a - a == CyclotomicNumber.rational(0, m)


@settings(max_examples=40, deadline=None)
@given(cyclo_triples())
def test_cyclotomic_inverse_and_complex(data):
    m, a, b, _ = data
    if not a.is_zero():
        assert a * a.inverse() == CyclotomicNumber.rational(1, m)
    assert abs((a * b).to_complex() - a.to_complex() * b.to_complex()) < 1e-6 * (1 + abs(a.to_complex() * b.to_complex()))


def test_roots_of_unity():
    for m in range(1, 13):
        z = cyclotomic_pow(m, 1)
        assert z**m == CyclotomicNumber.rational(1, m)
        assert abs(z.to_complex() - cmath.exp(2j * cmath.pi / m)) < 1e-12


def test_galois_invariant_sum_is_rational():
    # sum_{j=1}^{m-1} 1/(1 - w^j) = (m-1)/2
    for m in range(2, 13):
        one = CyclotomicNumber.rational(1, m)
        total = sum(((one - cyclotomic_pow(m, j)).inverse() for j in range(1, m)), CyclotomicNumber.rational(0, m))
        assert total.is_rational()
        assert total.to_rational() == Fraction(m - 1, 2)


def test_to_rational_refuses_irrational():
    with pytest.raises(ValueError):
        cyclotomic_pow(5, 1).to_rational()


def test_lift_preserves_value():
    z = cyclotomic_pow(4, 1)
    lifted = z.lift(12)
    assert abs(lifted.to_complex() - 1j) < 1e-12
    assert lifted == cyclotomic_pow(12, 3)
