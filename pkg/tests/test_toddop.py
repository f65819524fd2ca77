from __future__ import annotations

import math
from fractions import Fraction

import mpmath
import pytest

import shapes
from reference_tables import CIRCLE_CLOSED_FORMS, circle_closed_form
from hecke_ehrhart.ehrhart import ehrhart
from hecke_ehrhart.exactmath import CyclotomicNumber, bernoulli, cyclotomic_pow
from hecke_ehrhart.grassmann import grassmannian_count, nu_closed
from hecke_ehrhart.polytope import NotSimpleError, cube, face_volume, facets_from_vertices, volume_polynomial
from hecke_ehrhart.toddop import (
    circle_coefficient,
    circle_series,
    compositions,
    dedekind_contribution,
    distribution_check,
    distribution_sides,
    hurwitz_numeric_check,
    hurwitz_values,
    kp_coefficient,
    sqrfree_identity,
    table3_report,
    theorem2_squarefree_check,
    theta,
    todd_terms,
)

RATIONAL_POINTS = [Fraction(x) for x in (-1, 2, 3, -2, 5, -7)] + [Fraction(1, 2), Fraction(-3, 7), Fraction(5, 3), Fraction(9, 4)]


def test_bernoulli_case():
    for k in range(10):
        assert circle_coefficient(1, k) == CyclotomicNumber.rational(bernoulli(k) / math.factorial(k))


@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_circle_closed_forms_at_rational_points(k):
    # ten points exceed twice the degree of the rational functions involved
    for a in RATIONAL_POINTS:
        assert circle_coefficient(a, k).to_rational() == circle_closed_form(k, a)


@pytest.mark.parametrize("k", [1, 2, 3, 4])
@pytest.mark.parametrize("m", [2, 3, 4, 5, 6, 7, 8, 12])
def test_circle_closed_forms_at_roots_of_unity(k, m):
    for e in range(1, m):
        a = cyclotomic_pow(m, e)
        num, den = circle_closed_form_cyclotomic(k, a)
        assert circle_coefficient(a, k) * den == num


def circle_closed_form_cyclotomic(k, a):
    num_c, den_c = CIRCLE_CLOSED_FORMS[k]
    one = CyclotomicNumber.rational(1, a.m)
    power = lambda i: a**i if i else one  # noqa: E731
    num = sum((power(i) * c for i, c in enumerate(num_c)), CyclotomicNumber.rational(0, a.m))
    den = sum((power(i) * c for i, c in enumerate(den_c)), CyclotomicNumber.rational(0, a.m))
    return num, den


def test_series_constant_term():
    assert circle_series(Fraction(-1), 3)[0] == CyclotomicNumber.rational(0)
    assert circle_series(1, 3)[0] == CyclotomicNumber.rational(1)


@pytest.mark.parametrize("n", range(2, 7))
@pytest.mark.parametrize("k", range(1, 6))
def test_distribution_relations(n, k):
    lhs, rhs = distribution_sides(n, k)
    assert isinstance(lhs, Fraction)
    assert lhs == rhs
    assert distribution_check(n, k)


def test_theta_special_values():
    assert theta(2, Fraction(1, 2)).to_rational() == Fraction(1, 2)
    assert theta(1, 0).to_rational() == -bernoulli(1)
    for k in (2, 4, 6):
        assert theta(k, 0).to_rational() == bernoulli(k)


@pytest.mark.parametrize("u", [Fraction(1, 2), Fraction(1, 3), Fraction(1, 4), Fraction(2, 5), Fraction(5, 6)])
def test_theta2_closed_form(u):
    # sum over m in Z of (m+u)^-2 = pi^2 / sin^2(pi u)
    expected = 1 / (2 * math.sin(math.pi * u) ** 2)
    assert abs(theta(2, u).to_complex() - expected) < 1e-12


def test_odd_theta_is_imaginary():
    z = theta(3, Fraction(1, 3)).to_complex()
    assert abs(z.real) < 1e-12 and abs(z.imag) > 1e-3


@pytest.mark.parametrize("k,u", [(2, Fraction(1, 2)), (2, Fraction(1, 4)), (3, Fraction(1, 3)), (4, Fraction(1, 3))])
def test_hurwitz_against_mpmath(k, u):
    lhs, rhs = hurwitz_values(k, u)
    # the symmetric sum is zeta(k,u) + (-1)^k zeta(k,1-u)
    oracle = complex(mpmath.zeta(k, u) + (-1) ** k * mpmath.zeta(k, 1 - u))
    assert abs(lhs - oracle) < 1e-10
    assert abs(rhs - oracle) < 1e-10
    assert hurwitz_numeric_check(k, u, tol=1e-9)


def test_compositions():
    assert list(compositions(3, 2)) == [(1, 2), (2, 1)]
    assert list(compositions(2, 0)) == []
    assert list(compositions(0, 0)) == [()]
    assert len(list(compositions(5, 3))) == math.comb(4, 2)


def test_square_degree_two_terms():
    P = cube(2)
    vertex_terms = [t for t in todd_terms(P, 2) if t.face.dim == 0]
    assert len(vertex_terms) == 4
    assert all(t.coefficient == Fraction(1, 4) for t in vertex_terms)
    assert kp_coefficient(P, 2) == 1


@pytest.mark.parametrize("name", shapes.ALL)
def test_kp_equals_ehrhart(name):
    P = shapes.get(name)
    V = volume_polynomial(P)
    E = ehrhart(P).poly
    for l in range(P.n + 1):
        assert kp_coefficient(P, l, V) == E.coeff(P.n - l)


def test_singular_triangle_uses_nontrivial_gamma_sums():
    P = shapes.get("singular_triangle")
    sizes = [len(t.partition) for t in todd_terms(P, 2) if t.face.dim == 0]
    assert sizes and all(s == 2 for s in sizes)
    # the index-2 vertex carries a coefficient different from the nonsingular 1/4
    assert any(t.coefficient != Fraction(1, 4) for t in todd_terms(P, 2) if t.face.dim == 0)


def test_not_simple_rejected():
    pts = [[1, 0, 0], [-1, 0, 0], [0, 1, 0], [0, -1, 0], [0, 0, 1], [0, 0, -1]]
    with pytest.raises(NotSimpleError, match="not simple"):
        todd_terms(facets_from_vertices(pts), 1)


@pytest.mark.parametrize("name", shapes.DIM3)
@pytest.mark.parametrize("p", [3, 5])
@pytest.mark.parametrize("k", [1, 2])
def test_squarefree_hecke_identity(name, p, k):
    P = shapes.get(name)
    for f in P.faces_of_dim(1) + P.faces_of_dim(0):
        chk = theorem2_squarefree_check(P, f, p, k)
        assert chk.lhs == chk.rhs, (name, sorted(f.vertices), p, k)


@pytest.mark.parametrize("name", ["cube3", "prism"])
def test_worked_edge_totals(name):
    P = shapes.get(name)
    p = 5
    f = P.faces_of_dim(1)[0]
    vol = face_volume(P, f)
    assert theorem2_squarefree_check(P, f, p, 1).lhs == Fraction(p * p + 2 * p, 4) * vol
    assert theorem2_squarefree_check(P, f, p, 2).lhs == Fraction(2 * p * p + p, 4) * vol
    assert nu_closed(3, 1, 1, p) == p * p + 2 * p


def test_squarefree_hecke_identity_requires_nonsingular():
    P = shapes.get("singular_triangle")
    with pytest.raises(ValueError):
        theorem2_squarefree_check(P, P.faces_of_dim(0)[0], 3, 1)


@pytest.mark.parametrize("l", [1, 2, 3])
@pytest.mark.parametrize("p", [2, 3])
@pytest.mark.parametrize("convention", ["dual", "primal"])
def test_sqrfree_identity(l, p, convention):
    for j in range(l + 1):
        lhs, rhs = sqrfree_identity(l, j, p, convention)
        assert lhs == rhs == Fraction(grassmannian_count(j, l, p), 2**l)


@pytest.mark.parametrize("p", [3, 5, 7])
def test_dedekind_contribution(p):
    projective, double = dedekind_contribution(p)
    assert projective == double == Fraction((p - 1) ** 2, 4)


@pytest.mark.parametrize("p", [3, 5])
def test_edge_strata(p):
    P = cube(3)
    report = table3_report(P, P.faces_of_dim(1)[0], p)
    rows = {r.name: r for r in report.rows}
    assert [rows[s].size for s in ("S_1", "S_2", "S_3", "S_4")] == [1, 2, p - 1, p * p - 1]
    assert rows["S_1"].vol_ratios == {p} and rows["S_1"].a_sum == Fraction(1, 4)
    assert rows["S_2"].a_sum == Fraction(1, 2)
    assert rows["S_3"].ind_ratios == {Fraction(1, p)}
    assert rows["S_4"].a_sum == Fraction(p * p - 1, 4)
    assert report.total == Fraction(p * p + 2 * p, 4)
    assert report.ok
    assert "S_4" in report.format()
    assert report.to_json()["ok"] is True


def test_edge_strata_dual_convention():
    P = shapes.get("prism")
    report = table3_report(P, P.faces_of_dim(1)[0], 5, convention="dual")
    assert report.ok
