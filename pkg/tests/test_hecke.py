from __future__ import annotations

from collections import Counter
from fractions import Fraction

import pytest

import shapes
from hecke_ehrhart.ehrhart import ehrhart
from hecke_ehrhart.exactmath import UniPoly
from hecke_ehrhart.grassmann import grassmannian_count, nu_closed
from hecke_ehrhart.hecke import (
    average_regularized,
    chain_multiplicities,
    check_theorem1,
    hecke_ehrhart,
    hecke_p_squared,
    hecke_p_squared_algebra,
    hecke_vol,
    prop_A_check,
    rel1_prediction,
)
from hecke_ehrhart.lattice import Lattice, enumerate_coindex_N_superlattices, enumerate_superlattices
from hecke_ehrhart.polytope import cube, simplex, vol_l


def test_square_worked_example():
    result = hecke_ehrhart(cube(2), 2, 1)
    assert len(result.lattices) == 3
    assert result.total == UniPoly([3, 8, 6])
    assert result.to_json()["count"] == 3


@pytest.mark.parametrize("name", shapes.ALL)
@pytest.mark.parametrize("p", [2, 3])
def test_eigenvalue_ratios(name, p):
    P = shapes.get(name)
    for k in range(1, P.n + 1):
        chk = check_theorem1(P, p, k)
        assert chk.rel1
        E = ehrhart(P).poly
        for l in range(P.n + 1):
            if E.coeff(l):
                assert chk.ratios[l] == nu_closed(P.n, k, l, p)
        assert chk.ok


def test_rel1_is_a_polynomial_identity():
    E = UniPoly([1, 2, 1])
    pred = rel1_prediction(E, 2, 3, 1)
    assert pred == UniPoly([4, 6 * 2, 12])


def test_eigenvalue_ratios_dimension_four():
    chk = check_theorem1(simplex(4), 2, 2)
    assert chk.ok


@pytest.mark.parametrize("name", ["cube3", "prism", "simplex3", "singular_triangle", "square"])
@pytest.mark.parametrize("p", [2, 3])
def test_face_exponents(name, p):
    P = shapes.get(name)
    for k in range(1, P.n + 1):
        for M in enumerate_superlattices(P.n, p, k, P.lattice):
            P_M = P.over(M)
            for f in P.faces.values():
                if f.dim < P.n:
                    prop_A_check(P, f, M, p, P_M)
        for l in range(P.n + 1):
            assert hecke_vol(P, p, k, l) == nu_closed(P.n, k, l, p) * vol_l(P, l)


def test_face_exponent_check_values():
    P = cube(2)
    M = Lattice([[Fraction(1, 2), 0], [0, 1]])
    f = P.faces_of_dim(1)[0]
    vol_exp, ind_exp, r = prop_A_check(P, f, M, 2)
    assert vol_exp in (0, 1) and ind_exp <= 0 <= r


@pytest.mark.parametrize("n,p", [(1, 2), (2, 2), (2, 3), (3, 2)])
def test_chain_multiplicities(n, p):
    chains = chain_multiplicities(Lattice.standard(n), p)
    top = Lattice.standard(n).scaled(Fraction(1, p))
    counts = Counter(chains.values())
    # cyclic quotients are reached by one chain, p^{-1}L-type quotients by p + 1
    for M, c in chains.items():
        if top.contains_lattice(M) and M.index_over(Lattice.standard(n)) == p * p:
            assert c == p + 1
        else:
            assert c == 1
    assert sum(counts.values()) == len(enumerate_coindex_N_superlattices(n, p, 2))


@pytest.mark.parametrize(
    "name,p,expected",
    [
        ("interval", 2, [1, 4]),
        ("interval", 3, [1, 9]),
        ("square", 2, [7, 24, 28]),
        ("square", 3, [13, 54, 117]),
        ("cube3", 2, [35, 132, 204, 140]),
    ],
)
def test_hecke_p_squared(name, p, expected):
    P = shapes.get(name)
    assert hecke_p_squared(P, p) == UniPoly(expected)
    assert hecke_p_squared_algebra(P, p) == UniPoly(expected)


@pytest.mark.parametrize("n,p", [(1, 2), (1, 3), (2, 2), (2, 3), (3, 2), (3, 3)])
def test_coindex_p_squared_count(n, p):
    assert len(enumerate_coindex_N_superlattices(n, p, 2)) == grassmannian_count(2, n + 1, p)
    # the constant term of T(p^2)E counts the lattices
    if n <= 2:
        assert hecke_p_squared(cube(n), p, check=False).coeff(0) == grassmannian_count(2, n + 1, p)


def test_average_over_index_p():
    P = cube(2)
    family = enumerate_superlattices(2, 5, 1).members
    avg = average_regularized(P, family)
    # c_1 of E(P_M) is half the lattice perimeter; averaged it is 2p/(p+1) * c_1
    assert avg == UniPoly([1, Fraction(2 * 5, 6) * 2])
    with pytest.raises(ValueError):
        average_regularized(P, [])


def test_budget_and_range_errors():
    with pytest.raises(ValueError):
        hecke_ehrhart(cube(2), 2, 3)


def test_parallel_sum_matches_serial(monkeypatch):
    P = cube(2)
    serial = hecke_ehrhart(P, 67, 1)
    monkeypatch.setenv("HECKE_EHRHART_THREADS", "2")
    parallel = hecke_ehrhart(P, 67, 1)
    assert parallel.total == serial.total
    assert [E.poly for E in parallel.polynomials] == [E.poly for E in serial.polynomials]
