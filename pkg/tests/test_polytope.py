from __future__ import annotations

import math
import random
from fractions import Fraction
from itertools import combinations, product

import numpy as np
import pytest
from scipy.spatial import ConvexHull

import shapes
from hecke_ehrhart import _matrix as mx
from hecke_ehrhart.lattice import Lattice
from hecke_ehrhart.polytope import (
    NotSimpleError,
    cone_index,
    cube,
    face_volume,
    facets_from_vertices,
    is_nonsingular,
    normal_cone,
    normal_fan,
    parallelepiped_points,
    polytope_from_json,
    simplex,
    vol_l,
    volume,
    volume_polynomial,
)
from hecke_ehrhart.toddop import annihilates, squarefree_derivative


def octahedron():
    pts = []
    for i in range(3):
        for s in (1, -1):
            v = [0, 0, 0]
            v[i] = s
            pts.append(v)
    return facets_from_vertices(pts)


def tilted_parallelogram():
    # a lattice parallelogram for the lattice spanned by (1,0), (1/2,1/2)
    L = Lattice([[1, 0], [Fraction(1, 2), Fraction(1, 2)]])
    pts = [[0, 0], [1, 0], [Fraction(1, 2), Fraction(1, 2)], [Fraction(3, 2), Fraction(1, 2)]]
    return facets_from_vertices(pts, L)


@pytest.mark.parametrize("name", shapes.ALL)
def test_facet_inequalities(name):
    P = shapes.get(name)
    for F in P.facets:
        assert np.gcd.reduce([abs(x) for x in F.normal]) == 1
        for i, y in enumerate(P.coords):
            val = mx.dot(y, F.normal) + F.offset
            assert val >= 0
            assert (val == 0) == (i in F.vertices)


def test_non_vertices_are_dropped():
    P = facets_from_vertices([[0, 0], [2, 0], [0, 2], [1, 1], [1, 0]])
    assert sorted(map(tuple, P.vertices)) == [(0, 0), (0, 2), (2, 0)]


@pytest.mark.parametrize("name", shapes.ALL)
def test_volume_against_convex_hull(name):
    P = shapes.get(name)
    if P.n == 1:
        expected = float(max(v[0] for v in P.vertices) - min(v[0] for v in P.vertices))
    else:
        expected = ConvexHull(np.array(P.vertices, dtype=float)).volume
    assert abs(float(volume(P)) - expected / float(P.lattice.det)) < 1e-12


def test_volume_in_a_coarser_lattice():
    P = tilted_parallelogram()
    assert volume(P) == 1
    assert P.lattice.det == Fraction(1, 2)


def test_face_counts_and_simplicity():
    C = cube(3)
    assert [len(C.faces_of_dim(d)) for d in range(4)] == [8, 12, 6, 1]
    assert C.is_simple() and is_nonsingular(C)
    O = octahedron()
    assert not O.is_simple()
    with pytest.raises(NotSimpleError, match="not simple"):
        normal_fan(O)


def test_singular_triangle_index():
    P = shapes.get("singular_triangle")
    assert P.is_simple() and not is_nonsingular(P)
    assert sorted(cone_index(normal_cone(P, v)) for v in P.faces_of_dim(0)) == [1, 1, 2]


def test_face_volumes_of_cube():
    C = cube(3)
    assert vol_l(C, 0) == 8 and vol_l(C, 1) == 12 and vol_l(C, 2) == 6 and vol_l(C, 3) == 1
    T = shapes.get("singular_triangle")
    # hypotenuse from (0,0) to (1,2) is primitive; the vertical edge has lattice length 2
    assert sorted(face_volume(T, e) for e in T.faces_of_dim(1)) == [1, 1, 2]


def _cone_coords(cone, w):
    """Coordinates of w in the generators of a full-dimensional cone."""
    return mx.solve_left(cone.generators, w)


@pytest.mark.parametrize("name", shapes.ALL)
def test_normal_fan_axioms(name):
    P = shapes.get(name)
    fan = normal_fan(P)
    cones = list(fan.cones.values())
    # generators are primitive lattice points and independent (pointed, simplicial)
    for c in cones:
        if c.dim:
            assert mx.rank(c.generators) == c.dim
        for g in c.generators:
            assert np.gcd.reduce([abs(x) for x in g]) == 1
    # faces of cones are cones
    by_facets = {frozenset(c.facets) for c in cones}
    for c in cones:
        for r in range(len(c.facets) + 1):
            for sub in combinations(c.facets, r):
                assert frozenset(sub) in by_facets
    # rays correspond to facets
    assert len(fan.rays) == len(P.facets)
    # intersections are common faces, and the fan is complete: every sample
    # point lies in a maximal cone, and all cones containing it contain the
    # smallest one (spanned by the generators with positive coefficient)
    maximal = [c for c in cones if c.dim == P.n]
    rng = random.Random(1)
    samples = list(product(range(-2, 3), repeat=P.n)) + [
        tuple(rng.randint(-9, 9) for _ in range(P.n)) for _ in range(40)
    ]
    for w in samples:
        containing = []
        for c in maximal:
            x = _cone_coords(c, w)
            if all(t >= 0 for t in x):
                containing.append(frozenset(i for i, t in zip(c.facets, x) if t > 0))
        assert containing, f"{w} not covered"
        assert len(set(containing)) == 1


@pytest.mark.parametrize("name", shapes.ALL)
def test_parallelepiped_size_is_index(name):
    P = shapes.get(name)
    for f in P.faces.values():
        cone = normal_cone(P, f)
        pts = parallelepiped_points(cone)
        assert len(pts) == cone_index(cone)
        for g in pts:
            assert all(0 <= r < 1 for r in g.rho)
            combo = [sum(r * s[i] for r, s in zip(g.rho, cone.generators)) for i in range(P.n)]
            assert combo == list(g.point)


@pytest.mark.parametrize("name", shapes.ALL)
def test_volume_polynomial_at_zero(name):
    P = shapes.get(name)
    V = volume_polynomial(P)
    assert V.constant_term() == volume(P)
    assert V.total_degree() == P.n


@pytest.mark.parametrize("name", ["square", "cube3", "prism", "triangle", "simplex3"])
def test_closed_form_matches_generic(name):
    P = shapes.get(name)
    assert volume_polynomial(P, method="closed") == volume_polynomial(P, method="generic")


def test_volume_polynomial_of_square():
    V = volume_polynomial(cube(2))
    # (1 + h_a + h_b)(1 + h_c + h_d) in some order of the four facets
    assert V.evaluate([1, 1, 1, 1]) == 9
    assert V.evaluate([Fraction(1, 2)] * 4) == 4


@pytest.mark.parametrize("name", shapes.ALL)
def test_annihilation(name):
    P = shapes.get(name)
    V = volume_polynomial(P)
    rng = random.Random(7)
    ws = [[int(i == j) for j in range(P.n)] for i in range(P.n)]
    ws += [[rng.randint(-3, 3) for _ in range(P.n)] for _ in range(3)]
    for w in ws:
        assert annihilates(P, V, w)


@pytest.mark.parametrize("name", shapes.ALL)
def test_squarefree_derivative(name):
    P = shapes.get(name)
    V = volume_polynomial(P)
    for f in P.faces.values():
        expected = face_volume(P, f) / cone_index(normal_cone(P, f))
        assert squarefree_derivative(P, f, V) == expected


def test_over_superlattice_keeps_combinatorics():
    P = shapes.get("prism")
    M = Lattice.standard(3).scaled(Fraction(1, 2))
    Q = P.over(M)
    assert Q.faces.keys() == P.faces.keys()
    assert volume(Q) == 8 * volume(P)


def test_json_round_trip():
    P = tilted_parallelogram()
    Q = polytope_from_json(P.to_json())
    assert Q.lattice == P.lattice
    assert sorted(map(tuple, Q.vertices)) == sorted(map(tuple, P.vertices))


@pytest.mark.parametrize(
    "data,needle",
    [
        ({}, "'vertices'"),
        ({"vertices": [[0, 0], [1, "x"]]}, "'vertices'"),
        ({"vertices": [[0, 0], [1, 0], [0, 1]], "lattice": [[1, 2], [2, 4]]}, "'lattice'"),
    ],
)
def test_json_errors(data, needle):
    with pytest.raises(ValueError, match=needle):
        polytope_from_json(data)


def test_lower_dimensional_input_rejected():
    with pytest.raises(ValueError):
        facets_from_vertices([[0, 0], [1, 1], [2, 2]])


def test_simplex_volume():
    for n in range(1, 5):
        assert volume(simplex(n)) == Fraction(1, math.factorial(n))


def test_annihilation_is_not_vacuous():
    V = volume_polynomial(cube(2))
    # a single partial derivative of Vol P(h) does not vanish
    assert not V.derivative(0).is_zero()
