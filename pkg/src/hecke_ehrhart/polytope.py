"""Lattice polytopes: facets, face lattice, volumes, normal fans and Vol P(h).

Every polytope carries its lattice L.  Internally all geometry is done in
L-coordinates, where L becomes Z^n and is self-dual for the standard dot
product; facet normals are therefore primitive integer vectors.  Volumes
are normalized so that a fundamental domain of L has volume 1.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from itertools import combinations
from math import factorial
from typing import Iterable, Sequence

from . import _matrix as mx
from .exactmath import MultiPoly, all_exponent_vectors, format_rational, parse_rational
from .lattice import Lattice

__all__ = [
    "Facet",
    "Face",
    "Cone",
    "GammaPoint",
    "Fan",
    "LatticePolytope",
    "NotSimpleError",
    "facets_from_vertices",
    "volume",
    "face_volume",
    "vol_l",
    "normal_fan",
    "normal_cone",
    "normal_cone_in",
    "cone_index",
    "is_nonsingular",
    "parallelepiped_points",
    "volume_polynomial",
    "cube",
    "simplex",
    "product",
    "prism",
    "singular_triangle",
    "polytope_from_json",
]


class NotSimpleError(ValueError):
    pass


@dataclass(frozen=True)
class Facet:
    """Inequality <y, normal> + offset >= 0 in lattice coordinates."""

    normal: tuple[int, ...]
    offset: int
    vertices: frozenset[int]


@dataclass(frozen=True)
class Face:
    vertices: frozenset[int]
    facets: frozenset[int]
    dim: int


@dataclass(frozen=True)
class Cone:
    """Simplicial cone spanned by primitive facet normals (lattice coordinates)."""

    generators: tuple[tuple[int, ...], ...]
    facets: tuple[int, ...]
    n: int

    @property
    def dim(self) -> int:
        return len(self.generators)


@dataclass(frozen=True)
class GammaPoint:
    """A lattice point sum_i rho_i s_i of the half-open parallelepiped of a cone."""

    point: tuple[int, ...]
    rho: tuple[Fraction, ...]


@dataclass
class Fan:
    cones: dict[frozenset[int], Cone]

    @property
    def rays(self) -> set[tuple[int, ...]]:
        return {g for c in self.cones.values() for g in c.generators}

    def to_json(self) -> list[dict]:
        out = []
        for key, cone in sorted(self.cones.items(), key=lambda kv: (-len(kv[1].generators), sorted(kv[0]))):
            out.append(
                {
                    "face": sorted(key),
                    "generators": [list(g) for g in cone.generators],
                    "index": cone_index(cone),
                }
            )
        return out


def _affine_rank(points: Sequence[Sequence]) -> int:
    if len(points) <= 1:
        return 0
    base = points[0]
    return mx.rank([[a - b for a, b in zip(pt, base)] for pt in points[1:]])


class LatticePolytope:
    """Full-dimensional lattice polytope, given by vertices, with derived H-data.

    Use :func:`facets_from_vertices` to build one.  ``coords`` are the
    vertices in coordinates of ``lattice``; ``vertices`` are ambient.
    """

    def __init__(
        self,
        lattice: Lattice,
        vertices: Sequence[Sequence[Fraction]],
        coords: Sequence[Sequence[int]],
        facets: Sequence[Facet],
        factors: tuple["LatticePolytope", ...] | None = None,
    ):
        self.lattice = lattice
        self.n = lattice.n
        self.vertices = tuple(tuple(Fraction(x) for x in v) for v in vertices)
        self.coords = tuple(tuple(int(x) for x in c) for c in coords)
        self.facets = tuple(facets)
        self.factors = factors
        self.faces = self._face_lattice()

    def _face_lattice(self) -> dict[frozenset[int], Face]:
        facet_sets = [f.vertices for f in self.facets]
        seen: set[frozenset[int]] = set(facet_sets)
        frontier = list(seen)
        while frontier:
            nxt = []
            for s in frontier:
                for t in facet_sets:
                    u = s & t
                    if u and u not in seen:
                        seen.add(u)
                        nxt.append(u)
            frontier = nxt
        seen.add(frozenset(range(len(self.coords))))
        faces = {}
        for s in seen:
            containing = frozenset(i for i, f in enumerate(self.facets) if s <= f.vertices)
            dim = _affine_rank([self.coords[i] for i in sorted(s)])
            faces[s] = Face(vertices=s, facets=containing, dim=dim)
        return faces

    # --- combinatorics --------------------------------------------------

    def faces_of_dim(self, d: int) -> list[Face]:
        return sorted((f for f in self.faces.values() if f.dim == d), key=lambda f: sorted(f.vertices))

    def face(self, vertex_indices: Iterable[int]) -> Face:
        return self.faces[frozenset(vertex_indices)]

    @property
    def whole(self) -> Face:
        return self.faces[frozenset(range(len(self.coords)))]

    def is_simple(self) -> bool:
        return all(len(f.facets) == self.n for f in self.faces_of_dim(0))

    def require_simple(self) -> None:
        if not self.is_simple():
            raise NotSimpleError("not simple: some vertex lies on more than n facets")

    @cached_property
    def _subfaces(self) -> dict[frozenset[int], list[frozenset[int]]]:
        """Codimension-one faces of each face."""
        out: dict[frozenset[int], list[frozenset[int]]] = {k: [] for k in self.faces}
        for key, f in self.faces.items():
            for k2, g in self.faces.items():
                if g.dim == f.dim - 1 and k2 < key:
                    out[key].append(k2)
        return out

    def flags(self, face_key: frozenset[int] | None = None) -> list[tuple[frozenset[int], ...]]:
        """Complete flags (vertex, edge, ..., face), used for barycentric triangulation."""
        if face_key is None:
            face_key = self.whole.vertices
        return self._flags(face_key)

    def _flags(self, key: frozenset[int]) -> list[tuple[frozenset[int], ...]]:
        cache = self.__dict__.setdefault("_flag_cache", {})
        if key in cache:
            return cache[key]
        if self.faces[key].dim == 0:
            out = [(key,)]
        else:
            out = [fl + (key,) for sub in self._subfaces[key] for fl in self._flags(sub)]
        cache[key] = out
        return out

    # --- lattice data ---------------------------------------------------

    def tangent_basis(self, face: Face) -> list[list[int]]:
        """Z-basis of L cap V_f in lattice coordinates (V_f = direction of aff(f))."""
        pts = [self.coords[i] for i in sorted(face.vertices)]
        diffs = [[a - b for a, b in zip(q, pts[0])] for q in pts[1:]]
        return mx.saturate(diffs, self.n)

    def normal_basis(self, face: Face) -> list[list[int]]:
        """Z-basis of L cap C_f, C_f the span of the normal cone."""
        return mx.saturate([self.facets[i].normal for i in sorted(face.facets)], self.n)

    def over(self, M: Lattice) -> "LatticePolytope":
        """The same polytope regarded as a lattice polytope for the superlattice M."""
        if M.n != self.n:
            raise ValueError("dimension mismatch")
        coords = []
        for v in self.vertices:
            c = M.coordinates(v)
            if any(x.denominator != 1 for x in c):
                raise ValueError(f"vertex {v} is not in the lattice {M}")
            coords.append([int(x) for x in c])
        facets = [_facet_from_points(coords, f.vertices, self.n) for f in self.facets]
        return LatticePolytope(M, self.vertices, coords, facets)

    @cached_property
    def ambient_inequalities(self) -> list[tuple[tuple[Fraction, ...], int]]:
        """Facet inequalities <x, u> + lambda >= 0 in ambient coordinates."""
        binv = mx.inverse(self.lattice.basis)
        out = []
        for f in self.facets:
            # <y, u> with y = x B^{-1} equals <x, B^{-1} u>
            u = [sum(binv[i][j] * f.normal[j] for j in range(self.n)) for i in range(self.n)]
            out.append((tuple(u), f.offset))
        return out

    def to_json(self) -> dict:
        return {
            "lattice": self.lattice.to_json(),
            "vertices": [[format_rational(x) for x in v] for v in self.vertices],
        }

    def __repr__(self):
        return f"LatticePolytope(n={self.n}, vertices={len(self.coords)}, facets={len(self.facets)})"


def _facet_from_points(coords: Sequence[Sequence[int]], on: frozenset[int], n: int) -> Facet:
    idx = sorted(on)
    base = coords[idx[0]]
    diffs = [[a - b for a, b in zip(coords[i], base)] for i in idx[1:]]
    ker = mx.integer_kernel(diffs, n) if diffs else mx.integer_kernel([], n)
    if len(ker) != 1:
        raise ValueError("facet vertex set does not span a hyperplane")
    u = mx.primitive(ker[0])
    off = next(i for i in range(len(coords)) if i not in on)
    if mx.dot(coords[off], u) - mx.dot(base, u) < 0:
        u = tuple(-x for x in u)
    return Facet(normal=u, offset=-mx.dot(base, u), vertices=frozenset(on))


def facets_from_vertices(
    vertices: Sequence[Sequence], L: Lattice | None = None, factors=None
) -> LatticePolytope:
    """Build a lattice polytope from points whose convex hull it is.

    Facets are found by sifting hyperplanes through n-subsets of points.
    Repeated points and points that are not vertices are dropped.
    """
    pts_in = [tuple(Fraction(x) for x in v) for v in vertices]
    if not pts_in:
        raise ValueError("no vertices given")
    n = len(pts_in[0])
    L = L or Lattice.standard(n)
    if L.n != n:
        raise ValueError("lattice dimension does not match the vertices")
    pts: list[tuple[Fraction, ...]] = []
    for v in pts_in:
        if len(v) != n:
            raise ValueError("vertices have inconsistent dimensions")
        if v not in pts:
            pts.append(v)
    coords = []
    for v in pts:
        c = L.coordinates(v)
        if any(x.denominator != 1 for x in c):
            raise ValueError(f"vertex {[format_rational(x) for x in v]} is not in the lattice")
        coords.append(tuple(int(x) for x in c))
    if _affine_rank(coords) != n:
        raise ValueError("points are not full-dimensional")

    found: dict[tuple[int, ...], Facet] = {}
    for subset in combinations(range(len(coords)), n):
        if any(set(subset) <= f.vertices for f in found.values()):
            continue
        base = coords[subset[0]]
        diffs = [[a - b for a, b in zip(coords[i], base)] for i in subset[1:]]
        if diffs and mx.rank(diffs) != n - 1:
            continue
        ker = mx.integer_kernel(diffs, n)
        u = mx.primitive(ker[0])
        vals = [mx.dot(c, u) - mx.dot(base, u) for c in coords]
        if all(x >= 0 for x in vals):
            pass
        elif all(x <= 0 for x in vals):
            u = tuple(-x for x in u)
            vals = [-x for x in vals]
        else:
            continue
        on = frozenset(i for i, x in enumerate(vals) if x == 0)
        found[u] = Facet(normal=u, offset=-mx.dot(base, u), vertices=on)

    facets = list(found.values())
    # keep only genuine vertices: points whose incident normals span Q^n
    keep = [
        i for i in range(len(coords))
        if mx.rank([f.normal for f in facets if i in f.vertices] or [[0] * n]) == n
    ]
    if len(keep) != len(coords):
        remap = {old: new for new, old in enumerate(keep)}
        pts = [pts[i] for i in keep]
        coords = [coords[i] for i in keep]
        facets = [
            Facet(f.normal, f.offset, frozenset(remap[i] for i in f.vertices if i in remap)) for f in facets
        ]
    facets.sort(key=lambda f: (sorted(f.vertices), f.normal))
    return LatticePolytope(L, pts, coords, facets, factors=factors)


# ---------------------------------------------------------------------------
# volumes


def _barycenter(coords, key: frozenset[int]) -> list[Fraction]:
    idx = sorted(key)
    n = len(coords[idx[0]])
    return [Fraction(sum(coords[i][j] for i in idx), len(idx)) for j in range(n)]


def _flag_volume(P: LatticePolytope, coords, flags, proj=None) -> Fraction:
    total = Fraction(0)
    d = len(flags[0]) - 1 if flags else 0
    centers: dict[frozenset[int], list[Fraction]] = {}
    for fl in flags:
        pts = []
        for key in fl:
            if key not in centers:
                centers[key] = _barycenter(coords, key)
            pts.append(centers[key])
        rows = [[a - b for a, b in zip(q, pts[0])] for q in pts[1:]]
        if proj is not None:
            rows = proj(rows)
        total += abs(mx.det(rows))
    return total / factorial(d)


def volume(P: LatticePolytope) -> Fraction:
    """Volume normalized so that a fundamental domain of P.lattice has volume 1."""
    if "_volume" not in P.__dict__:
        P.__dict__["_volume"] = _flag_volume(P, P.coords, P.flags())
    return P.__dict__["_volume"]


def face_volume(P: LatticePolytope, f: Face) -> Fraction:
    """Volume of a face relative to the lattice induced on its affine hull."""
    if f.dim == 0:
        return Fraction(1)
    K = P.tangent_basis(f)
    # coordinates in the basis K through an invertible square minor of K
    cols = _independent_columns(K)
    kinv = mx.inverse([[row[c] for c in cols] for row in K])

    def proj(rows):
        return [mx.vecmat([r[c] for c in cols], kinv) for r in rows]

    return _flag_volume(P, P.coords, P.flags(f.vertices), proj)


def _independent_columns(K: Sequence[Sequence[int]]) -> list[int]:
    cols: list[int] = []
    for c in range(len(K[0])):
        trial = cols + [c]
        if mx.rank([[row[j] for j in trial] for row in K]) == len(trial):
            cols = trial
        if len(cols) == len(K):
            break
    return cols


def vol_l(P: LatticePolytope, l: int) -> Fraction:
    """Sum of the lattice-normalized volumes of all l-dimensional faces."""
    return sum((face_volume(P, f) for f in P.faces_of_dim(l)), Fraction(0))


# ---------------------------------------------------------------------------
# cones and fans


def normal_fan(P: LatticePolytope) -> Fan:
    """Normal cones sigma_f for every face f (P must be simple)."""
    P.require_simple()
    cones = {}
    for key, f in P.faces.items():
        idx = tuple(sorted(f.facets))
        cones[key] = Cone(generators=tuple(P.facets[i].normal for i in idx), facets=idx, n=P.n)
    return Fan(cones)


def normal_cone(P: LatticePolytope, f: Face) -> Cone:
    idx = tuple(sorted(f.facets))
    return Cone(generators=tuple(P.facets[i].normal for i in idx), facets=idx, n=P.n)


def normal_cone_in(P: LatticePolytope, f: Face, M: Lattice) -> Cone:
    """sigma_f kept as a cone of V (identified with its dual by the form of P.lattice).

    Its spanning points are made primitive in the lattice M and written in
    M-coordinates.  For M != P.lattice this differs from the normal cone of
    P.over(M), whose generators are primitive in the dual lattice of M.
    """
    to_l = mx.inverse(P.lattice.basis)
    m_in_l = [mx.vecmat(row, to_l) for row in M.basis]
    minv = mx.inverse(m_in_l)
    idx = tuple(sorted(f.facets))
    gens = tuple(mx.primitive(mx.vecmat(P.facets[i].normal, minv)) for i in idx)
    return Cone(generators=gens, facets=idx, n=P.n)


def _cone_coordinates(cone: Cone) -> tuple[list[list[int]], list[list[Fraction]]]:
    """Saturated basis K of the cone's span and generator coordinates X (gens = X K)."""
    K = mx.saturate(cone.generators, cone.n)
    X = [mx.solve_left(K, g) for g in cone.generators]
    return K, X


def cone_index(cone: Cone) -> int:
    """Ind sigma = [L(sigma) : U(sigma)]."""
    if cone.dim == 0:
        return 1
    _, X = _cone_coordinates(cone)
    d = abs(mx.det(X))
    assert d.denominator == 1 and d > 0, "cone generators must be independent"
    return int(d)


def is_nonsingular(P: LatticePolytope) -> bool:
    return P.is_simple() and all(
        cone_index(normal_cone(P, f)) == 1 for f in P.faces_of_dim(0)
    )


def parallelepiped_points(cone: Cone) -> list[GammaPoint]:
    """Lattice points of {sum rho_s s : 0 <= rho_s < 1}, with their rho."""
    if cone.dim == 0:
        return [GammaPoint(point=(0,) * cone.n, rho=())]
    K, X = _cone_coordinates(cone)
    xinv = mx.inverse(X)
    # rho-vectors of lattice points form the group generated by the rows of X^{-1} mod 1
    gens = [tuple(x - (x.numerator // x.denominator) for x in row) for row in xinv]
    zero = tuple(Fraction(0) for _ in range(cone.dim))
    group = {zero}
    frontier = [zero]
    while frontier:
        nxt = []
        for r in frontier:
            for g in gens:
                s = tuple((a + b) - ((a + b).numerator // (a + b).denominator) for a, b in zip(r, g))
                if s not in group:
                    group.add(s)
                    nxt.append(s)
        frontier = nxt
    out = []
    for rho in sorted(group):
        pt = [sum(r * g[j] for r, g in zip(rho, cone.generators)) for j in range(cone.n)]
        assert all(Fraction(x).denominator == 1 for x in pt)
        out.append(GammaPoint(point=tuple(int(x) for x in pt), rho=rho))
    return out


# ---------------------------------------------------------------------------
# Vol P(h)


def _h_variables(P: LatticePolytope) -> list[str]:
    return [f"h{i}" for i in range(len(P.facets))]


def _is_standard_simplex(P: LatticePolytope) -> bool:
    if P.lattice != Lattice.standard(P.n):
        return False
    expected = {tuple([0] * P.n)} | {tuple(int(i == j) for j in range(P.n)) for i in range(P.n)}
    return set(P.coords) == expected and len(P.coords) == P.n + 1


def _closed_form(P: LatticePolytope) -> MultiPoly | None:
    names = _h_variables(P)
    if _is_standard_simplex(P):
        lin = MultiPoly.constant(names, 1)
        for i in range(len(names)):
            lin = lin + MultiPoly.variable(names, i)
        return lin ** P.n * Fraction(1, factorial(P.n))
    if not P.factors:
        return None
    result = MultiPoly.constant(names, 1)
    index = {(f.normal, f.offset): i for i, f in enumerate(P.facets)}
    start = 0
    for Q in P.factors:
        qpoly = volume_polynomial(Q)
        mapping = []
        for g in Q.facets:
            u = (0,) * start + g.normal + (0,) * (P.n - start - Q.n)
            mapping.append(index[(u, g.offset)])
        result = result * qpoly.rename(names, mapping)
        start += Q.n
    return result


def _generic_volume_function(P: LatticePolytope):
    """h -> Vol P(h) (None when P(h) changed combinatorial type)."""
    vertex_keys = P.faces_of_dim(0)
    solvers = []
    for f in vertex_keys:
        idx = sorted(f.facets)
        N = [P.facets[i].normal for i in idx]
        solvers.append((next(iter(f.vertices)), idx, mx.inverse(mx.transpose(N))))
    flags = P.flags()

    def vol(h: Sequence[Fraction]):
        coords: dict[int, list[Fraction]] = {}
        for v, idx, ninv in solvers:
            rhs = [-(P.facets[i].offset + h[i]) for i in idx]
            y = mx.vecmat(rhs, ninv)
            for j, F in enumerate(P.facets):
                val = mx.dot(y, F.normal) + F.offset + h[j]
                if (v in F.vertices and val != 0) or (v not in F.vertices and val <= 0):
                    return None
            coords[v] = y
        ordered = [coords[i] for i in range(len(P.coords))]
        return _flag_volume(P, ordered, flags)

    return vol


def _binomial_poly(names, i: int, a: int, delta: Fraction) -> MultiPoly:
    """binom(h_i / delta, a) as a polynomial in h_i."""
    out = MultiPoly.constant(names, 1)
    x = MultiPoly.variable(names, i) * (1 / delta)
    for j in range(a):
        out = out * (x - j) * Fraction(1, j + 1)
    return out


def _generic_volume_polynomial(P: LatticePolytope, rng: random.Random, held_out: int = 4) -> MultiPoly:
    P.require_simple()
    names = _h_variables(P)
    m = len(names)
    vol = _generic_volume_function(P)
    lam = max((abs(f.offset) for f in P.facets), default=0)
    radius = Fraction(1, 4 * lam + 4)
    nodes = list(all_exponent_vectors(m, P.n))
    for _ in range(12):
        delta = radius / P.n
        values = {}
        for a in nodes:
            v = vol([delta * x for x in a])
            if v is None:
                break
            values[a] = v
        else:
            break
        radius /= 2
    else:
        raise ValueError("could not find a sample grid on which P(h) keeps its combinatorial type")

    # Newton forward differences on the corner lattice {delta * alpha : |alpha| <= n}
    poly = MultiPoly(names)
    for a in nodes:
        diff = Fraction(0)
        for b in _below(a):
            sign = (-1) ** (sum(a) - sum(b))
            weight = 1
            for ai, bi in zip(a, b):
                weight *= _comb(ai, bi)
            diff += sign * weight * values[b]
        if diff:
            term = MultiPoly.constant(names, diff)
            for i, ai in enumerate(a):
                if ai:
                    term = term * _binomial_poly(names, i, ai, delta)
            poly = poly + term

    checked = 0
    for _ in range(held_out * 10):
        h = [delta * Fraction(rng.randrange(0, 1000), 1000) for _ in range(m)]
        v = vol(h)
        if v is None:
            continue
        if poly.evaluate(h) != v:
            raise ValueError("Vol P(h) interpolation failed on a held-out sample")
        checked += 1
        if checked == held_out:
            break
    return poly


def _comb(a: int, b: int) -> int:
    return factorial(a) // (factorial(b) * factorial(a - b))


def _below(a: tuple[int, ...]):
    if not a:
        yield ()
        return
    for x in range(a[0] + 1):
        for rest in _below(a[1:]):
            yield (x,) + rest


def volume_polynomial(P: LatticePolytope, method: str = "auto", seed: int = 0) -> MultiPoly:
    """Vol P(h) as a polynomial in h_F (variable h{i} belongs to P.facets[i]).

    ``method``: "closed" uses the closed forms for standard simplices and
    products of polytopes, "generic" interpolates exact volumes of P(h)
    (n <= 3), "auto" tries the closed form first.
    """
    P.require_simple()
    if method in ("auto", "closed"):
        poly = _closed_form(P)
        if poly is not None:
            return poly
        if method == "closed":
            raise ValueError("no closed form for this polytope")
    if method not in ("auto", "generic"):
        raise ValueError(f"unknown method {method!r}")
    if P.n > 3:
        raise ValueError("generic Vol P(h) interpolation is limited to n <= 3")
    return _generic_volume_polynomial(P, random.Random(seed))


# ---------------------------------------------------------------------------
# constructors


def simplex(n: int) -> LatticePolytope:
    """Delta_n = conv{0, e_1, ..., e_n}."""
    pts = [[0] * n] + [[int(i == j) for j in range(n)] for i in range(n)]
    return facets_from_vertices(pts)


def product(P: LatticePolytope, Q: LatticePolytope) -> LatticePolytope:
    n, m = P.n, Q.n
    basis = [list(r) + [0] * m for r in P.lattice.basis] + [[0] * n + list(r) for r in Q.lattice.basis]
    pts = [list(v) + list(w) for v in P.vertices for w in Q.vertices]
    factors = (P.factors or (P,)) + (Q.factors or (Q,))
    return facets_from_vertices(pts, Lattice(basis), factors=factors)


def cube(n: int) -> LatticePolytope:
    """The unit n-cube (Delta_1)^n."""
    P = simplex(1)
    for _ in range(n - 1):
        P = product(P, simplex(1))
    return P


def prism() -> LatticePolytope:
    """Delta_2 x Delta_1, a nonsingular triangular prism."""
    return product(simplex(2), simplex(1))


def singular_triangle() -> LatticePolytope:
    """conv{(0,0), (1,0), (1,2)}: simple, with one normal cone of index 2."""
    return facets_from_vertices([[0, 0], [1, 0], [1, 2]])


def polytope_from_json(data: dict) -> LatticePolytope:
    """Parse {"lattice": optional basis, "vertices": [[...], ...]}."""
    if "vertices" not in data:
        raise ValueError("polytope JSON: missing field 'vertices'")
    try:
        verts = [[parse_rational(x) for x in v] for v in data["vertices"]]
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"polytope JSON: bad entry in 'vertices': {exc}") from None
    L = None
    if data.get("lattice") is not None:
        try:
            L = Lattice.from_json(data["lattice"])
        except (TypeError, ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"polytope JSON: bad 'lattice': {exc}") from None
    return facets_from_vertices(verts, L)
