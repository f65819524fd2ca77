"""Todd operators: circle coefficients c(a,k), the Brion-Vergne coefficient formula,
distribution relations, and the squarefree Hecke identities for Todd terms."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import product as iproduct
from typing import Iterator, Sequence

from .exactmath import CyclotomicNumber, MultiPoly, bernoulli, cyclotomic_pow, format_rational
from .grassmann import FiniteSubspace, grassmannian_count, nu_closed
from .lattice import Lattice, enumerate_superlattices, reduction_mod_p
from .polytope import (
    Cone,
    Face,
    LatticePolytope,
    cone_index,
    face_volume,
    is_nonsingular,
    normal_cone,
    normal_cone_in,
    parallelepiped_points,
    volume_polynomial,
)

__all__ = [
    "circle_coefficient",
    "circle_series",
    "distribution_sides",
    "distribution_check",
    "theta",
    "hurwitz_values",
    "hurwitz_numeric_check",
    "ToddTerm",
    "compositions",
    "gamma_sum",
    "todd_terms",
    "kp_coefficient",
    "squarefree_derivative",
    "annihilates",
    "Theorem2Check",
    "theorem2_squarefree_check",
    "sqrfree_identity",
    "dedekind_contribution",
    "Table3Report",
    "table3_report",
]


# ---------------------------------------------------------------------------
# circle coefficients


def circle_series(a: CyclotomicNumber | int | Fraction, order: int) -> list[CyclotomicNumber]:
    """c(a,0), ..., c(a,order): coefficients of X / (1 - a exp(-X)).

    Series division with exact coefficients.  Writing
    1 - a e^{-X} = sum d_m X^m, we have d_0 = 1 - a and
    d_m = -a (-1)^m / m!; when a = 1 the factor X is divided out first.
    """
    if not isinstance(a, CyclotomicNumber):
        a = CyclotomicNumber.rational(a)
    one = CyclotomicNumber.rational(1, a.m)
    d = [one - a] + [a * Fraction(-((-1) ** m), math.factorial(m)) for m in range(1, order + 2)]
    c: list[CyclotomicNumber] = []
    if d[0].is_zero():
        # X / (X * sum_{m>=0} d_{m+1} X^m)
        e = d[1:]
        inv0 = e[0].inverse()
        for j in range(order + 1):
            acc = one if j == 0 else one * 0
            for i in range(j):
                acc = acc - c[i] * e[j - i]
            c.append(acc * inv0)
    else:
        inv0 = d[0].inverse()
        for j in range(order + 1):
            acc = one if j == 1 else one * 0
            for i in range(j):
                acc = acc - c[i] * d[j - i]
            c.append(acc * inv0)
    return c


def circle_coefficient(a: CyclotomicNumber | int | Fraction, k: int) -> CyclotomicNumber:
    """c(a,k), the k-th coefficient of the operator d/(1 - a exp(-d)); c(1,k) = B_k/k!."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    return circle_series(a, k)[k]


@lru_cache(maxsize=None)
def _circle_at(rho: Fraction, order: int) -> tuple[CyclotomicNumber, ...]:
    """c(exp(2 pi i rho), k) for k <= order."""
    a = cyclotomic_pow(rho.denominator, rho.numerator)
    return tuple(circle_series(a, order))


def distribution_sides(n: int, k: int) -> tuple[Fraction, Fraction]:
    """Both sides of sum_{j=1}^{n-1} c(w^j, k) = (n^k - 1) B_k / k!, w = exp(2 pi i/n).

    The left side is summed in Q(zeta_n) and must reduce to a rational.
    """
    if n < 2 or k < 1:
        raise ValueError("need n >= 2 and k >= 1")
    total = CyclotomicNumber.rational(0, n)
    for j in range(1, n):
        total = total + _circle_at(Fraction(j, n), k)[k]
    lhs = total.to_rational()
    rhs = Fraction(n**k - 1, math.factorial(k)) * bernoulli(k)
    return lhs, rhs


def distribution_check(n: int, k: int) -> bool:
    lhs, rhs = distribution_sides(n, k)
    return lhs == rhs


def theta(k: int, u: Fraction | int) -> CyclotomicNumber:
    """Circle function theta_k(u) = (-1)^k k! c(exp(-2 pi i u), k), in Q(zeta_q), q = den(u).

    For k > 1, theta_k(0) = B_k; theta_1(0) = -B_1.  For odd k and
    u not in (1/2)Z the value is purely imaginary, so it is returned as a
    cyclotomic number rather than forced into Q.
    """
    u = Fraction(u)
    rho = Fraction(-u.numerator % u.denominator, u.denominator)
    return _circle_at(rho, k)[k] * ((-1) ** k * math.factorial(k))


def hurwitz_values(k: int, u: Fraction, C: int = 10**4) -> tuple[complex, complex]:
    """(zeta(k,u), -(2 pi i)^k / k! * theta_k(u)) as floating-point numbers.

    zeta(k,u) is the symmetric sum over |m| < C of (m+u)^{-k} plus the
    tails over |m| >= C, estimated by the Euler-Maclaurin formula.
    """
    if k < 2:
        raise ValueError("the special value formula used here needs k >= 2")
    u = Fraction(u)
    uf = float(u)
    terms = [(m + uf) ** (-k) for m in range(-C + 1, C) if m + u != 0]
    partial = math.fsum(terms)

    def tail(shift: float, sign: int) -> float:
        # sum_{m >= C} sign * (m + shift)^{-k}
        x = C + shift
        integral = x ** (1 - k) / (k - 1)
        d1 = -k * x ** (-k - 1)
        d3 = -k * (k + 1) * (k + 2) * x ** (-k - 3)
        return sign * (integral + x ** (-k) / 2 - d1 / 12 + d3 / 720)

    # negative side: m = -j, (u - j)^{-k} = (-1)^k (j - u)^{-k}
    lhs = partial + tail(uf, 1) + tail(-uf, (-1) ** k)
    rhs = -((2j * cmath.pi) ** k) / math.factorial(k) * theta(k, u).to_complex()
    return complex(lhs), rhs


def hurwitz_numeric_check(k: int, u: Fraction, C: int = 10**4, tol: float = 1e-9) -> bool:
    lhs, rhs = hurwitz_values(k, u, C)
    return abs(lhs - rhs) <= tol


# ---------------------------------------------------------------------------
# Todd terms


@dataclass(frozen=True)
class ToddTerm:
    """A(f, pi) * prod_{F >= f} (d/dh_F)^{pi(F)}."""

    face: Face
    partition: tuple[tuple[int, int], ...]  # (facet index, part)
    coefficient: Fraction

    @property
    def degree(self) -> int:
        return sum(k for _, k in self.partition)

    def exponents(self, nfacets: int) -> tuple[int, ...]:
        e = [0] * nfacets
        for i, k in self.partition:
            e[i] = k
        return tuple(e)

    def apply(self, V: MultiPoly) -> Fraction:
        """(d_f^pi V)(0): the matching coefficient of V times prod pi(F)!."""
        e = self.exponents(V.nvars)
        scale = 1
        for k in e:
            scale *= math.factorial(k)
        return self.coefficient * V.terms.get(e, Fraction(0)) * scale


def compositions(total: int, parts: int) -> Iterator[tuple[int, ...]]:
    """Ordered tuples of ``parts`` positive integers summing to ``total``."""
    if parts == 0:
        if total == 0:
            yield ()
        return
    for first in range(1, total - parts + 2):
        for rest in compositions(total - first, parts - 1):
            yield (first,) + rest


def gamma_sum(cone: Cone, parts: Sequence[int]) -> Fraction:
    """sum over g in Q(sigma) cap L of prod_i c(a_i(g), parts[i]); asserted rational."""
    order = max(parts, default=0)
    total = CyclotomicNumber.rational(0)
    for g in parallelepiped_points(cone):
        term = CyclotomicNumber.rational(1)
        for rho, k in zip(g.rho, parts):
            term = term * _circle_at(rho, order)[k]
        total = total + term
    return total.to_rational()


def todd_terms(P: LatticePolytope, l: int) -> list[ToddTerm]:
    """The degree-l part of the Todd operator of P's normal fan, grouped by (f, pi)."""
    P.require_simple()
    out = []
    for f in sorted(P.faces.values(), key=lambda f: (-f.dim, sorted(f.vertices))):
        codim = P.n - f.dim
        if codim > l or (codim == 0 and l > 0):
            continue
        cone = normal_cone(P, f)
        for parts in compositions(l, codim):
            coeff = gamma_sum(cone, parts)
            out.append(ToddTerm(f, tuple(zip(cone.facets, parts)), coeff))
    return out


def kp_coefficient(P: LatticePolytope, l: int, V: MultiPoly | None = None) -> Fraction:
    """c_{n-l} of E(P) as Td_l applied to Vol P(h) at h = 0."""
    if not 0 <= l <= P.n:
        raise ValueError("need 0 <= l <= n")
    V = V if V is not None else volume_polynomial(P)
    return sum((t.apply(V) for t in todd_terms(P, l)), Fraction(0))


def squarefree_derivative(P: LatticePolytope, f: Face, V: MultiPoly) -> Fraction:
    """prod_{F >= f} d/dh_F applied to Vol P(h), at h = 0."""
    e = [0] * len(P.facets)
    for i in f.facets:
        e[i] = 1
    return V.terms.get(tuple(e), Fraction(0))


def annihilates(P: LatticePolytope, V: MultiPoly, w: Sequence[int]) -> bool:
    """Whether sum_F <w, u_F> d/dh_F kills Vol P(h) (w in lattice coordinates)."""
    acc = MultiPoly(V.variables)
    for i, F in enumerate(P.facets):
        c = sum(a * b for a, b in zip(w, F.normal))
        if c:
            acc = acc + V.derivative(i) * c
    return acc.is_zero()


# ---------------------------------------------------------------------------
# squarefree Hecke identities

CONVENTIONS = ("dual", "primal")


def _image_cone(P: LatticePolytope, P_M: LatticePolytope, f: Face, M: Lattice, convention: str) -> Cone:
    """Normal cone of f_M.

    "dual": the normal cone of P_M as a lattice polytope for M (spanning
    points primitive in the dual lattice of M); this is the cone to which
    the Brion-Vergne formula applies.
    "primal": sigma_f kept fixed in V with spanning points primitive in M.
    """
    if convention == "dual":
        return normal_cone(P_M, P_M.faces[f.vertices])
    if convention == "primal":
        return normal_cone_in(P, f, M)
    raise ValueError(f"unknown convention {convention!r}")


def _superlattices(P: LatticePolytope, p: int, k: int) -> list[Lattice]:
    if k == 0:
        return [P.lattice]
    return enumerate_superlattices(P.n, p, k, base=P.lattice).members


@dataclass
class Theorem2Check:
    face: Face
    p: int
    k: int
    lhs: Fraction
    rhs: Fraction

    @property
    def ok(self) -> bool:
        return self.lhs == self.rhs


def theorem2_squarefree_check(
    P: LatticePolytope, f: Face, p: int, k: int, convention: str = "dual"
) -> Theorem2Check:
    """sum_M A(f_M, 1) Vol f_M / Ind sigma_{f_M}  versus  nu_{n,k,n-l}(p) Vol f / 2^l."""
    if not is_nonsingular(P):
        raise ValueError("the squarefree identity is checked for nonsingular P only")
    l = P.n - f.dim
    lhs = Fraction(0)
    for M in _superlattices(P, p, k):
        P_M = P.over(M)
        cone = _image_cone(P, P_M, f, M, convention)
        lhs += gamma_sum(cone, [1] * l) * face_volume(P_M, P_M.faces[f.vertices]) / cone_index(cone)
    rhs = nu_closed(P.n, k, P.n - l, p) * face_volume(P, f) / 2**l
    return Theorem2Check(f, p, k, lhs, rhs)


def sqrfree_identity(l: int, j: int, p: int, convention: str = "dual") -> tuple[Fraction, Fraction]:
    """For P = (Delta_1)^l and its vertex at the origin:
    (sum over M in L_j of A(f_M, 1) / Ind sigma_{f_M},  G_{j,l}(p) / 2^l)."""
    from .polytope import cube

    P = cube(l)
    f = next(v for v in P.faces_of_dim(0) if P.coords[next(iter(v.vertices))] == (0,) * l)
    lhs = Fraction(0)
    for M in _superlattices(P, p, j):
        cone = _image_cone(P, P.over(M), f, M, convention)
        lhs += gamma_sum(cone, [1] * l) / cone_index(cone)
    return lhs, Fraction(grassmannian_count(j, l, p), 2**l)


def dedekind_contribution(p: int) -> tuple[Fraction, Fraction]:
    """Both evaluations of the singular contribution for an edge in dimension 3.

    Returns (sum over [a:b] != 0, infinity of A*(a,b), the double sum
    sum_{i,j=1}^{p-1} 1/((1-w^i)(1-w^j))); both should be (p-1)^2/4.
    """
    w = [cyclotomic_pow(p, e) for e in range(p)]
    one = CyclotomicNumber.rational(1, p)
    inv = [None] + [(one - w[e]).inverse() for e in range(1, p)]
    projective = CyclotomicNumber.rational(0, p)
    for beta in range(1, p):
        # A*(1, beta) = sum_{j=1}^{p-1} 1/((1 - w^j)(1 - w^{beta j}))
        for j in range(1, p):
            projective = projective + inv[j] * inv[(beta * j) % p]
    double = CyclotomicNumber.rational(0, p)
    for i, j in iproduct(range(1, p), repeat=2):
        double = double + inv[i] * inv[j]
    return projective.to_rational(), double.to_rational()


@dataclass
class Table3Row:
    name: str
    size: int
    vol_ratios: set = field(default_factory=set)
    ind_ratios: set = field(default_factory=set)
    a_sum: Fraction = Fraction(0)
    singular_sum: Fraction = Fraction(0)
    contribution: Fraction = Fraction(0)

    def _fmt(self, values) -> str:
        return ",".join(format_rational(v) for v in sorted(values))


@dataclass
class Table3Report:
    p: int
    vol_f: Fraction
    rows: list[Table3Row]

    @property
    def total(self) -> Fraction:
        """sum_M A(f_M,1) Vol f_M / Ind sigma_{f_M}, divided by Vol f."""
        return sum((r.contribution for r in self.rows), Fraction(0))

    @property
    def expected(self) -> Fraction:
        return Fraction(self.p**2 + 2 * self.p, 4)

    @property
    def ok(self) -> bool:
        return self.total == self.expected

    def format(self) -> str:
        header = ["S_i", "#S_i", "Vol f_M/Vol f", "Ind s_f/Ind s_f_M", "sum A(f_M,1)", "contribution"]
        body = [
            [r.name, str(r.size), r._fmt(r.vol_ratios), r._fmt(r.ind_ratios), format_rational(r.a_sum),
             format_rational(r.contribution)]
            for r in self.rows
        ]
        rows = [header] + body
        widths = [max(len(r[i]) for r in rows) for i in range(len(header))]
        lines = [" | ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip() for r in rows]
        lines.insert(1, "-+-".join("-" * w for w in widths))
        lines.append(f"total = {format_rational(self.total)} (expected (p^2+2p)/4 = {format_rational(self.expected)})")
        return "\n".join(lines)

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "rows": [
                {
                    "stratum": r.name,
                    "size": r.size,
                    "vol_ratio": [format_rational(v) for v in sorted(r.vol_ratios)],
                    "ind_ratio": [format_rational(v) for v in sorted(r.ind_ratios)],
                    "sum_A": format_rational(r.a_sum),
                    "sum_A_singular": format_rational(r.singular_sum),
                    "contribution": format_rational(r.contribution),
                }
                for r in self.rows
            ],
            "total": format_rational(self.total),
            "ok": self.ok,
        }


def table3_report(P: LatticePolytope, f: Face, p: int, convention: str = "primal") -> Table3Report:
    """T(p,1) on the squarefree c_1-term of an edge f of a nonsingular 3-polytope, by strata.

    Points M-bar of P(V-bar) are sorted into S_1 = {V_f}, S_2 = {C_1, C_2},
    S_3 = C_f minus S_2 and S_4 = everything else, using the set
    definitions.  The default convention keeps sigma_f fixed and measures
    it in M, which is how the strata are described; "dual" uses the normal
    cones of the polytopes P_M instead (same total, different strata).
    """
    if P.n != 3 or f.dim != 1:
        raise ValueError("table3_report expects an edge of a 3-dimensional polytope")
    if not is_nonsingular(P):
        raise ValueError("table3_report expects a nonsingular polytope")
    n = P.n
    red = lambda vs: FiniteSubspace.span(p, n, [[x % p for x in v] for v in vs])  # noqa: E731
    Vf = red(P.tangent_basis(f))
    Cf = red(P.normal_basis(f))
    Cs = [red([P.facets[i].normal]) for i in sorted(f.facets)]
    vol_f = face_volume(P, f)
    rows = {name: Table3Row(name, 0) for name in ("S_1", "S_2", "S_3", "S_4")}
    quarter = Fraction(1, 4)
    for M in enumerate_superlattices(n, p, 1, base=P.lattice):
        Mbar = reduction_mod_p(M, P.lattice, p)
        if Mbar == Vf:
            name = "S_1"
        elif Mbar in Cs:
            name = "S_2"
        elif Cf.contains(Mbar):
            name = "S_3"
        else:
            name = "S_4"
        P_M = P.over(M)
        cone = _image_cone(P, P_M, f, M, convention)
        a = gamma_sum(cone, [1, 1])
        ind = cone_index(cone)
        vol_ratio = face_volume(P_M, P_M.faces[f.vertices]) / vol_f
        row = rows[name]
        row.size += 1
        row.vol_ratios.add(vol_ratio)
        row.ind_ratios.add(Fraction(1, ind))
        row.a_sum += a
        row.singular_sum += a - quarter
        row.contribution += a * vol_ratio / ind
    return Table3Report(p, vol_f, list(rows.values()))
