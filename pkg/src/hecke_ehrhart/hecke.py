"""Hecke operators T(p,k) on Ehrhart polynomials and face-volume functionals."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from functools import partial
from typing import Sequence

from ._parallel import pmap
from .ehrhart import EhrhartPolynomial, ehrhart, regularized
from .exactmath import UniPoly
from .grassmann import FiniteSubspace, grassmannian_count, nu_closed
from .lattice import (
    Lattice,
    enumerate_coindex_N_superlattices,
    enumerate_superlattices,
    reduction_mod_p,
)
from .polytope import Face, LatticePolytope, cone_index, face_volume, normal_cone, normal_cone_in, vol_l

__all__ = [
    "HECKE_BUDGET",
    "HeckeResult",
    "Theorem1Check",
    "hecke_ehrhart",
    "rel1_prediction",
    "check_theorem1",
    "hecke_vol",
    "prop_A_check",
    "chain_multiplicities",
    "hecke_p_squared",
    "hecke_p_squared_algebra",
    "average_regularized",
]

# most superlattices a single Hecke image may sum over
HECKE_BUDGET = 20_000


@dataclass
class HeckeResult:
    """T(p,k)E(P) together with the summands E(P_M), M in L_k."""

    polytope: LatticePolytope
    p: int
    k: int
    lattices: list[Lattice]
    polynomials: list[EhrhartPolynomial]
    total: UniPoly

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "k": self.k,
            "count": len(self.lattices),
            "total": self.total.to_json(),
            "lattices": [
                {"basis": M.to_json(), "ehrhart": E.poly.to_json()}
                for M, E in sorted(zip(self.lattices, self.polynomials), key=lambda pair: pair[0])
            ],
        }


def _ehrhart_over(P: LatticePolytope, M: Lattice) -> EhrhartPolynomial:
    return ehrhart(P, M)


def _sum(polys: Sequence[UniPoly]) -> UniPoly:
    total = UniPoly()
    for q in polys:
        total = total + q
    return total


def hecke_ehrhart(P: LatticePolytope, p: int, k: int) -> HeckeResult:
    """T(p,k)E(P) = sum over M in L_k of E(P_M), by counting M-points of tP."""
    n = P.n
    if not 1 <= k <= n:
        raise ValueError("need 1 <= k <= n")
    size = grassmannian_count(k, n, p)
    if size > HECKE_BUDGET:
        raise ValueError(f"T({p},{k}) in dimension {n} sums over {size} lattices (budget {HECKE_BUDGET})")
    lattices = enumerate_superlattices(n, p, k, base=P.lattice).members
    polys = pmap(partial(_ehrhart_over, P), lattices)
    return HeckeResult(P, p, k, lattices, polys, _sum([E.poly for E in polys]))


def rel1_prediction(E: UniPoly, n: int, p: int, k: int) -> UniPoly:
    """G_{k-1,n-1} E(pt) + (G_{k,n} - G_{k-1,n-1}) E(t)."""
    g1 = grassmannian_count(k - 1, n - 1, p)
    g = grassmannian_count(k, n, p)
    return E.scale_argument(p) * g1 + E * (g - g1)


@dataclass
class Theorem1Check:
    n: int
    p: int
    k: int
    base: UniPoly
    image: UniPoly
    ratios: dict[int, Fraction] = field(default_factory=dict)
    expected: dict[int, int] = field(default_factory=dict)
    rel1: bool = False

    @property
    def ok(self) -> bool:
        return self.rel1 and all(self.ratios[l] == self.expected[l] for l in self.ratios)

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "p": self.p,
            "k": self.k,
            "ok": self.ok,
            "rel1": self.rel1,
            "ratios": {str(l): str(r) for l, r in sorted(self.ratios.items())},
            "expected": {str(l): str(v) for l, v in sorted(self.expected.items())},
        }


def check_theorem1(P: LatticePolytope, p: int, k: int, result: HeckeResult | None = None) -> Theorem1Check:
    """Compare c_l(T(p,k)E)/c_l(E) with nu_{n,k,l}(p) and test the E(pt) identity."""
    base = ehrhart(P).poly
    result = result or hecke_ehrhart(P, p, k)
    chk = Theorem1Check(P.n, p, k, base, result.total)
    for l in range(P.n + 1):
        chk.expected[l] = nu_closed(P.n, k, l, p)
        if base.coeff(l) != 0:
            chk.ratios[l] = result.total.coeff(l) / base.coeff(l)
        elif result.total.coeff(l) != 0:
            chk.ratios[l] = Fraction(-1)  # cannot match: image nonzero where E vanishes
    chk.rel1 = rel1_prediction(base, P.n, p, k) == result.total
    return chk


def _vol_l_over(P: LatticePolytope, l: int, M: Lattice) -> Fraction:
    return vol_l(P.over(M), l)


def hecke_vol(P: LatticePolytope, p: int, k: int, l: int) -> Fraction:
    """T(p,k)Vol_l(P) = sum over M in L_k of Vol_l(P_M)."""
    lattices = enumerate_superlattices(P.n, p, k, base=P.lattice).members
    return sum(pmap(partial(_vol_l_over, P, l), lattices), Fraction(0))


def _reduce(vectors: Sequence[Sequence[int]], p: int, n: int) -> FiniteSubspace:
    return FiniteSubspace.span(p, n, [[x % p for x in v] for v in vectors])


def prop_A_check(
    P: LatticePolytope, f: Face, M: Lattice, p: int, P_M: LatticePolytope | None = None
) -> tuple[int, int, int]:
    """Check how Vol f and Ind sigma_f change when passing from L to M.

    Left sides are measured directly: Vol f_M on P_M, and Ind of sigma_f
    with its spanning points taken primitive in M.  Right sides come from
    the reductions mod p (M-bar, V-bar_f, C-bar_f and the lines C-bar_rho).
    Returns (volume exponent, index exponent, r).

    The normal cone of P_M proper (generators primitive in the dual of M)
    obeys the same law with M-bar replaced by its annihilator; that is
    checked as well.
    """
    n = P.n
    L = P.lattice
    P_M = P_M or P.over(M)
    fm = P_M.faces[f.vertices]
    ind_f = cone_index(normal_cone(P, f))

    vol_ratio = face_volume(P_M, fm) / face_volume(P, f)
    ind_ratio = Fraction(cone_index(normal_cone_in(P, f, M)), ind_f)
    dual_ratio = Fraction(cone_index(normal_cone(P_M, fm)), ind_f)

    Mbar = reduction_mod_p(M, L, p)
    Vf = _reduce(P.tangent_basis(f), p, n)
    Cf = _reduce(P.normal_basis(f), p, n)
    rays = [_reduce([P.facets[i].normal], p, n) for i in f.facets]
    r = sum(1 for ray in rays if Mbar.contains(ray))
    vol_exp = Mbar.intersection_dim(Vf)
    ind_exp = Mbar.intersection_dim(Cf) - r
    Nbar = Mbar.perp()
    dual_exp = Nbar.intersection_dim(Cf) - sum(1 for ray in rays if Nbar.contains(ray))

    where = f"P={P!r}, face={sorted(f.vertices)}, M={M!r}"
    if vol_ratio != Fraction(p) ** vol_exp:
        raise AssertionError(f"volume exponent mismatch for {where}: ratio {vol_ratio}, predicted p^{vol_exp}")
    if ind_ratio != Fraction(p) ** ind_exp:
        raise AssertionError(f"index exponent mismatch for {where}: ratio {ind_ratio}, predicted p^{ind_exp}")
    if dual_ratio != Fraction(p) ** dual_exp:
        raise AssertionError(f"dual index mismatch for {where}: ratio {dual_ratio}, predicted p^{dual_exp}")
    return vol_exp, ind_exp, r


def chain_multiplicities(L: Lattice, p: int) -> Counter:
    """How often each M2 occurs in a chain L < M1 < M2 of two index-p steps."""
    n = L.n
    chains: Counter = Counter()
    for M1 in enumerate_superlattices(n, p, 1, base=L):
        for M2 in enumerate_superlattices(n, p, 1, base=M1):
            chains[M2] += 1
    return chains


def hecke_p_squared_algebra(P: LatticePolytope, p: int) -> UniPoly:
    """T(p,1)^2 E(P) - p T(p,2) E(P), through chains of superlattices."""
    chains = chain_multiplicities(P.lattice, p)
    lattices = sorted(chains)
    polys = pmap(partial(_ehrhart_over, P), lattices)
    total = _sum([E.poly * chains[M] for M, E in zip(lattices, polys)])
    if P.n >= 2:
        total = total - hecke_ehrhart(P, p, 2).total * p
    return total


def hecke_p_squared(P: LatticePolytope, p: int, check: bool = True) -> UniPoly:
    """T(p^2)E(P): the sum of E(P_M) over all superlattices M of coindex p^2.

    With ``check`` the result is compared against the Hecke-algebra
    combination T(p,1)^2 - p T(p,2).
    """
    family = enumerate_coindex_N_superlattices(P.n, p, 2, base=P.lattice)
    direct = _sum([E.poly for E in pmap(partial(_ehrhart_over, P), family)])
    if check:
        algebra = hecke_p_squared_algebra(P, p)
        if algebra != direct:
            raise AssertionError(f"T(p^2) mismatch: direct {direct}, algebra {algebra}")
    return direct


def _regularized_over(P: LatticePolytope, M: Lattice) -> UniPoly:
    return regularized(ehrhart(P, M), P)


def average_regularized(P: LatticePolytope, family: Sequence[Lattice]) -> UniPoly:
    """(1/#family) * sum of the regularized Ehrhart polynomials of P over the family."""
    if not family:
        raise ValueError("empty lattice family")
    total = _sum(pmap(partial(_regularized_over, P), family))
    return total * Fraction(1, len(family))
