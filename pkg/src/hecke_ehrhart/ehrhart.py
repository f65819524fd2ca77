"""Lattice-point counting and Ehrhart polynomials."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import ceil, floor

import numpy as np

from . import _matrix as mx
from .exactmath import UniPoly, interpolate
from .lattice import Lattice
from .polytope import LatticePolytope, volume

__all__ = ["EhrhartPolynomial", "count_points", "ehrhart", "regularized"]

# maximal number of slices (grid points in the first n-1 coordinates)
_SLICE_LIMIT = 1 << 22


@dataclass(frozen=True)
class EhrhartPolynomial:
    """E(P)(t) = #(tP cap M), with the (t, count) pairs it was interpolated from."""

    poly: UniPoly
    samples: tuple[tuple[int, int], ...]

    def coeff(self, l: int) -> Fraction:
        return self.poly.coeff(l)

    @property
    def degree(self) -> int:
        return self.poly.degree

    def __call__(self, t):
        return self.poly(t)

    def __str__(self):
        return self.poly.format()


def _integer_system(P: LatticePolytope, R, t: int) -> tuple[np.ndarray, np.ndarray]:
    """Facet inequalities A y + b >= 0 for x = y R, scaled to integers."""
    rows, rhs = [], []
    for u, lam in P.ambient_inequalities:
        a = [mx.dot(r, u) for r in R]
        d = mx.lcm_of_denominators(a)
        rows.append([int(x * d) for x in a])
        rhs.append(int(t * lam * d))
    return rows, rhs


def count_points(P: LatticePolytope, M: Lattice | None = None, t: int = 1) -> int:
    """#(tP cap M), by enumerating M-points in the bounding box of tP.

    Points are enumerated in the coordinates of an LLL-reduced basis of M so
    that the box stays tight even for very skewed superlattices.
    """
    if t < 0:
        raise ValueError("dilation factor t must be nonnegative")
    M = M or P.lattice
    if M.n != P.n:
        raise ValueError("dimension mismatch")
    if t == 0:
        return 1
    n = P.n
    R = M.reduced_basis
    rinv = mx.inverse(R)
    ys = [mx.vecmat([t * x for x in v], rinv) for v in P.vertices]
    lo = [floor(min(y[i] for y in ys)) for i in range(n)]
    hi = [ceil(max(y[i] for y in ys)) for i in range(n)]
    rows, rhs = _integer_system(P, R, t)

    bound = max(abs(lo[i]) + abs(hi[i]) for i in range(n)) + 1
    big = max(sum(abs(x) for x in row) * bound + abs(b) for row, b in zip(rows, rhs))
    dtype = np.int64 if big < 2**62 else object
    A = np.array(rows, dtype=dtype)
    b = np.array(rhs, dtype=dtype)

    # enumerate the first n-1 coordinates; the last one ranges over an interval
    axes = [np.arange(lo[i], hi[i] + 1, dtype=np.int64) for i in range(n - 1)]
    if axes:
        grid = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, n - 1).astype(dtype)
    else:
        grid = np.zeros((1, 0), dtype=dtype)
    if len(grid) > _SLICE_LIMIT:
        raise ValueError(f"counting box too large ({len(grid)} slices)")
    partial = grid @ A[:, :-1].T + b if n > 1 else np.tile(b, (1, 1))
    last = A[:, -1]
    low = np.full(len(grid), lo[-1], dtype=dtype)
    high = np.full(len(grid), hi[-1], dtype=dtype)
    ok = np.ones(len(grid), dtype=bool)
    for j, a in enumerate(last.tolist()):
        col = partial[:, j]
        if a > 0:
            low = np.maximum(low, -((col) // a))
        elif a < 0:
            high = np.minimum(high, col // (-a))
        else:
            ok &= col >= 0
    return int(np.where(ok, np.maximum(high - low + 1, 0), 0).sum())


def ehrhart(P: LatticePolytope, M: Lattice | None = None) -> EhrhartPolynomial:
    """Ehrhart polynomial of P with respect to M (default: P's own lattice).

    Interpolated from counts at t = 0..n; c_0 = 1 and c_n = Vol_M(P) are
    asserted.
    """
    M = M or P.lattice
    samples = tuple((t, count_points(P, M, t)) for t in range(P.n + 1))
    poly = interpolate(samples)
    vol_m = volume(P) * P.lattice.det / M.det
    if poly.coeff(0) != 1:
        raise AssertionError(f"Ehrhart constant term is {poly.coeff(0)}, expected 1")
    if poly.coeff(P.n) != vol_m:
        raise AssertionError(f"Ehrhart leading term {poly.coeff(P.n)} differs from volume {vol_m}")
    return EhrhartPolynomial(poly=poly, samples=samples)


def regularized(E: EhrhartPolynomial | UniPoly, P: LatticePolytope | None = None) -> UniPoly:
    """E(P)(t) - Vol(P) t^n: the Ehrhart polynomial with its leading term dropped."""
    poly = E.poly if isinstance(E, EhrhartPolynomial) else E
    n = P.n if P is not None else poly.degree
    if n < 0:
        return poly
    return poly - UniPoly.monomial(n, poly.coeff(n))
