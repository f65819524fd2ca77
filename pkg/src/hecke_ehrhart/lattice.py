"""Full-rank lattices in Q^n and enumeration of Hecke superlattices.

A lattice is stored by a rational basis (rows) relative to Z^n; its
canonical form is the row-style Hermite normal form, which is what
equality and hashing use.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from itertools import combinations, product
from typing import Iterator, Sequence

from . import _matrix as mx
from .exactmath import format_rational, is_prime, parse_rational
from .grassmann import FiniteSubspace

__all__ = [
    "Lattice",
    "SuperlatticeSet",
    "enumerate_superlattices",
    "enumerate_coindex_N_superlattices",
    "reduction_mod_p",
]


class Lattice:
    """Lattice spanned by the rows of an invertible rational matrix."""

    def __init__(self, basis: Sequence[Sequence]):
        rows = [[Fraction(x) for x in row] for row in basis]
        n = len(rows)
        if n == 0 or any(len(r) != n for r in rows):
            raise ValueError("basis must be a square matrix")
        if mx.det(rows) == 0:
            raise ValueError("basis rows are linearly dependent")
        d = mx.lcm_of_denominators(x for row in rows for x in row)
        h = mx.hnf([[int(x * d) for x in row] for row in rows])
        self.n = n
        self.basis: tuple[tuple[Fraction, ...], ...] = tuple(tuple(Fraction(x, d) for x in row) for row in h)

    @classmethod
    def standard(cls, n: int) -> "Lattice":
        return cls([[int(i == j) for j in range(n)] for i in range(n)])

    def scaled(self, c) -> "Lattice":
        c = Fraction(c)
        return Lattice([[c * x for x in row] for row in self.basis])

    @cached_property
    def det(self) -> Fraction:
        """Covolume |det(basis)|."""
        return abs(mx.det(self.basis))

    @cached_property
    def _inverse(self) -> list[list[Fraction]]:
        return mx.inverse(self.basis)

    def coordinates(self, x: Sequence) -> list[Fraction]:
        """Coordinates c with x = c * basis."""
        return mx.vecmat([Fraction(v) for v in x], self._inverse)

    def from_coordinates(self, c: Sequence) -> list[Fraction]:
        return mx.vecmat(list(c), self.basis)

    def contains(self, x: Sequence) -> bool:
        return all(c.denominator == 1 for c in self.coordinates(x))

    def contains_lattice(self, other: "Lattice") -> bool:
        return all(self.contains(row) for row in other.basis)

    def index_over(self, sub: "Lattice") -> Fraction:
        """[self : sub] as covolume ratio (an integer when sub is contained in self)."""
        return sub.det / self.det

    @cached_property
    def reduced_basis(self) -> list[list[Fraction]]:
        """An LLL-reduced basis; used only to keep point-counting boxes compact."""
        return mx.lll_reduce([list(r) for r in self.basis])

    def __eq__(self, other):
        if not isinstance(other, Lattice):
            return NotImplemented
        return self.basis == other.basis

    def __hash__(self):
        return hash(self.basis)

    def __lt__(self, other: "Lattice"):
        return self.basis < other.basis

    def __repr__(self):
        rows = ", ".join("[" + ", ".join(format_rational(x) for x in row) + "]" for row in self.basis)
        return f"Lattice([{rows}])"

    def to_json(self) -> list[list[str]]:
        return [[format_rational(x) for x in row] for row in self.basis]

    @classmethod
    def from_json(cls, data) -> "Lattice":
        return cls([[parse_rational(x) for x in row] for row in data])

    def __reduce__(self):
        return (Lattice, ([list(r) for r in self.basis],))


@dataclass
class SuperlatticeSet:
    """The superlattices p^{-1}L > M > L with [M : L] = p^k, with their coset matrices."""

    p: int
    k: int
    base: Lattice
    members: list[Lattice]
    matrices: list[tuple[tuple[int, ...], ...]]

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self) -> Iterator[Lattice]:
        return iter(self.members)


def _coset_matrices(n: int, p: int, k: int) -> Iterator[tuple[tuple[int, ...], ...]]:
    for zeros in combinations(range(n), k):
        e = [0 if i in zeros else 1 for i in range(n)]
        slots = [(i, j) for i in range(n) for j in range(i + 1, n) if e[i] == 0 and e[j] == 1]
        for values in product(range(p), repeat=len(slots)):
            a = [[0] * n for _ in range(n)]
            for i in range(n):
                a[i][i] = p ** e[i]
            for (i, j), v in zip(slots, values):
                a[i][j] = v
            yield tuple(tuple(r) for r in a)


def enumerate_superlattices(n: int, p: int, k: int, base: Lattice | None = None) -> SuperlatticeSet:
    """All M with base < M < p^{-1} base and [M : base] = p^k.

    Each M is spanned by the rows of p^{-1} A B, where B is the basis of
    ``base`` and A runs over the upper triangular coset matrices with
    exactly k unit diagonal entries.
    """
    if not is_prime(p):
        raise ValueError(f"p = {p} is not prime")
    if not 1 <= k <= n:
        raise ValueError("need 1 <= k <= n")
    base = base or Lattice.standard(n)
    if base.n != n:
        raise ValueError("dimension mismatch with the base lattice")
    members, mats = [], []
    for a in _coset_matrices(n, p, k):
        rows = [[Fraction(x, p) for x in row] for row in a]
        members.append(Lattice(mx.matmul(rows, base.basis)))
        mats.append(a)
    return SuperlatticeSet(p=p, k=k, base=base, members=members, matrices=mats)


def _hnf_matrices(n: int, det: int) -> Iterator[list[list[int]]]:
    """Row-style HNF integer matrices (upper triangular) with the given determinant."""

    def diagonals(n, d):
        if n == 1:
            yield (d,)
            return
        for a in range(1, d + 1):
            if d % a == 0:
                for rest in diagonals(n - 1, d // a):
                    yield (a,) + rest

    for diag in diagonals(n, det):
        slots = [(i, j) for j in range(n) for i in range(j)]
        ranges = [range(diag[j]) for (_, j) in slots]
        for values in product(*ranges):
            h = [[0] * n for _ in range(n)]
            for i in range(n):
                h[i][i] = diag[i]
            for (i, j), v in zip(slots, values):
                h[i][j] = v
            yield h


def enumerate_coindex_N_superlattices(n: int, p: int, e: int, base: Lattice | None = None) -> list[Lattice]:
    """All M containing ``base`` with [M : base] = p^e, each once.

    Such M are the duals of the sublattices of index p^e of the dual
    lattice; those are listed by their Hermite normal forms.
    """
    if e < 1:
        raise ValueError("need e >= 1")
    if not is_prime(p):
        raise ValueError(f"p = {p} is not prime")
    base = base or Lattice.standard(n)
    out = []
    for h in _hnf_matrices(n, p**e):
        dual = mx.transpose(mx.inverse(h))
        out.append(Lattice(mx.matmul(dual, base.basis)))
    return out


def reduction_mod_p(M: Lattice, L: Lattice, p: int) -> FiniteSubspace:
    """The subspace of F_p^n (in coordinates of L) cut out by L <= M <= p^{-1} L."""
    if not M.contains_lattice(L) or not L.scaled(Fraction(1, p)).contains_lattice(M):
        raise ValueError("M must satisfy L <= M <= p^{-1} L")
    rows = []
    for row in M.basis:
        c = L.coordinates([p * x for x in row])
        assert all(x.denominator == 1 for x in c)
        rows.append([int(x) for x in c])
    return FiniteSubspace.span(p, M.n, rows)
