"""Finite Grassmannians over F_p and the Hecke eigenvalues nu_{n,k,l}(p).

Subspaces are enumerated through their reduced row echelon forms, one
pivot pattern (Schubert cell) at a time, so every k-dimensional subspace
of F_p^n appears exactly once.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from itertools import combinations, product
from typing import Iterable, Iterator, Sequence

from .exactmath import MultiPoly, UniPoly, gaussian_int, is_prime

__all__ = [
    "FiniteSubspace",
    "EigenvalueTable",
    "SUBSPACE_BUDGET",
    "grassmannian_count",
    "gaussian_binomial_poly",
    "enumerate_subspaces",
    "nu_closed",
    "nu_bruteforce",
    "nu_bundle_oracle",
    "phi_polynomial",
    "schubert_phi_hat",
    "strata_counts_Y",
    "strata_counts_X",
    "z_recursion",
    "eigenvalue_table",
]

# maximal number of subspaces any brute-force routine will walk through
SUBSPACE_BUDGET = 250_000


def _check_prime(p: int) -> None:
    if not is_prime(p):
        raise ValueError(f"p = {p} is not prime")


def _rref_mod_p(rows: Iterable[Sequence[int]], p: int, n: int) -> tuple[tuple[int, ...], ...]:
    a = [[x % p for x in row] for row in rows]
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, len(a)) if a[i][c]), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = pow(a[r][c], -1, p)
        a[r] = [(x * inv) % p for x in a[r]]
        for i in range(len(a)):
            if i != r and a[i][c]:
                f = a[i][c]
                a[i] = [(x - f * y) % p for x, y in zip(a[i], a[r])]
        r += 1
    return tuple(tuple(row) for row in a[:r])


@dataclass(frozen=True)
class FiniteSubspace:
    """Subspace of F_p^n in canonical reduced row echelon form."""

    p: int
    n: int
    basis: tuple[tuple[int, ...], ...]

    @classmethod
    def span(cls, p: int, n: int, vectors: Iterable[Sequence[int]]) -> "FiniteSubspace":
        return cls(p, n, _rref_mod_p(vectors, p, n))

    @classmethod
    def zero(cls, p: int, n: int) -> "FiniteSubspace":
        return cls(p, n, ())

    @classmethod
    def full(cls, p: int, n: int) -> "FiniteSubspace":
        return cls.span(p, n, [[int(i == j) for j in range(n)] for i in range(n)])

    @classmethod
    def coordinate(cls, p: int, n: int, l: int) -> "FiniteSubspace":
        """span(e_1, ..., e_l)."""
        return cls.span(p, n, [[int(i == j) for j in range(n)] for i in range(l)])

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def pivots(self) -> tuple[int, ...]:
        return tuple(next(j for j, x in enumerate(row) if x) for row in self.basis)

    def __add__(self, other: "FiniteSubspace") -> "FiniteSubspace":
        return FiniteSubspace.span(self.p, self.n, self.basis + other.basis)

    def intersection_dim(self, other: "FiniteSubspace") -> int:
        return self.dim + other.dim - (self + other).dim

    def contains(self, other: "FiniteSubspace") -> bool:
        return (self + other).dim == self.dim

    def contains_vector(self, v: Sequence[int]) -> bool:
        return FiniteSubspace.span(self.p, self.n, self.basis + (tuple(v),)).dim == self.dim

    def vectors(self) -> Iterator[tuple[int, ...]]:
        """All p^dim elements."""
        for coeffs in product(range(self.p), repeat=self.dim):
            v = [0] * self.n
            for c, row in zip(coeffs, self.basis):
                if c:
                    for j, x in enumerate(row):
                        v[j] = (v[j] + c * x) % self.p
            yield tuple(v)

    def perp(self) -> "FiniteSubspace":
        """Annihilator under the standard dot product."""
        piv = self.pivots
        free = [j for j in range(self.n) if j not in piv]
        rows = []
        for j in free:
            v = [0] * self.n
            v[j] = 1
            for row, c in zip(self.basis, piv):
                v[c] = (-row[j]) % self.p
            rows.append(v)
        return FiniteSubspace.span(self.p, self.n, rows)

    def transform(self, g: Sequence[Sequence[int]]) -> "FiniteSubspace":
        """Image under v -> v g for an invertible matrix g over F_p."""
        rows = [[sum(row[i] * g[i][j] for i in range(self.n)) for j in range(self.n)] for row in self.basis]
        return FiniteSubspace.span(self.p, self.n, rows)


def grassmannian_count(k: int, n: int, p: int) -> int:
    """G_{k,n}(p) = [n]! / ([k]! [n-k]!) with [m] = (p^m - 1)/(p - 1)."""
    if k < 0 or k > n:
        return 0

    def qfact(m: int) -> int:
        out = 1
        for i in range(1, m + 1):
            out *= gaussian_int(i, p)
        return out

    num = qfact(n)
    den = qfact(k) * qfact(n - k)
    assert num % den == 0
    return num // den


def gaussian_binomial_poly(k: int, n: int) -> UniPoly:
    """Gaussian binomial as a polynomial in t, via [n,k] = [n-1,k-1] + t^k [n-1,k]."""
    if k < 0 or k > n:
        return UniPoly()
    if k == 0 or k == n:
        return UniPoly([1])
    return gaussian_binomial_poly(k - 1, n - 1) + UniPoly.monomial(k) * gaussian_binomial_poly(k, n - 1)


def _pivot_cells(k: int, n: int, p: int) -> Iterator[tuple[tuple[int, ...], Iterator[FiniteSubspace]]]:
    for pivots in combinations(range(n), k):
        free = [
            (r, c) for r, pc in enumerate(pivots) for c in range(pc + 1, n) if c not in pivots
        ]

        def cell(pivots=pivots, free=free):
            for values in product(range(p), repeat=len(free)):
                rows = [[0] * n for _ in range(k)]
                for r, pc in enumerate(pivots):
                    rows[r][pc] = 1
                for (r, c), x in zip(free, values):
                    rows[r][c] = x
                yield FiniteSubspace(p, n, tuple(tuple(row) for row in rows))

        yield pivots, cell()


def enumerate_subspaces(k: int, n: int, p: int) -> list[FiniteSubspace]:
    """All k-dimensional subspaces of F_p^n, each exactly once."""
    _check_prime(p)
    if not 0 <= k <= n:
        raise ValueError("need 0 <= k <= n")
    total = grassmannian_count(k, n, p)
    if total > SUBSPACE_BUDGET:
        raise ValueError(
            f"Gr({k},{n})(F_{p}) has {total} points, over the brute-force budget of {SUBSPACE_BUDGET}"
        )
    out: list[FiniteSubspace] = []
    for _, cell in _pivot_cells(k, n, p):
        out.extend(cell)
    return out


def nu_closed(n: int, k: int, l: int, p: int) -> int:
    """nu_{n,k,l}(p) = G_{k,n} + (p^l - 1) G_{k-1,n-1}."""
    return grassmannian_count(k, n, p) + (p**l - 1) * grassmannian_count(k - 1, n - 1, p)


def nu_bruteforce(n: int, k: int, l: int, p: int, U: FiniteSubspace | None = None) -> int:
    """Sum of p^{dim(W cap U)} over all k-subspaces W; U defaults to span(e_1..e_l)."""
    if U is None:
        U = FiniteSubspace.coordinate(p, n, l)
    elif U.dim != l:
        raise ValueError("U must have dimension l")
    return sum(p ** W.intersection_dim(U) for W in enumerate_subspaces(k, n, p))


def nu_bundle_oracle(n: int, k: int, l: int, p: int) -> int:
    """Number of pairs (W, v) with W a k-subspace and v in W cap span(e_1..e_l).

    Vectors are enumerated explicitly; no dimension formula is used.
    """
    count = 0
    for W in enumerate_subspaces(k, n, p):
        for v in W.vectors():
            if all(x == 0 for x in v[l:]):
                count += 1
    return count


def phi_polynomial(n: int, k: int, l: int) -> UniPoly:
    """Phi_{n,k,l}(t) with Phi_{n,k,l}(p) = nu_{n,k,l}(p) for every prime p."""
    phi = gaussian_binomial_poly(k, n) + (UniPoly.monomial(l) - 1) * gaussian_binomial_poly(k - 1, n - 1)
    for c in phi.coeffs:
        if c.denominator != 1 or c < 0:
            raise AssertionError(f"Phi_{{{n},{k},{l}}} has a coefficient outside Z_{{>=0}}: {phi}")
    return phi


def schubert_phi_hat(n: int, k: int, p: int) -> MultiPoly:
    """sum over k-subspaces W of prod_j x_j^{dim(W cap U_j)} for the flag U_j = span(e_1..e_j)."""
    _check_prime(p)
    flag = [FiniteSubspace.coordinate(p, n, j) for j in range(n + 1)]
    terms: dict[tuple[int, ...], int] = {}
    for W in enumerate_subspaces(k, n, p):
        alpha = tuple(W.intersection_dim(U) for U in flag)
        terms[alpha] = terms.get(alpha, 0) + 1
    return MultiPoly([f"x{j}" for j in range(n + 1)], terms)


def _exact_log(x: int, p: int) -> int:
    d = 0
    while x % p == 0:
        x //= p
        d += 1
    if x != 1:
        raise AssertionError("Schubert cell size is not a pure power of p")
    return d


def schubert_cell_dimensions(n: int, k: int, primes: Sequence[int] = (2, 3, 5)) -> dict[tuple[int, ...], int]:
    """Map alpha -> d with #S_alpha(F_p) = p^d, read off Phi-hat at each prime.

    Raises if a coefficient is not a p-power or the exponents disagree between primes.
    """
    dims: dict[tuple[int, ...], int] | None = None
    for q in primes:
        hat = schubert_phi_hat(n, k, q)
        here = {alpha: _exact_log(int(c), q) for alpha, c in hat.terms.items()}
        if dims is None:
            dims = here
        elif here != dims:
            raise AssertionError(f"Schubert cell dimensions differ between primes at p={q}")
    assert dims is not None
    return dims


def strata_counts_Y(n: int, k: int, l: int, p: int) -> list[int]:
    """y_j = #{W : dim W = k, dim(W cap U) = j} for j = 0..l."""
    U = FiniteSubspace.coordinate(p, n, l)
    y = [0] * (l + 1)
    for W in enumerate_subspaces(k, n, p):
        y[W.intersection_dim(U)] += 1
    return y


def z_recursion(n: int, k: int, l: int, p: int) -> list[int]:
    """z_1..z_l from z_l = G_{k-l,n-l}, z_j = G_{k-j,n-j} - sum_i G_{i,l-j} z_{i+j}.

    Returned as a list indexed by j (index 0 unused, set to 0).
    """
    G = lambda a, b: grassmannian_count(a, b, p)  # noqa: E731
    z = [0] * (l + 1)
    for j in range(l, 0, -1):
        if j == l:
            z[j] = G(k - l, n - l)
        else:
            z[j] = G(k - j, n - j) - sum(G(i, l - j) * z[i + j] for i in range(1, l - j + 1))
    return z


@dataclass
class StrataX:
    """Classification of Gr(k,n)(F_p) by (dim W cap Vf, dim W cap Cf)."""

    counts: dict[tuple[int, int], int]
    m: dict[tuple[int, int], int]
    p: int
    k: int
    Vf: FiniteSubspace
    Cf: FiniteSubspace

    def weighted_sum(self) -> int:
        """sum_{i,j} p^i m_ij G_{j, dim Cf}."""
        l = self.Cf.dim
        return sum(self.p**i * mij * grassmannian_count(j, l, self.p) for (i, j), mij in self.m.items())


def strata_counts_X(
    p: int,
    k: int,
    Vf: FiniteSubspace,
    Cf: FiniteSubspace,
    S: dict[int, FiniteSubspace] | None = None,
    rng: random.Random | None = None,
) -> StrataX:
    """Sizes of X_ij and the numbers m_ij of members containing a fixed S_j in Cf.

    ``S`` may fix the subspaces S_j; otherwise they are chosen at random
    inside ``Cf`` (with ``rng``) or, without ``rng``, as spans of the
    first j basis vectors of ``Cf``.
    """
    n = Vf.n
    chosen: dict[int, FiniteSubspace] = dict(S or {})
    for j in range(Cf.dim + 1):
        if j in chosen:
            continue
        if rng is None:
            chosen[j] = FiniteSubspace.span(p, n, Cf.basis[:j])
        else:
            while True:
                coeffs = [[rng.randrange(p) for _ in range(Cf.dim)] for _ in range(j)]
                vecs = [[sum(c * row[t] for c, row in zip(cs, Cf.basis)) for t in range(n)] for cs in coeffs]
                cand = FiniteSubspace.span(p, n, vecs)
                if cand.dim == j:
                    chosen[j] = cand
                    break
    counts: dict[tuple[int, int], int] = {}
    m: dict[tuple[int, int], int] = {}
    for W in enumerate_subspaces(k, n, p):
        i = W.intersection_dim(Vf)
        j = W.intersection_dim(Cf)
        counts[(i, j)] = counts.get((i, j), 0) + 1
        if W.contains(chosen[j]):
            m[(i, j)] = m.get((i, j), 0) + 1
    for key in counts:
        m.setdefault(key, 0)
    return StrataX(counts=counts, m=m, p=p, k=k, Vf=Vf, Cf=Cf)


@dataclass
class EigenvalueTable:
    """nu_{n,k,l} as polynomials in p, keyed by (k, l)."""

    n: int
    entries: dict[tuple[int, int], UniPoly] = field(default_factory=dict)

    def format(self, var: str = "p") -> str:
        ks = sorted({k for k, _ in self.entries})
        ls = sorted({l for _, l in self.entries}, reverse=True)
        header = [""] + [f"T({var},{k})" for k in ks]
        rows = [header]
        for l in ls:
            rows.append([f"c_{l}"] + [self.entries[(k, l)].format(var) for k in ks])
        widths = [max(len(r[i]) for r in rows) for i in range(len(header))]
        lines = [" | ".join(cell.ljust(w) for cell, w in zip(r, widths)).rstrip() for r in rows]
        lines.insert(1, "-+-".join("-" * w for w in widths))
        return "\n".join(lines)

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "entries": [
                {"k": k, "l": l, "poly": poly.to_json()} for (k, l), poly in sorted(self.entries.items())
            ],
        }


def eigenvalue_table(n: int, ks: Sequence[int] | None = None, via: str = "closed") -> EigenvalueTable:
    """Table of Phi_{n,k,l} for 1 <= k <= n-1 (default) and 0 <= l <= n.

    ``via="schubert"`` rebuilds each entry from the Schubert cell sizes
    instead of the closed formula.
    """
    if ks is None:
        ks = range(1, n)
    table = EigenvalueTable(n)
    for k in ks:
        if via == "closed":
            for l in range(n + 1):
                table.entries[(k, l)] = phi_polynomial(n, k, l)
        elif via == "schubert":
            cells = schubert_cell_dimensions(n, k)
            for l in range(n + 1):
                poly = UniPoly()
                for alpha, d in cells.items():
                    poly = poly + UniPoly.monomial(d + alpha[l])
                table.entries[(k, l)] = poly
        else:
            raise ValueError(f"unknown method {via!r}")
    return table
