"""Small exact linear algebra over Z and Q (lists of rows)."""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Sequence

Matrix = list[list]


def to_fraction_matrix(rows: Sequence[Sequence]) -> list[list[Fraction]]:
    return [[Fraction(x) for x in row] for row in rows]


def det(rows: Sequence[Sequence]) -> Fraction:
    a = to_fraction_matrix(rows)
    n = len(a)
    if any(len(r) != n for r in a):
        raise ValueError("det of a non-square matrix")
    sign = 1
    result = Fraction(1)
    for c in range(n):
        piv = next((r for r in range(c, n) if a[r][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            a[c], a[piv] = a[piv], a[c]
            sign = -sign
        pv = a[c][c]
        result *= pv
        for r in range(c + 1, n):
            f = a[r][c] / pv
            if f:
                row_r, row_c = a[r], a[c]
                for j in range(c, n):
                    row_r[j] -= f * row_c[j]
    return sign * result


def rank(rows: Sequence[Sequence]) -> int:
    return len(row_echelon(rows))


def row_echelon(rows: Sequence[Sequence]) -> list[list[Fraction]]:
    """Reduced row echelon form over Q, zero rows dropped."""
    a = to_fraction_matrix(rows)
    if not a:
        return []
    m, n = len(a), len(a[0])
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, m) if a[i][c] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        pv = a[r][c]
        a[r] = [x / pv for x in a[r]]
        for i in range(m):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        r += 1
        if r == m:
            break
    return a[:r]


def solve_left(basis: Sequence[Sequence], v: Sequence) -> list[Fraction]:
    """Coordinates c with sum_i c_i * basis[i] == v; basis rows independent.

    Raises ValueError when v is not in the row span.
    """
    k = len(basis)
    n = len(v)
    # columns of the augmented system basis^T c = v
    aug = [[Fraction(basis[i][j]) for i in range(k)] + [Fraction(v[j])] for j in range(n)]
    red = row_echelon(aug)
    coords = [Fraction(0)] * k
    for row in red:
        lead = next(i for i, x in enumerate(row) if x != 0)
        if lead == k:
            raise ValueError("vector is not in the span of the basis")
        coords[lead] = row[k]
    return coords


def inverse(rows: Sequence[Sequence]) -> list[list[Fraction]]:
    n = len(rows)
    aug = [list(map(Fraction, row)) + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(rows)]
    red = row_echelon(aug)
    if len(red) < n or any(red[i][i] != 1 for i in range(n)):
        raise ZeroDivisionError("singular matrix")
    return [row[n:] for row in red]


def matmul(a: Sequence[Sequence], b: Sequence[Sequence]) -> list[list]:
    return [[sum(x * b[k][j] for k, x in enumerate(row)) for j in range(len(b[0]))] for row in a]


def vecmat(v: Sequence, a: Sequence[Sequence]) -> list:
    return [sum(v[i] * a[i][j] for i in range(len(v))) for j in range(len(a[0]))]


def dot(u: Sequence, v: Sequence):
    return sum(x * y for x, y in zip(u, v))


def transpose(a: Sequence[Sequence]) -> list[list]:
    return [list(col) for col in zip(*a)]


def lcm_of_denominators(values) -> int:
    d = 1
    for x in values:
        q = Fraction(x).denominator
        d = d * q // gcd(d, q)
    return d


def primitive(v: Sequence) -> tuple[int, ...]:
    """Primitive integer vector positively proportional to the rational vector v."""
    d = lcm_of_denominators(v)
    w = [int(Fraction(x) * d) for x in v]
    g = 0
    for x in w:
        g = gcd(g, x)
    if g == 0:
        raise ValueError("zero vector has no primitive representative")
    return tuple(x // g for x in w)


def hnf(rows: Sequence[Sequence[int]]) -> list[list[int]]:
    """Row-style Hermite normal form of an integer matrix; zero rows dropped.

    Pivots are positive and the entries above each pivot lie in [0, pivot).
    """
    a = [[int(x) for x in row] for row in rows]
    if not a:
        return []
    m, n = len(a), len(a[0])
    r = 0
    for c in range(n):
        # gcd-eliminate column c below row r
        while True:
            nz = [i for i in range(r, m) if a[i][c] != 0]
            if not nz:
                break
            i0 = min(nz, key=lambda i: abs(a[i][c]))
            a[r], a[i0] = a[i0], a[r]
            done = True
            for i in range(r + 1, m):
                if a[i][c]:
                    q = a[i][c] // a[r][c]
                    a[i] = [x - q * y for x, y in zip(a[i], a[r])]
                    if a[i][c]:
                        done = False
            if done:
                break
        if r < m and a[r][c] != 0:
            if a[r][c] < 0:
                a[r] = [-x for x in a[r]]
            pv = a[r][c]
            for i in range(r):
                q = a[i][c] // pv
                if q:
                    a[i] = [x - q * y for x, y in zip(a[i], a[r])]
            r += 1
            if r == m:
                break
    return a[:r]


def integer_kernel(rows: Sequence[Sequence], n: int | None = None) -> list[list[int]]:
    """Z-basis of {x in Z^n : A x = 0} for a rational matrix A (saturated by construction)."""
    a = [[Fraction(x) for x in row] for row in rows]
    if n is None:
        if not a:
            raise ValueError("need n for an empty matrix")
        n = len(a[0])
    a = [[int(x * lcm_of_denominators(row)) for x in row] for row in a]
    # unimodular column operations on A, tracked in U (columns of U)
    cols = [[a[i][j] for i in range(len(a))] for j in range(n)]
    u = [[int(i == j) for i in range(n)] for j in range(n)]
    c0 = 0
    for i in range(len(a)):
        while True:
            nz = [j for j in range(c0, n) if cols[j][i] != 0]
            if len(nz) <= 1:
                break
            j0 = min(nz, key=lambda j: abs(cols[j][i]))
            for j in nz:
                if j != j0:
                    q = cols[j][i] // cols[j0][i]
                    cols[j] = [x - q * y for x, y in zip(cols[j], cols[j0])]
                    u[j] = [x - q * y for x, y in zip(u[j], u[j0])]
        nz = [j for j in range(c0, n) if cols[j][i] != 0]
        if nz:
            j = nz[0]
            cols[c0], cols[j] = cols[j], cols[c0]
            u[c0], u[j] = u[j], u[c0]
            c0 += 1
    return [u[j] for j in range(c0, n)]


def saturate(vectors: Sequence[Sequence], n: int) -> list[list[int]]:
    """Z-basis of Z^n intersected with the Q-span of ``vectors``."""
    vecs = [v for v in vectors if any(x != 0 for x in v)]
    if not vecs:
        return []
    complement = integer_kernel(vecs, n)
    if not complement:
        return [[int(i == j) for j in range(n)] for i in range(n)]
    return hnf(integer_kernel(complement, n))


def lll_reduce(basis: Sequence[Sequence[Fraction]], delta: Fraction = Fraction(3, 4)) -> list[list[Fraction]]:
    """Textbook exact LLL on a rational basis (rows)."""
    b = [list(map(Fraction, row)) for row in basis]
    n = len(b)

    def gram_schmidt(b):
        bs = []
        mu = [[Fraction(0)] * n for _ in range(n)]
        for i in range(n):
            v = list(b[i])
            for j in range(i):
                mu[i][j] = dot(b[i], bs[j]) / dot(bs[j], bs[j])
                v = [x - mu[i][j] * y for x, y in zip(v, bs[j])]
            bs.append(v)
        return bs, mu

    bs, mu = gram_schmidt(b)
    k = 1
    while k < n:
        for j in range(k - 1, -1, -1):
            q = round(mu[k][j])
            if q:
                b[k] = [x - q * y for x, y in zip(b[k], b[j])]
                bs, mu = gram_schmidt(b)
        if dot(bs[k], bs[k]) >= (delta - mu[k][k - 1] ** 2) * dot(bs[k - 1], bs[k - 1]):
            k += 1
        else:
            b[k], b[k - 1] = b[k - 1], b[k]
            bs, mu = gram_schmidt(b)
            k = max(k - 1, 1)
    return b
