"""Exact scalars and polynomials.

Rationals are :class:`fractions.Fraction`.  On top of that this module
provides univariate and sparse multivariate polynomials with rational
coefficients, and elements of cyclotomic fields ``Q(zeta_m)``.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import comb, gcd
from typing import Iterable, Mapping, Sequence, Union

__all__ = [
    "Rational",
    "UniPoly",
    "MultiPoly",
    "CyclotomicNumber",
    "bernoulli",
    "gaussian_int",
    "interpolate",
    "cyclotomic_pow",
    "cyclotomic_polynomial",
    "is_prime",
    "format_rational",
    "parse_rational",
]

Rational = Fraction
Number = Union[int, Fraction]


def format_rational(x: Number) -> str:
    """Serialize as ``"num/den"``; the denominator is dropped when it is 1."""
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def parse_rational(s: Union[str, int, Fraction]) -> Fraction:
    if isinstance(s, (int, Fraction)):
        return Fraction(s)
    if isinstance(s, float):
        raise TypeError("floats are not accepted as exact rationals")
    return Fraction(str(s).strip())


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    d = 3
    while d * d <= p:
        if p % d == 0:
            return False
        d += 2
    return True


@lru_cache(maxsize=None)
def _bernoulli_table(n: int) -> tuple[Fraction, ...]:
    # sum_{j=0}^{m} C(m+1, j) B_j = m + 1  characterizes the B_1 = +1/2 convention
    table: list[Fraction] = []
    for m in range(n + 1):
        s = sum(comb(m + 1, j) * table[j] for j in range(m))
        table.append((Fraction(m + 1) - s) / (m + 1))
    return tuple(table)


def bernoulli(j: int) -> Fraction:
    """Bernoulli number B_j with B_1 = +1/2 (coefficients of x/(1 - e^{-x}))."""
    if j < 0:
        raise ValueError("j must be nonnegative")
    return _bernoulli_table(max(j, 16))[j]


def gaussian_int(n: int, p: int) -> int:
    """The q-integer [n] = (p^n - 1)/(p - 1) = 1 + p + ... + p^{n-1}."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    return sum(p**i for i in range(n))


# ---------------------------------------------------------------------------
# univariate polynomials


def _trim(coeffs: Iterable[Number]) -> tuple[Fraction, ...]:
    out = [Fraction(c) for c in coeffs]
    while out and out[-1] == 0:
        out.pop()
    return tuple(out)


class UniPoly:
    """Univariate polynomial over Q, coefficients indexed by degree."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[Number] = ()):
        self.coeffs = _trim(coeffs)

    @classmethod
    def monomial(cls, degree: int, coeff: Number = 1) -> "UniPoly":
        return cls([0] * degree + [coeff])

    @classmethod
    def constant(cls, c: Number) -> "UniPoly":
        return cls([c])

    @property
    def degree(self) -> int:
        """Degree; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def coeff(self, l: int) -> Fraction:
        return self.coeffs[l] if 0 <= l < len(self.coeffs) else Fraction(0)

    def is_zero(self) -> bool:
        return not self.coeffs

    def __call__(self, x):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def _coerce(self, other) -> "UniPoly":
        if isinstance(other, UniPoly):
            return other
        if isinstance(other, (int, Fraction)):
            return UniPoly([other])
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        n = max(len(self.coeffs), len(other.coeffs))
        return UniPoly(self.coeff(i) + other.coeff(i) for i in range(n))

    __radd__ = __add__

    def __neg__(self):
        return UniPoly(-c for c in self.coeffs)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if self.is_zero() or other.is_zero():
            return UniPoly()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return UniPoly(out)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            raise ValueError("negative power")
        result = UniPoly([1])
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def scale_argument(self, c: Number) -> "UniPoly":
        """The polynomial t -> f(c t)."""
        c = Fraction(c)
        return UniPoly(a * c**i for i, a in enumerate(self.coeffs))

    def divmod(self, other: "UniPoly") -> tuple["UniPoly", "UniPoly"]:
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        q = [Fraction(0)] * max(len(rem) - len(other.coeffs) + 1, 0)
        lead = other.coeffs[-1]
        while len(rem) >= len(other.coeffs) and rem:
            shift = len(rem) - len(other.coeffs)
            factor = rem[-1] / lead
            q[shift] = factor
            for i, b in enumerate(other.coeffs):
                rem[shift + i] -= factor * b
            rem = list(_trim(rem))
        return UniPoly(q), UniPoly(rem)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = UniPoly([other])
        if not isinstance(other, UniPoly):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(("UniPoly", self.coeffs))

    def __repr__(self):
        return f"UniPoly({[format_rational(c) for c in self.coeffs]})"

    def format(self, var: str = "t", decimal: bool = False) -> str:
        """Human-readable form, highest degree first, e.g. ``t^2 + 2t + 1``."""
        if self.is_zero():
            return "0"
        parts: list[str] = []
        for i in range(self.degree, -1, -1):
            c = self.coeffs[i]
            if c == 0:
                continue
            sign = "-" if c < 0 else "+"
            a = abs(c)
            if decimal:
                num = f"{float(a):.10g}"
            else:
                num = format_rational(a)
                if a.denominator != 1 and i > 0:
                    num = f"({num})"
            mono = "" if i == 0 else (var if i == 1 else f"{var}^{i}")
            if i > 0 and a == 1:
                term = mono
            else:
                term = num + mono
            parts.append((sign, term))
        first_sign, first = parts[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, term in parts[1:]:
            out += f" {sign} {term}"
        return out

    def __str__(self):
        return self.format()

    def to_json(self) -> list[str]:
        return [format_rational(c) for c in self.coeffs]

    @classmethod
    def from_json(cls, data: Sequence) -> "UniPoly":
        return cls(parse_rational(c) for c in data)


def interpolate(points: Sequence[tuple[Number, Number]]) -> UniPoly:
    """Unique polynomial of degree < len(points) through ``points`` (Newton form)."""
    xs = [Fraction(x) for x, _ in points]
    if len(set(xs)) != len(xs):
        raise ValueError("duplicate abscissae in interpolation data")
    table = [Fraction(y) for _, y in points]
    n = len(xs)
    # divided differences, in place
    for level in range(1, n):
        for i in range(n - 1, level - 1, -1):
            table[i] = (table[i] - table[i - 1]) / (xs[i] - xs[i - level])
    result = UniPoly()
    for i in range(n - 1, -1, -1):
        result = result * UniPoly([-xs[i], 1]) + table[i]
    return result


# ---------------------------------------------------------------------------
# multivariate polynomials


class MultiPoly:
    """Sparse polynomial over Q in a fixed tuple of named variables."""

    __slots__ = ("variables", "terms")

    def __init__(self, variables: Sequence[str], terms: Mapping[tuple[int, ...], Number] | None = None):
        self.variables = tuple(variables)
        clean: dict[tuple[int, ...], Fraction] = {}
        for exps, c in (terms or {}).items():
            exps = tuple(exps)
            if len(exps) != len(self.variables):
                raise ValueError("exponent vector length does not match the variable set")
            c = Fraction(c)
            if c:
                clean[exps] = clean.get(exps, Fraction(0)) + c
        self.terms = {e: c for e, c in clean.items() if c}

    @classmethod
    def constant(cls, variables: Sequence[str], c: Number) -> "MultiPoly":
        return cls(variables, {(0,) * len(variables): c})

    @classmethod
    def variable(cls, variables: Sequence[str], index: int) -> "MultiPoly":
        e = [0] * len(variables)
        e[index] = 1
        return cls(variables, {tuple(e): 1})

    @property
    def nvars(self) -> int:
        return len(self.variables)

    def total_degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def constant_term(self) -> Fraction:
        return self.terms.get((0,) * self.nvars, Fraction(0))

    def is_zero(self) -> bool:
        return not self.terms

    def _check(self, other: "MultiPoly") -> None:
        if other.variables != self.variables:
            raise ValueError("variable sets differ")

    def _coerce(self, other):
        if isinstance(other, MultiPoly):
            self._check(other)
            return other
        if isinstance(other, (int, Fraction)):
            return MultiPoly.constant(self.variables, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        terms = dict(self.terms)
        for e, c in other.terms.items():
            terms[e] = terms.get(e, Fraction(0)) + c
        return MultiPoly(self.variables, terms)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly(self.variables, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        terms: dict[tuple[int, ...], Fraction] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                terms[e] = terms.get(e, Fraction(0)) + c1 * c2
        return MultiPoly(self.variables, terms)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        result = MultiPoly.constant(self.variables, 1)
        for _ in range(e):
            result = result * self
        return result

    def derivative(self, index: int, order: int = 1) -> "MultiPoly":
        terms: dict[tuple[int, ...], Fraction] = {}
        for e, c in self.terms.items():
            k = e[index]
            if k < order:
                continue
            factor = 1
            for i in range(order):
                factor *= k - i
            ne = list(e)
            ne[index] = k - order
            terms[tuple(ne)] = c * factor
        return MultiPoly(self.variables, terms)

    def apply_derivatives(self, orders: Mapping[int, int]) -> "MultiPoly":
        """Apply prod_i (d/dx_i)^{orders[i]}."""
        out = self
        for i, k in orders.items():
            if k:
                out = out.derivative(i, k)
        return out

    def evaluate(self, values: Sequence[Number]):
        if len(values) != self.nvars:
            raise ValueError("wrong number of values")
        total = Fraction(0)
        for e, c in self.terms.items():
            term = c
            for v, k in zip(values, e):
                if k:
                    term = term * v**k
            total = total + term
        return total

    def rename(self, variables: Sequence[str], mapping: Sequence[int]) -> "MultiPoly":
        """Re-embed into ``variables``; variable i of self becomes ``mapping[i]``."""
        terms = {}
        for e, c in self.terms.items():
            ne = [0] * len(variables)
            for i, k in enumerate(e):
                ne[mapping[i]] += k
            terms[tuple(ne)] = c
        return MultiPoly(variables, terms)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = MultiPoly.constant(self.variables, other)
        if not isinstance(other, MultiPoly):
            return NotImplemented
        return self.variables == other.variables and self.terms == other.terms

    def __hash__(self):
        return hash((self.variables, frozenset(self.terms.items())))

    def __repr__(self):
        return f"MultiPoly({self.variables}, {self.to_json()['terms']})"

    def to_json(self) -> dict:
        terms = [
            {"exponents": list(e), "coeff": format_rational(c)}
            for e, c in sorted(self.terms.items(), reverse=True)
        ]
        return {"variables": list(self.variables), "terms": terms}

    @classmethod
    def from_json(cls, data: Mapping) -> "MultiPoly":
        return cls(
            data["variables"],
            {tuple(t["exponents"]): parse_rational(t["coeff"]) for t in data["terms"]},
        )


# ---------------------------------------------------------------------------
# cyclotomic fields


def _pdivmod(a: list[Fraction], b: list[Fraction]) -> tuple[list[Fraction], list[Fraction]]:
    q, r = UniPoly(a).divmod(UniPoly(b))
    return list(q.coeffs), list(r.coeffs)


@lru_cache(maxsize=None)
def cyclotomic_polynomial(m: int) -> tuple[int, ...]:
    """Integer coefficients (low degree first) of the m-th cyclotomic polynomial."""
    if m < 1:
        raise ValueError("conductor must be positive")
    num = UniPoly([-1] + [0] * (m - 1) + [1])
    for d in range(1, m):
        if m % d == 0:
            num, rem = num.divmod(UniPoly(cyclotomic_polynomial(d)))
            assert rem.is_zero()
    assert all(c.denominator == 1 for c in num.coeffs)
    return tuple(int(c) for c in num.coeffs)


@lru_cache(maxsize=None)
def _power_residues(m: int) -> tuple[tuple[Fraction, ...], ...]:
    """x^e mod Phi_m for e = 0..m-1, each padded to length phi(m)."""
    phi = cyclotomic_polynomial(m)
    deg = len(phi) - 1
    out = []
    cur = [Fraction(0)] * deg
    cur[0] = Fraction(1)
    for _ in range(m):
        out.append(tuple(cur))
        # multiply by x and reduce with the monic Phi_m
        top = cur[-1]
        nxt = [Fraction(0)] + cur[:-1]
        if top:
            for i in range(deg):
                nxt[i] -= top * phi[i]
        cur = nxt
    return tuple(out)


def _lcm(a: int, b: int) -> int:
    return a * b // gcd(a, b)


class CyclotomicNumber:
    """Element of Q(zeta_m), stored in the power basis 1, zeta, ..., zeta^{phi(m)-1}.

    The representation is the remainder modulo the m-th cyclotomic polynomial,
    so it is canonical for a fixed conductor.
    """

    __slots__ = ("m", "coeffs")

    def __init__(self, m: int, coeffs: Iterable[Number] = ()):
        if m < 1:
            raise ValueError("conductor must be positive")
        self.m = m
        deg = len(cyclotomic_polynomial(m)) - 1
        raw = [Fraction(c) for c in coeffs]
        if len(raw) > deg:
            # reduce via zeta^e residues (exponents are taken mod m)
            acc = [Fraction(0)] * deg
            residues = _power_residues(m)
            for e, c in enumerate(raw):
                if c:
                    for i, r in enumerate(residues[e % m]):
                        if r:
                            acc[i] += c * r
            raw = acc
        self.coeffs = tuple(raw + [Fraction(0)] * (deg - len(raw)))

    @classmethod
    def rational(cls, x: Number, m: int = 1) -> "CyclotomicNumber":
        return cls(m, [x])

    @property
    def degree(self) -> int:
        return len(self.coeffs)

    def is_rational(self) -> bool:
        return all(c == 0 for c in self.coeffs[1:])

    def to_rational(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"cyclotomic number is not rational: {self!r}")
        return self.coeffs[0]

    def lift(self, m: int) -> "CyclotomicNumber":
        """Same element viewed in Q(zeta_m); requires self.m | m."""
        if m == self.m:
            return self
        if m % self.m:
            raise ValueError(f"cannot embed Q(zeta_{self.m}) into Q(zeta_{m})")
        step = m // self.m
        raw = [Fraction(0)] * ((self.degree - 1) * step + 1)
        for i, c in enumerate(self.coeffs):
            raw[i * step] = c
        return CyclotomicNumber(m, raw)

    def _common(self, other) -> tuple["CyclotomicNumber", "CyclotomicNumber"]:
        if isinstance(other, (int, Fraction)):
            return self, CyclotomicNumber(self.m, [other])
        if not isinstance(other, CyclotomicNumber):
            raise TypeError(type(other))
        if other.m == self.m:
            return self, other
        m = _lcm(self.m, other.m)
        return self.lift(m), other.lift(m)

    def __add__(self, other):
        if not isinstance(other, (int, Fraction, CyclotomicNumber)):
            return NotImplemented
        a, b = self._common(other)
        return CyclotomicNumber(a.m, [x + y for x, y in zip(a.coeffs, b.coeffs)])

    __radd__ = __add__

    def __neg__(self):
        return CyclotomicNumber(self.m, [-c for c in self.coeffs])

    def __sub__(self, other):
        if not isinstance(other, (int, Fraction, CyclotomicNumber)):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return CyclotomicNumber(self.m, [c * other for c in self.coeffs])
        if not isinstance(other, CyclotomicNumber):
            return NotImplemented
        a, b = self._common(other)
        raw = [Fraction(0)] * (2 * a.degree - 1)
        for i, x in enumerate(a.coeffs):
            if x:
                for j, y in enumerate(b.coeffs):
                    if y:
                        raw[i + j] += x * y
        return CyclotomicNumber(a.m, raw)

    __rmul__ = __mul__

    def inverse(self) -> "CyclotomicNumber":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero in a cyclotomic field")
        # extended Euclid in Q[x]: s*a + t*Phi = 1
        phi = [Fraction(c) for c in cyclotomic_polynomial(self.m)]
        r0, r1 = phi, list(_trim(self.coeffs))
        s0, s1 = [Fraction(0)], [Fraction(1)]
        while r1:
            q, r = _pdivmod(r0, r1)
            r0, r1 = r1, r
            s0, s1 = s1, list((UniPoly(s0) - UniPoly(q) * UniPoly(s1)).coeffs)
        # r0 is a nonzero constant since Phi_m is irreducible
        assert len(r0) == 1
        return CyclotomicNumber(self.m, [c / r0[0] for c in s0])

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * (Fraction(1) / Fraction(other))
        if not isinstance(other, CyclotomicNumber):
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        result = CyclotomicNumber(self.m, [1])
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def galois_conjugate(self, r: int) -> "CyclotomicNumber":
        """Image under zeta -> zeta^r (r coprime to m)."""
        if gcd(r, self.m) != 1:
            raise ValueError("exponent must be coprime to the conductor")
        residues = _power_residues(self.m)
        acc = [Fraction(0)] * self.degree
        for i, c in enumerate(self.coeffs):
            if c:
                for j, x in enumerate(residues[(i * r) % self.m]):
                    acc[j] += c * x
        return CyclotomicNumber(self.m, acc)

    def to_complex(self) -> complex:
        import cmath

        z = cmath.exp(2j * cmath.pi / self.m)
        return sum(float(c) * z**i for i, c in enumerate(self.coeffs))

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.is_rational() and self.coeffs[0] == other
        if not isinstance(other, CyclotomicNumber):
            return NotImplemented
        a, b = self._common(other)
        return a.coeffs == b.coeffs

    def __hash__(self):
        if self.is_rational():
            return hash(self.coeffs[0])
        return hash((self.m, self.coeffs))

    def __repr__(self):
        terms = [f"{format_rational(c)}*z^{i}" for i, c in enumerate(self.coeffs) if c]
        return f"Cyclotomic[{self.m}]({' + '.join(terms) or '0'})"


def cyclotomic_pow(m: int, e: int) -> CyclotomicNumber:
    """zeta_m^e in reduced form."""
    if m < 1:
        raise ValueError("conductor must be positive")
    return CyclotomicNumber(m, _power_residues(m)[e % m])


def all_exponent_vectors(nvars: int, degree: int) -> Iterable[tuple[int, ...]]:
    """Exponent vectors of total degree <= ``degree``."""
    if nvars == 0:
        yield ()
        return
    for k in range(degree + 1):
        for rest in all_exponent_vectors(nvars - 1, degree - k):
            yield (k,) + rest
