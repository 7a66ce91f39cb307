"""Exact arithmetic in cyclotomic fields Q(zeta_N), power basis modulo Phi_N."""
from __future__ import annotations

import cmath
from fractions import Fraction
from functools import lru_cache
from math import gcd


class NonIntegral(ValueError):
    """Raised when an element expected to be a rational integer is not."""


def _trim(p):
    p = list(p)
    while len(p) > 1 and p[-1] == 0:
        p.pop()
    return p


def poly_mul(a, b):
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def poly_divmod(a, b):
    """Division by a monic integer polynomial, coefficients low to high."""
    assert b[-1] == 1
    a = list(a)
    db = len(b) - 1
    q = [0] * max(len(a) - db, 1)
    for k in range(len(a) - 1, db - 1, -1):
        c = a[k]
        if c:
            q[k - db] = c
            for j in range(db + 1):
                a[k - db + j] -= c * b[j]
    return _trim(q), _trim(a[:db] or [0])


@lru_cache(maxsize=None)
def cyclotomic_poly(n: int) -> tuple:
    """Phi_n as a tuple of integer coefficients, low degree first."""
    if n < 1:
        raise ValueError("n must be positive")
    p = [-1] + [0] * (n - 1) + [1]
    for d in range(1, n):
        if n % d == 0:
            p, r = poly_divmod(p, list(cyclotomic_poly(d)))
            assert r == [0]
    return tuple(p)


def euler_phi(n: int) -> int:
    return len(cyclotomic_poly(n)) - 1


@lru_cache(maxsize=None)
def field(n: int) -> "CyclotomicField":
    return CyclotomicField(n)


class CyclotomicField:
    def __init__(self, n: int):
        self.n = n
        self.phi = cyclotomic_poly(n)
        self.degree = len(self.phi) - 1

    def __repr__(self):
        return f"Q(zeta_{self.n})"

    def reduce(self, coeffs) -> list:
        """Reduce an integer polynomial in zeta modulo Phi_n."""
        n, d = self.n, self.degree
        if len(coeffs) > n:
            folded = [0] * n
            for k, c in enumerate(coeffs):
                folded[k % n] += c
            coeffs = folded
        a = list(coeffs) + [0] * max(0, d - len(coeffs))
        phi = self.phi
        for k in range(len(a) - 1, d - 1, -1):
            c = a[k]
            if c:
                base = k - d
                for j in range(d):
                    a[base + j] -= c * phi[j]
                a[k] = 0
        return a[:d]

    def element(self, coeffs, den: int = 1) -> "CycloElement":
        return CycloElement(self, self.reduce(coeffs), den)

    def from_exponents(self, terms) -> "CycloElement":
        """Build sum c * zeta^e from (e, c) pairs with integer c."""
        bins = [0] * self.n
        for e, c in terms:
            bins[e % self.n] += c
        return self.element(bins)

    def zeta(self, k: int = 1) -> "CycloElement":
        bins = [0] * self.n
        bins[k % self.n] = 1
        return self.element(bins)

    def rational(self, q) -> "CycloElement":
        q = Fraction(q)
        return CycloElement(self, [q.numerator] + [0] * (self.degree - 1), q.denominator)

    def one(self):
        return self.rational(1)

    def zero(self):
        return self.rational(0)


class CycloElement:
    __slots__ = ("field", "num", "den")

    def __init__(self, fld: CyclotomicField, num, den: int = 1):
        if den == 0:
            raise ZeroDivisionError("zero denominator")
        if den < 0:
            num, den = [-c for c in num], -den
        g = den
        for c in num:
            g = gcd(g, c)
            if g == 1:
                break
        if g > 1:
            num, den = [c // g for c in num], den // g
        self.field, self.num, self.den = fld, list(num), den

    def _check(self, other):
        if not isinstance(other, CycloElement):
            other = self.field.rational(other)
        if other.field.n != self.field.n:
            raise ValueError(f"field mismatch: {self.field} vs {other.field}")
        return other

    def __add__(self, other):
        other = self._check(other)
        num = [a * other.den + b * self.den for a, b in zip(self.num, other.num)]
        return CycloElement(self.field, num, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return CycloElement(self.field, [-c for c in self.num], self.den)

    def __sub__(self, other):
        return self + (-self._check(other))

    def __rsub__(self, other):
        return self._check(other) - self

    def __mul__(self, other):
        other = self._check(other)
        prod = poly_mul(self.num, other.num)
        return CycloElement(self.field, self.field.reduce(prod), self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        return self * self._check(other).inverse()

    def __eq__(self, other):
        try:
            other = self._check(other)
        except (ValueError, TypeError):
            return NotImplemented
        return self.den == other.den and self.num == other.num

    def __hash__(self):
        return hash((self.field.n, tuple(self.num), self.den))

    def __repr__(self):
        return f"CycloElement(N={self.field.n}, num={self.num}, den={self.den})"

    def is_zero(self) -> bool:
        return not any(self.num)

    def is_rational(self) -> bool:
        return not any(self.num[1:])

    def to_fraction(self) -> Fraction:
        if not self.is_rational():
            raise NonIntegral(f"{self!r} is not rational")
        return Fraction(self.num[0], self.den)

    def to_integer(self) -> int:
        q = self.to_fraction()
        if q.denominator != 1:
            raise NonIntegral(f"{q} is not an integer")
        return q.numerator

    def to_complex(self, k: int = 1) -> complex:
        """Value under the embedding zeta -> exp(2 pi i k / N)."""
        z = cmath.exp(2j * cmath.pi * k / self.field.n)
        return sum(c * z ** j for j, c in enumerate(self.num)) / self.den

    def embed(self, n: int) -> "CycloElement":
        """The same number in Q(zeta_n), n a multiple of the conductor."""
        k, rem = divmod(n, self.field.n)
        if rem:
            raise ValueError(f"{n} is not a multiple of {self.field.n}")
        bins = [0] * n
        for j, c in enumerate(self.num):
            bins[j * k % n] += c
        return field(n).element(bins, self.den)

    def inverse(self) -> "CycloElement":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero")
        # Euclid over Q: fine for the element-order fields used here, but the
        # rational coefficients can grow badly for generic elements of degree in the hundreds
        # extended Euclid over Q between the element and Phi_N
        r0 = [Fraction(c) for c in self.field.phi]
        r1 = [Fraction(c) for c in _trim(self.num)]
        s0, s1 = [Fraction(0)], [Fraction(1)]
        while len(r1) > 1 or r1[0] != 0:
            q, r = _fdivmod(r0, r1)
            r0, r1 = r1, r
            s0, s1 = s1, _fsub(s0, _fmul(q, s1))
        # r0 is a nonzero constant, s0 * self = r0 mod Phi
        c = r0[0]
        coeffs = [x / c for x in s0]
        den = 1
        for x in coeffs:
            den = den * x.denominator // gcd(den, x.denominator)
        ints = [int(x * den) for x in coeffs]
        return CycloElement(self.field, self.field.reduce(ints), den) * self.den


def _fmul(a, b):
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _trim(out)


def _fsub(a, b):
    n = max(len(a), len(b))
    a = list(a) + [Fraction(0)] * (n - len(a))
    b = list(b) + [Fraction(0)] * (n - len(b))
    return _trim([x - y for x, y in zip(a, b)])


def _fdivmod(a, b):
    a = list(a)
    db = len(b) - 1
    lead = b[-1]
    q = [Fraction(0)] * max(len(a) - db, 1)
    for k in range(len(a) - 1, db - 1, -1):
        c = a[k] / lead
        if c:
            q[k - db] = c
            for j in range(db + 1):
                a[k - db + j] -= c * b[j]
    rem = _trim(a[:db] or [Fraction(0)])
    return _trim(q), rem


def root_of_unity(numerator: int, n: int) -> "CycloElement":
    """zeta_n ** numerator in Q(zeta_n)."""
    return field(n).zeta(numerator)
