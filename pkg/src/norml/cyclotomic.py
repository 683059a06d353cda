"""Exact arithmetic in cyclotomic fields Q(zeta_M).

A CycNumber is a vector of Fractions in the power basis 1, z, ..., z^(d-1)
of Q[x]/Phi_M(x), where z stands for exp(2*pi*i/M) and d = deg Phi_M.  All
ring operations are exact; the only lossy operation is complex(), used for
weight classification and nothing else.

Mixed conductors merge into lcm(M1, M2) via z_M = z_L^(L/M).  Nothing here
tries to minimize conductors after the fact: values keep the conductor of
the field they were created in, and equality compares inside the merge.
"""

import math
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .errors import ZeroArgument


@lru_cache(maxsize=None)
def cyclotomic_poly(m):
    """Integer coefficients of Phi_m, constant term first.

    Phi_m(x) = (x^m - 1) / prod of Phi_d over proper divisors d | m, by
    repeated exact polynomial division over the integers.
    """
    if m == 1:
        return [-1, 1]
    num = [0] * (m + 1)
    num[0], num[m] = -1, 1
    for d in range(1, m):
        if m % d == 0:
            num = _intpoly_div(num, cyclotomic_poly(d))
    return num


def _intpoly_div(a, b):
    """Exact division of integer polynomials (remainder known to be 0)."""
    a = list(a)
    out = [0] * (len(a) - len(b) + 1)
    for k in range(len(out) - 1, -1, -1):
        c = a[k + len(b) - 1] // b[-1]
        out[k] = c
        if c:
            for j, bj in enumerate(b):
                a[k + j] -= c * bj
    return out


@lru_cache(maxsize=None)
def _reduction_table(m):
    """Coordinates of z^k mod Phi_m for k in [0, m), as tuples of ints
    over a common shape; entries are exact integer vectors."""
    phi = cyclotomic_poly(m)
    d = len(phi) - 1
    rows = []
    cur = [Fraction(0)] * d
    cur[0] = Fraction(1)
    for _ in range(m):
        rows.append(tuple(cur))
        top = cur[d - 1]
        nxt = [Fraction(0)] + cur[:-1]
        if top:  # fold the spilled z^d term back via z^d = -sum phi_j z^j
            for j in range(d):
                nxt[j] -= top * phi[j]
        cur = nxt
    return tuple(rows)


class CycNumber:
    """One element of Q(zeta_M), exact."""

    __slots__ = ("conductor", "coords")
    __hash__ = None

    def __init__(self, conductor, coords):
        d = len(cyclotomic_poly(conductor)) - 1
        coords = [Fraction(c) for c in coords]
        if len(coords) != d:
            raise ValueError(
                f"conductor {conductor} needs {d} coordinates, got {len(coords)}"
            )
        self.conductor = conductor
        self.coords = tuple(coords)

    # -- constructors -------------------------------------------------------

    @classmethod
    def zeta(cls, m, k=1):
        """zeta_m^k."""
        k %= m
        row = _reduction_table(m)[k]
        return cls(m, row)

    @classmethod
    def from_rational(cls, value, conductor=1):
        d = len(cyclotomic_poly(conductor)) - 1
        coords = [Fraction(value)] + [Fraction(0)] * (d - 1)
        return cls(conductor, coords)

    @classmethod
    def from_exponent_histogram(cls, m, counts):
        """sum_k counts[k] * zeta_m^k, exact; counts indexed by exponent."""
        counts = np.asarray(counts)
        if counts.shape[0] != m:
            raise ValueError("histogram length must equal the conductor")
        table = _reduction_table(m)
        d = len(table[0])
        acc = [Fraction(0)] * d
        for k in range(m):
            c = int(counts[k])
            if c:
                row = table[k]
                for j in range(d):
                    acc[j] += c * row[j]
        return cls(m, acc)

    # -- conductor handling ---------------------------------------------------

    def to_conductor(self, m):
        """Reinterpret inside Q(zeta_m) for conductor | m."""
        if m == self.conductor:
            return self
        if m % self.conductor:
            raise ValueError(f"{self.conductor} does not divide {m}")
        step = m // self.conductor
        table = _reduction_table(m)
        d = len(table[0])
        acc = [Fraction(0)] * d
        for k, c in enumerate(self.coords):
            if c:
                row = table[(k * step) % m]
                for j in range(d):
                    acc[j] += c * row[j]
        return CycNumber(m, acc)

    def _merge(self, other):
        if not isinstance(other, CycNumber):
            other = CycNumber.from_rational(other, 1)
        m = math.lcm(self.conductor, other.conductor)
        return self.to_conductor(m), other.to_conductor(m)

    # -- ring operations --------------------------------------------------------

    def __add__(self, other):
        a, b = self._merge(other)
        return CycNumber(a.conductor, [x + y for x, y in zip(a.coords, b.coords)])

    __radd__ = __add__

    def __sub__(self, other):
        a, b = self._merge(other)
        return CycNumber(a.conductor, [x - y for x, y in zip(a.coords, b.coords)])

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        return CycNumber(self.conductor, [-c for c in self.coords])

    def __mul__(self, other):
        a, b = self._merge(other)
        m = a.conductor
        d = len(a.coords)
        conv = [Fraction(0)] * (2 * d - 1)
        for i, x in enumerate(a.coords):
            if x:
                for j, y in enumerate(b.coords):
                    if y:
                        conv[i + j] += x * y
        table = _reduction_table(m)
        acc = list(conv[:d])
        for k in range(d, 2 * d - 1):
            c = conv[k]
            if c:
                row = table[k % m]  # z^m = 1 wraps the k >= m powers
                for j in range(d):
                    acc[j] += c * row[j]
        return CycNumber(m, acc)

    __rmul__ = __mul__

    def __truediv__(self, other):
        a, b = self._merge(other)
        return a * b.inverse()

    def __rtruediv__(self, other):
        return CycNumber.from_rational(other, 1) / self

    def __pow__(self, e):
        if e < 0:
            return self.inverse() ** (-e)
        result = CycNumber.from_rational(1, self.conductor)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def inverse(self):
        """Extended Euclid against Phi_M in Q[x]."""
        if self.is_zero():
            raise ZeroArgument("zero has no inverse")
        phi = [Fraction(c) for c in cyclotomic_poly(self.conductor)]
        a = list(self.coords)
        # xgcd(a, phi): maintain s with s*a = r (mod phi)
        r0, r1 = _qpoly_trim(a), _qpoly_trim(phi)
        s0, s1 = [Fraction(1)], []
        while r1:
            q, rem = _qpoly_divmod(r0, r1)
            r0, r1 = r1, rem
            s0, s1 = s1, _qpoly_sub(s0, _qpoly_mul(q, s1))
        # r0 = gcd is a nonzero constant (phi has no root in common with a)
        if len(r0) != 1:
            raise ZeroArgument("element is a zero divisor; conductor data corrupt")
        inv_c = 1 / r0[0]
        coords = [c * inv_c for c in s0]
        d = len(self.coords)
        coords = coords + [Fraction(0)] * (d - len(coords))
        return CycNumber(self.conductor, coords[:d])

    # -- predicates ----------------------------------------------------------------

    def is_zero(self):
        return all(c == 0 for c in self.coords)

    def is_rational(self):
        return all(c == 0 for c in self.coords[1:])

    def as_fraction(self):
        if not self.is_rational():
            raise ValueError("value is irrational")
        return self.coords[0]

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.is_rational() and self.coords[0] == other
        if not isinstance(other, CycNumber):
            return NotImplemented
        a, b = self._merge(other)
        return a.coords == b.coords

    def __ne__(self, other):
        result = self.__eq__(other)
        return result if result is NotImplemented else not result

    # -- lossy exit ------------------------------------------------------------------

    def __complex__(self):
        z = np.exp(2j * np.pi / self.conductor)
        return complex(sum(float(c) * z**k for k, c in enumerate(self.coords)))

    def __repr__(self):
        terms = [
            f"{c}*z{self.conductor}^{k}" if k else f"{c}"
            for k, c in enumerate(self.coords)
            if c
        ]
        return " + ".join(terms) if terms else "0"


# -- Fraction polynomial helpers (dense, constant first) ------------------------


def _qpoly_trim(a):
    i = len(a)
    while i and a[i - 1] == 0:
        i -= 1
    return a[:i]


def _qpoly_sub(a, b):
    m = max(len(a), len(b))
    a = list(a) + [Fraction(0)] * (m - len(a))
    b = list(b) + [Fraction(0)] * (m - len(b))
    return _qpoly_trim([x - y for x, y in zip(a, b)])


def _qpoly_mul(a, b):
    if not a or not b:
        return []
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _qpoly_trim(out)


def _qpoly_divmod(a, b):
    a = list(a)
    b = _qpoly_trim(b)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    q = [Fraction(0)] * max(1, len(a) - len(b) + 1)
    while True:
        a = _qpoly_trim(a)
        if len(a) < len(b):
            return _qpoly_trim(q), a
        c = a[-1] / b[-1]
        k = len(a) - len(b)
        q[k] = c
        for j in range(len(b)):
            a[k + j] -= c * b[j]
