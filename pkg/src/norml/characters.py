"""Additive and multiplicative characters with exact cyclotomic values.

An additive character is pinned by a base field F_{p^m0} and a parameter a
in it:  psi_a(x) = zeta_p ^ Tr(a*x), trace down to F_p.  A multiplicative
character is pinned by a base field F_{p^d0} (cardinality Q0) and an
exponent e:  chi(g0^j) = zeta_{Q0-1}^(e*j) for the canonical generator g0.
Values are produced at the character's order as conductor (zeta_{Q0-1}^(e*j)
is a power of zeta_n for n the order), so quadratic characters yield plain
signs and a chi of order 4 yields Gaussian integers.

Evaluation on an extension field of degree m*m0 (resp. m*d0) goes through
the canonical subfield embedding for the parameter and through the relative
norm plus one discrete log for the multiplicative side.  Both characters are
immutable value objects, safe to share.
"""

import math
import re
from dataclasses import dataclass

import numpy as np

from ._intmath import is_prime
from .cyclotomic import CycNumber
from .errors import FieldMismatch, NotPrime, ZeroArgument


@dataclass(frozen=True)
class AdditiveCharacter:
    p: int
    m0: int
    a: int

    def __post_init__(self):
        if not is_prime(self.p):
            raise NotPrime(f"{self.p} is not prime")
        if self.m0 < 1:
            raise ValueError("base degree must be positive")
        if not 0 <= self.a < self.p**self.m0:
            raise ValueError(f"parameter {self.a} outside the base field")

    @property
    def is_trivial(self):
        return self.a == 0

    def _check(self, ctx):
        if ctx.p != self.p or ctx.n % self.m0:
            raise FieldMismatch(
                f"psi over {self.p}^{self.m0} cannot act on F_{ctx.p}^{ctx.n}"
            )

    def embedded_parameter(self, ctx):
        self._check(ctx)
        if self.m0 == 1:
            return self.a  # residues encode identically everywhere
        return ctx.subfield_embedding(self.m0).embed(self.a)

    def bulk_exponents(self, ctx, coords):
        """Tr(a*x) down to F_p for every coordinate row, as residues mod p.
        psi(0) = 1 comes out naturally (exponent 0)."""
        a_coords = ctx.coords(self.embedded_parameter(ctx))
        return ctx.babsolute_trace(ctx._bmul_scalar(coords, a_coords))


def eval_additive(psi, ctx, x):
    """psi(x) for x in the field of ctx, exact with conductor p."""
    a_emb = psi.embedded_parameter(ctx)
    c = ctx.absolute_trace(ctx.mul(a_emb, x))
    return CycNumber.zeta(psi.p, c)


@dataclass(frozen=True)
class MultiplicativeCharacter:
    p: int
    d0: int
    e: int

    def __post_init__(self):
        if not is_prime(self.p):
            raise NotPrime(f"{self.p} is not prime")
        if self.d0 < 1:
            raise ValueError("base degree must be positive")
        object.__setattr__(self, "e", self.e % (self.p**self.d0 - 1))

    @property
    def q0(self):
        return self.p**self.d0

    @property
    def order(self):
        return (self.q0 - 1) // math.gcd(self.e, self.q0 - 1)

    @property
    def is_trivial(self):
        return self.e == 0

    @property
    def _order_exponent(self):
        """e' with chi(g0^j) = zeta_n^(e'*j), gcd(e', n) = 1."""
        return self.e * self.order // (self.q0 - 1)

    def power(self, k):
        return MultiplicativeCharacter(self.p, self.d0, (self.e * k) % (self.q0 - 1))

    def splitting_degree(self, q):
        """Smallest d >= 1 with order | q^d - 1."""
        n = self.order
        if n == 1:
            return 1
        if math.gcd(q, n) != 1:
            raise ValueError(f"{q} shares a factor with the character order {n}")
        d, acc = 1, q % n
        while acc != 1:
            acc = acc * q % n
            d += 1
        return d

    def _check(self, ctx):
        if ctx.p != self.p or ctx.n % self.d0:
            raise FieldMismatch(
                f"chi over {self.p}^{self.d0} cannot act on F_{ctx.p}^{ctx.n}"
            )

    def _base_parts(self, ctx):
        self._check(ctx)
        emb = ctx.subfield_embedding(self.d0)
        return emb.src, emb

    def dlog_in_base(self, base, u):
        if base.log_table is not None:
            return int(base.log_table[u])
        return base.dlog(u, base.generator, base.order - 1)

    def bulk_exponents(self, ctx, coords):
        """Exponents of zeta_order for chi(N(x)) rowwise.  Rows encoding zero
        produce garbage; the caller owns the extension-by-zero masking."""
        base, emb = self._base_parts(ctx)
        norms = ctx.bnorm(self.d0, coords)
        proj = (norms @ emb.section.T) % ctx.p
        encs = base.bencode(proj)
        if base.log_table is None:  # pragma: no cover - character fields are tiny
            logs = np.array(
                [self.dlog_in_base(base, int(u)) if u else -1 for u in encs],
                dtype=np.int64,
            )
        else:
            logs = base.log_table[encs]
        return (logs * self._order_exponent) % self.order


def eval_multiplicative(chi, ctx, x):
    """chi(N(x)) for nonzero x, exact with the character order as conductor."""
    if x == 0:
        raise ZeroArgument("multiplicative characters are undefined at zero")
    base, emb = chi._base_parts(ctx)
    v = ctx.rel_norm(chi.d0, x)
    j = chi.dlog_in_base(base, emb.project(v))
    return CycNumber.zeta(chi.order, (chi._order_exponent * j) % chi.order)


# -- literals -----------------------------------------------------------------

_CHI_RE = re.compile(r"^chi:e=(\d+)@(\d+)\^(\d+)$")
_PSI_RE = re.compile(r"^psi:a=(\d+)(?:@(\d+)\^(\d+))?$")


def format_multiplicative(chi):
    return f"chi:e={chi.e}@{chi.p}^{chi.d0}"


def parse_multiplicative(text):
    m = _CHI_RE.match(text.strip())
    if not m:
        raise ValueError(f"malformed multiplicative character literal: {text!r}")
    e, p, d0 = map(int, m.groups())
    return MultiplicativeCharacter(p=p, d0=d0, e=e)


def format_additive(psi):
    return f"psi:a={psi.a}@{psi.p}^{psi.m0}"


def parse_additive(text, p=None, m0=None):
    """Parse 'psi:a=<enc>' (field from keywords) or 'psi:a=<enc>@<p>^<m0>'."""
    m = _PSI_RE.match(text.strip())
    if not m:
        raise ValueError(f"malformed additive character literal: {text!r}")
    a = int(m.group(1))
    if m.group(2) is not None:
        p, m0 = int(m.group(2)), int(m.group(3))
    if p is None or m0 is None:
        raise ValueError(
            f"literal {text!r} names no base field and none was supplied"
        )
    return AdditiveCharacter(p=p, m0=m0, a=a)
