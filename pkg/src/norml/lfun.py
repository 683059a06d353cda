"""Exact rational models for power-sum coefficient streams.

A sequence c_1, c_2, ... is modeled as c_s = sum_i a_i*gamma_i^s minus
sum_j b_j*beta_j^s with positive integer multiplicities: the log-derivative
coefficients of a rational function with poles 1/gamma_i and zeros 1/beta_j.

The pipeline is exact end to end.  Berlekamp-Massey runs over Q(zeta_M) and
yields the minimal recurrence; the characteristic polynomial is never factored
numerically.  Instead the multiplicity function is interpolated as a
polynomial V with V(lambda) = multiplicity of lambda, and eigenvalues are
grouped by exact gcds gcd(P, V - n) over the integer candidates n.  Floating
point appears in exactly two supporting roles: suggesting candidate integers
(every suggestion is verified exactly) and approximating moduli for weight
classification.
"""

import cmath
import math
from dataclasses import dataclass, replace
from fractions import Fraction

import numpy as np

from .cyclotomic import CycNumber
from .errors import InsufficientTerms, NonIntegerMultiplicity
from .sums import CoefficientSequence

WEIGHT_TOLERANCE = 1e-6
_APPROX_TOL = 1e-8


def _cyc(v):
    return v if isinstance(v, CycNumber) else CycNumber.from_rational(v)


# -- exact polynomial helpers (ascending coefficient lists over Q(zeta_M)) -------


def _ptrim(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def _psub(a, b):
    n = max(len(a), len(b))
    zero = _cyc(0)
    out = []
    for i in range(n):
        x = a[i] if i < len(a) else zero
        y = b[i] if i < len(b) else zero
        out.append(x - y)
    return _ptrim(out)


def _pmul(a, b):
    if not a or not b:
        return []
    zero = _cyc(0)
    out = [zero] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x == 0:
            continue
        for j, y in enumerate(b):
            out[i + j] = out[i + j] + x * y
    return _ptrim(out)


def _pdivmod(a, b):
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    r = list(a)
    db = len(b) - 1
    if len(r) - 1 < db:
        return [], _ptrim(r)
    inv = _cyc(1) / b[-1]
    q = [_cyc(0)] * (len(r) - db)
    for k in range(len(r) - db - 1, -1, -1):
        c = r[db + k] * inv
        if c != 0:
            q[k] = c
            for i in range(db + 1):
                r[i + k] = r[i + k] - c * b[i]
    return _ptrim(q), _ptrim(r[:db])


def _pmonic(a):
    if not a:
        return []
    inv = _cyc(1) / a[-1]
    return [c * inv for c in a]


def _pgcd(a, b):
    a, b = list(a), list(b)
    while b:
        a, b = b, _pdivmod(a, b)[1]
    return _pmonic(a)


def _pinv_mod(a, modulus):
    """Inverse of a modulo a coprime polynomial, by the extended Euclid walk."""
    r0, r1 = list(modulus), list(a)
    t0, t1 = [], [_cyc(1)]
    while r1:
        q, r = _pdivmod(r0, r1)
        r0, r1 = r1, r
        t0, t1 = t1, _psub(t0, _pmul(q, t1))
    if len(r0) != 1:
        raise ZeroDivisionError("polynomial is not invertible modulo the modulus")
    inv = _cyc(1) / r0[0]
    return _ptrim([c * inv for c in t0])


def _pderiv(a):
    return _ptrim([a[i] * _cyc(i) for i in range(1, len(a))])


def _peval(a, x):
    acc = _cyc(0)
    for c in reversed(a):
        acc = acc * x + c
    return acc


def _peval_complex(a, z):
    acc = 0j
    for c in reversed(a):
        acc = acc * z + complex(c)
    return acc


def _proots(a):
    if len(a) <= 1:
        return ()
    desc = [complex(c) for c in reversed(a)]
    return tuple(np.roots(desc))


def _power_sums(monic, S):
    """Newton power sums of the root multiset of a monic polynomial."""
    d = len(monic) - 1
    if d == 0:
        return [_cyc(0)] * S
    a = [monic[d - i] for i in range(1, d + 1)]  # a_1 .. a_d
    sums = []
    for s in range(1, S + 1):
        acc = _cyc(-s) * a[s - 1] if s <= d else _cyc(0)
        for i in range(1, min(s - 1, d) + 1):
            acc = acc - a[i - 1] * sums[s - i - 1]
        sums.append(acc)
    return sums


# -- recurrences -----------------------------------------------------------------


@dataclass(frozen=True)
class Recurrence:
    """Shortest linear recurrence: c_s + sum_i coeffs[i-1]*c_{s-i} = 0."""

    coeffs: tuple
    order: int
    certified: bool

    @property
    def char_poly(self):
        """x^L + coeffs[0]*x^(L-1) + ... + coeffs[L-1], ascending."""
        return tuple(reversed(self.coeffs)) + (_cyc(1),)


def _sequence_values(seq):
    values = seq.values if isinstance(seq, CoefficientSequence) else tuple(seq)
    return [_cyc(v) for v in values]


def minimal_recurrence(seq):
    """Berlekamp-Massey over the exact coefficient field.

    Returns the minimal recurrence when it is certified (2L <= S-2, leaving
    two spare confirming terms); otherwise raises InsufficientTerms carrying
    the uncertified recurrence as a diagnostic.
    """
    c = _sequence_values(seq)
    S = len(c)
    if S < 2:
        raise ValueError("a recurrence needs at least two terms")
    one, zero = _cyc(1), _cyc(0)
    C, B = [one], [one]
    L, m, b = 0, 1, one
    for n in range(S):
        d = c[n]
        for i in range(1, L + 1):
            d = d + C[i] * c[n - i]
        if d == 0:
            m += 1
            continue
        coef = d / b
        shifted = [zero] * m + [coef * x for x in B]
        if 2 * L <= n:
            T = list(C)
            C = _psub(C, shifted)
            # _psub trims; the connection polynomial keeps explicit length
            L, B, b, m = n + 1 - L, T, d, 1
        else:
            C = _psub(C, shifted)
            m += 1
        C = list(C) + [zero] * (L + 1 - len(C))
    rec = Recurrence(coeffs=tuple(C[1 : L + 1]), order=L, certified=2 * L <= S - 2)
    if not rec.certified:
        raise InsufficientTerms(
            f"no recurrence of order <= {(S - 2) // 2} fits all {S} terms "
            f"(minimal order is {L})",
            recurrence=rec,
        )
    return rec


# -- rational models ----------------------------------------------------------------


@dataclass(frozen=True)
class Eigenvalue:
    """One block of eigenvalues sharing a multiplicity.

    ``minpoly`` is monic with ascending exact coefficients; ``value`` is the
    exact eigenvalue when the block is linear, else None and only the complex
    approximations in ``approx`` are available.
    """

    minpoly: tuple
    multiplicity: int
    value: object
    approx: tuple


@dataclass(frozen=True)
class RationalModel:
    """Poles minus roots, each a tuple of Eigenvalue blocks; reduced form."""

    poles: tuple
    roots: tuple
    q_m: int


def _numerator_interpolant(P, c):
    """W with W(lambda) = lambda * P'(lambda) * (multiplicity of lambda)."""
    L = len(P) - 1
    W = []
    for k in range(L):
        acc = _cyc(0)
        for s in range(1, L - k + 1):
            acc = acc + P[k + s] * c[s - 1]
        W.append(acc)
    return _ptrim(W)


def _split_linear(block, approx):
    """Pull exactly verified rational roots out of a squarefree block."""
    rem = block
    found = []
    candidates = set()
    for z in approx:
        if abs(z.imag) < _APPROX_TOL:
            candidates.add(Fraction(round(z.real)))
            candidates.add(Fraction(z.real).limit_denominator(1000))
    for cand in sorted(candidates):
        lam = _cyc(cand)
        if len(rem) - 1 >= 1 and _peval(rem, lam) == 0:
            rem = _pdivmod(rem, [-lam, _cyc(1)])[0]
            found.append(lam)
    if len(rem) - 1 == 1:
        found.append(_cyc(0) - rem[0])  # monic, so the root is -constant
        rem = [_cyc(1)]
    return found, rem


def _block_key(block):
    z = block.approx[0] if block.approx else 0j
    return (len(block.minpoly), round(z.real, 9), round(z.imag, 9))


def fit_rational_model(seq, q_m=None):
    """Exact signed power-sum model of a certified-recurrence sequence.

    Raises InsufficientTerms when no certified recurrence exists at this
    depth, and NonIntegerMultiplicity when a recurrence exists but the
    sequence is not a power sum with integer multiplicities (the rationality
    failure of the log-derivative, as for skyscraper sequences).
    """
    if q_m is None:
        if not isinstance(seq, CoefficientSequence):
            raise ValueError("q_m is required for plain sequences")
        q_m = seq.q**seq.m
    c = _sequence_values(seq)
    rec = minimal_recurrence(seq)
    L = rec.order
    if L == 0:
        return RationalModel(poles=(), roots=(), q_m=q_m)
    P = [_cyc(v) for v in rec.char_poly]
    if P[0] == 0:
        raise NonIntegerMultiplicity(
            "the minimal recurrence has a zero eigenvalue; the sequence is "
            "not a power sum"
        )
    if len(_pgcd(P, _pderiv(P))) > 1:
        raise NonIntegerMultiplicity(
            "the minimal recurrence has repeated eigenvalues; the sequence "
            "is not a power sum"
        )
    W = _numerator_interpolant(P, c)
    V = _pdivmod(_pmul(W, _pinv_mod(_pmul([_cyc(0), _cyc(1)], _pderiv(P)), P)), P)[1]
    approx_roots = _proots(P)
    approx_mults = [_peval_complex(V, z) for z in approx_roots]
    candidates = sorted(
        {round(v.real) for v in approx_mults} - {0}, key=lambda n: (n < 0, abs(n))
    )
    blocks = []
    covered = []
    for n in candidates:
        G = _pgcd(P, _psub(V, [_cyc(n)]))
        if len(G) > 1:
            blocks.append((n, G))
            covered.append(G)
    product = [_cyc(1)]
    for G in covered:
        product = _pmul(product, G)
    if _pmonic(product) != _pmonic(P):
        raise NonIntegerMultiplicity(
            "eigenvalue multiplicities are not integers at this depth",
            multiplicities=approx_mults,
        )
    poles, roots = [], []
    for n, G in blocks:
        exact, rem = _split_linear(G, _proots(G))
        pieces = [
            Eigenvalue(
                minpoly=(_cyc(0) - lam, _cyc(1)),
                multiplicity=abs(n),
                value=lam,
                approx=(complex(lam),),
            )
            for lam in exact
        ]
        if len(rem) > 1:
            pieces.append(
                Eigenvalue(
                    minpoly=tuple(rem),
                    multiplicity=abs(n),
                    value=None,
                    approx=_proots(rem),
                )
            )
        (poles if n > 0 else roots).extend(pieces)
    model = RationalModel(
        poles=tuple(sorted(poles, key=_block_key)),
        roots=tuple(sorted(roots, key=_block_key)),
        q_m=q_m,
    )
    if series_expand(model, len(c)) != c:
        raise NonIntegerMultiplicity(
            "fitted model fails to regenerate the input sequence",
            multiplicities=approx_mults,
        )
    return model


def series_expand(model, S):
    """c_1..c_S regenerated from the model as signed power sums."""
    out = [_cyc(0)] * S
    for sign, blocks in ((1, model.poles), (-1, model.roots)):
        for block in blocks:
            mult = _cyc(sign * block.multiplicity)
            sums = _power_sums(list(block.minpoly), S)
            out = [acc + mult * v for acc, v in zip(out, sums)]
    return out


def rth_power_check(seq, r):
    """Model of the r-fold sequence (r*c_s), the log-derivative of L^r.

    Rationality of L^r can hold where rationality of L fails; r = 1 is the
    plain fit.
    """
    if r < 1:
        raise ValueError("power index r must be positive")
    if not isinstance(seq, CoefficientSequence):
        raise ValueError("rth_power_check needs sequence metadata")
    factor = _cyc(r)
    scaled = replace(seq, values=tuple(factor * _cyc(v) for v in seq.values))
    return fit_rational_model(scaled)


# -- weights ------------------------------------------------------------------------


@dataclass(frozen=True)
class WeightRow:
    kind: str
    eigenvalue: complex
    modulus: float
    weight: float
    nearest: int
    deviation: float
    multiplicity: int


@dataclass(frozen=True)
class WeightReport:
    rows: tuple
    integral_weights_ok: bool
    total_degree: int
    max_weight: object
    tolerance: float


def classify_weights(model, q_m, tolerance=WEIGHT_TOLERANCE):
    """Per-eigenvalue q_m-weights w = 2 log|gamma| / log q_m."""
    rows = []
    degree = 0
    for kind, blocks in (("pole", model.poles), ("root", model.roots)):
        for block in blocks:
            degree += block.multiplicity * (len(block.minpoly) - 1)
            for z in block.approx:
                w = 2.0 * math.log(abs(z)) / math.log(q_m)
                nearest = round(w)
                rows.append(
                    WeightRow(
                        kind=kind,
                        eigenvalue=complex(z),
                        modulus=abs(z),
                        weight=w,
                        nearest=nearest,
                        deviation=abs(w - nearest),
                        multiplicity=block.multiplicity,
                    )
                )
    ok = all(row.deviation <= tolerance for row in rows)
    return WeightReport(
        rows=tuple(rows),
        integral_weights_ok=ok,
        total_degree=degree,
        max_weight=max((row.weight for row in rows), default=None),
        tolerance=tolerance,
    )
