"""Counting polynomial preimages over a finite field.

Given g in K[x] and a batch of targets u, computes #{x in K : g(x) = u}
for every u.  Two strategies:

* ``scan``: evaluate g once over the whole field, histogram the values,
  and answer each query by lookup.  Linear in the field size, cached per
  (field, polynomial), and the right choice whenever the field fits in
  memory.

* ``gcd``: per target the count equals deg gcd(x^Q - x, g - u) with
  Q = |K|, because x^Q - x is the squarefree product of all linear
  polynomials over K.  x^Q is reduced modulo h_u = (g - u)/lc(g) with the
  Frobenius-doubling recurrence xi_{a+b} = xi_a^(p^b) o xi_b, so the
  number of modular compositions is logarithmic in the extension degree;
  the gcd degree then falls out of a cross-multiplied Euclid that needs
  no field inversions.  All rows advance in lockstep as integer tensors,
  which keeps fields far beyond any scan budget tractable.
"""

import numpy as np

from .errors import BudgetExceeded

SCAN_LIMIT = 1 << 21  # automatic scan threshold
FORCED_SCAN_LIMIT = 1 << 24  # explicit method="scan" refuses above this
CHUNK = 1 << 17

_hist_cache = {}


def count_roots(K, g, U, method="auto"):
    """#{x in K : g(x) = u} for each encoding u in U, as an int64 array.

    ``g`` lists coefficient encodings, constant term first.  Trailing zero
    coefficients are ignored.  ``method`` is "auto", "scan", or "gcd".
    """
    U = np.atleast_1d(np.asarray(U, dtype=np.int64))
    g = [int(c) for c in g]
    while g and g[-1] == 0:
        g.pop()
    d = len(g) - 1
    if d <= 0:
        # constant map: the whole field sits above g0, nothing elsewhere
        g0 = g[0] if g else 0
        return np.where(U == g0, K.order, 0).astype(np.int64)
    if d == 1:
        return np.ones(U.shape, dtype=np.int64)
    if method == "auto":
        method = "scan" if K.order <= SCAN_LIMIT else "gcd"
    if method == "scan":
        if K.order > FORCED_SCAN_LIMIT:
            raise BudgetExceeded(
                f"field of order {K.order} is too large for a value scan"
            )
        return _value_histogram(K, tuple(g))[U].astype(np.int64)
    if method == "gcd":
        return _gcd_counts(K, g, U)
    raise ValueError(f"unknown method {method!r}")


def _value_histogram(K, g):
    key = (K.p, K.n, K.seed, g)
    hist = _hist_cache.get(key)
    if hist is None:
        hist = np.zeros(K.order, dtype=np.int32)
        coeffs = list(g)
        for lo in range(0, K.order, CHUNK):
            X = K.bdecode(np.arange(lo, min(lo + CHUNK, K.order), dtype=np.int64))
            vals = K.bencode(K.beval_poly(coeffs, X))
            hist += np.bincount(vals, minlength=K.order).astype(np.int32)
        _hist_cache[key] = hist
    return hist


# -- gcd path -----------------------------------------------------------------
#
# Polynomials modulo h_u live as (B, d, n) tensors: row = target, middle =
# coefficient slot, last = field coordinates.  h_u is monic of degree d and
# all rows share every coefficient except the constant term, but nothing
# below exploits that: NH[:, j] holds the coordinates of -h_j, so that
# x^d == sum_j NH[:, j] x^j row by row.


def _degrees(F):
    """Per-row degree of a (B, m, n) coefficient tensor; -1 for zero rows."""
    nz = F.any(axis=2)
    return (nz * np.arange(1, F.shape[1] + 1, dtype=np.int64)).max(axis=1) - 1


def _scale(K, lc, F):
    """Multiply every coefficient slot of F (B, m, n) by the row scalars lc."""
    B, m, n = F.shape
    flat = K.bmul(np.repeat(lc, m, axis=0), F.reshape(B * m, n))
    return flat.reshape(B, m, n)


def _fold_top(K, conv, NH, d):
    """Reduce slots d..top of conv (B, m, n) in place using x^d = NH."""
    p = K.p
    for s in range(conv.shape[1] - 1, d - 1, -1):
        c = conv[:, s]
        if not c.any():
            continue
        for j in range(d):
            conv[:, s - d + j] = (conv[:, s - d + j] + K.bmul(c, NH[:, j])) % p


def _modmul(K, F, G, NH, d):
    """F * G mod h, all (B, d, n)."""
    B, n = F.shape[0], K.n
    conv = np.zeros((B, 2 * d - 1, n), dtype=np.int64)
    for i in range(d):
        Fi = F[:, i]
        if not Fi.any():
            continue
        for j in range(d):
            Gj = G[:, j]
            if not Gj.any():
                continue
            conv[:, i + j] = (conv[:, i + j] + K.bmul(Fi, Gj)) % K.p
    _fold_top(K, conv, NH, d)
    return np.ascontiguousarray(conv[:, :d])


def _mulx(K, F, NH, d):
    """x * F mod h."""
    top = F[:, d - 1]
    G = np.zeros_like(F)
    G[:, 1:] = F[:, : d - 1]
    if top.any():
        for j in range(d):
            G[:, j] = (G[:, j] + K.bmul(top, NH[:, j])) % K.p
    return G


def _twist(K, F, k):
    """Apply the p^k Frobenius to every coefficient of F."""
    B, m, n = F.shape
    return K.bfrobenius(F.reshape(B * m, n), k).reshape(B, m, n)


def _compose(K, F, G, NH, d):
    """F(G) mod h by Horner; F, G are (B, d, n)."""
    res = np.zeros_like(F)
    res[:, 0] = F[:, d - 1]
    for k in range(d - 2, -1, -1):
        res = _modmul(K, res, G, NH, d)
        res[:, 0] = (res[:, 0] + F[:, k]) % K.p
    return res


def _x_power_p(K, NH, d, B):
    """x^p mod h as a (B, d, n) tensor."""
    p, n = K.p, K.n
    F = np.zeros((B, d, n), dtype=np.int64)
    if p < d:
        F[:, p, 0] = 1
        return F
    F[:, 1, 0] = 1  # the monomial x
    for bit in bin(p)[3:]:
        F = _modmul(K, F, F, NH, d)
        if bit == "1":
            F = _mulx(K, F, NH, d)
    return F


def _x_power_order(K, NH, d, B):
    """x^(p^E) mod h for E = K.n, by Frobenius doubling on the exponent.

    With xi_a = x^(p^a) mod h, the identity xi_{a+b} = xi_a^(p^b) o xi_b
    holds modulo any h (apply the p^b power map to x^(p^a) = xi_a + q h and
    use h | h^(p^b)), so a square-and-multiply chain on E needs about
    2 log2(E) modular compositions instead of E of them.
    """
    xi1 = _x_power_p(K, NH, d, B)
    acc, a = xi1, 1
    for bit in bin(K.n)[3:]:
        acc = _compose(K, _twist(K, acc, a), acc, NH, d)
        a *= 2
        if bit == "1":
            acc = _compose(K, _twist(K, acc, 1), xi1, NH, d)
            a += 1
    return acc


def _gcd_degrees(K, NH, F, d):
    """deg gcd(h, F) per row, for F of degree < d.

    Cross-multiplied Euclid: the leading term of the longer polynomial is
    cancelled by lc(b) * a - lc(a) * x^shift * b, which rescales by units
    only and therefore preserves the gcd degree while avoiding inversions.
    Rows retire as their remainder hits zero.
    """
    B, n = F.shape[0], K.n
    p = K.p
    A = np.zeros((B, d + 1, n), dtype=np.int64)
    A[:, :d] = (-NH) % p
    A[:, d, 0] = 1  # A = h, monic of degree d
    Bq = np.zeros_like(A)
    Bq[:, :d] = F
    dega = np.full(B, d, dtype=np.int64)
    degb = _degrees(Bq)
    slots = np.arange(d + 1, dtype=np.int64)
    for _ in range(4 * (d + 2)):
        active = degb >= 0
        if not active.any():
            break
        swap = active & (dega < degb)
        if swap.any():
            tmpF = A[swap].copy()
            A[swap] = Bq[swap]
            Bq[swap] = tmpF
            tmpd = dega[swap].copy()
            dega[swap] = degb[swap]
            degb[swap] = tmpd
        elim = degb >= 0
        if not elim.any():
            continue
        idx_b = degb.clip(min=0)[:, None, None] * np.ones((1, 1, n), dtype=np.int64)
        idx_a = dega.clip(min=0)[:, None, None] * np.ones((1, 1, n), dtype=np.int64)
        lcB = np.take_along_axis(Bq, idx_b, axis=1)[:, 0]
        lcA = np.take_along_axis(A, idx_a, axis=1)[:, 0]
        shift = (dega - degb).clip(min=0)
        src = slots[None, :] - shift[:, None]
        shifted = np.take_along_axis(
            Bq, src.clip(min=0)[:, :, None] * np.ones((1, 1, n), dtype=np.int64), axis=1
        )
        shifted = np.where((src >= 0)[:, :, None], shifted, 0)
        newA = (_scale(K, lcB, A) - _scale(K, lcA, shifted)) % p
        A = np.where(elim[:, None, None], newA, A)
        dega = _degrees(A)
    else:  # pragma: no cover - the degree sum strictly decreases
        raise RuntimeError("gcd degree loop failed to terminate")
    return dega


def _gcd_counts(K, g, U):
    p, n = K.p, K.n
    d = len(g) - 1
    inv_lead = K.inverse(g[-1])
    inv_lead_coords = K.coords(inv_lead)
    g0_coords = K.coords(g[0])
    neg_scalars = [K.coords(K.neg(K.mul(g[k], inv_lead))) for k in range(1, d)]
    out = np.empty(U.shape[0], dtype=np.int64)
    for lo in range(0, U.shape[0], CHUNK):
        u = U[lo : lo + CHUNK]
        B = u.shape[0]
        NH = np.zeros((B, d, n), dtype=np.int64)
        # -h_0 = (u - g_0) / lc(g) varies per row; the rest is shared
        NH[:, 0] = K._bmul_scalar((K.bdecode(u) - g0_coords) % p, inv_lead_coords)
        for k in range(1, d):
            NH[:, k] = neg_scalars[k - 1]
        xi = _x_power_order(K, NH, d, B)
        xi[:, 1, 0] = (xi[:, 1, 0] - 1) % p  # x^Q - x, already reduced mod h
        out[lo : lo + CHUNK] = _gcd_degrees(K, NH, xi, d)
    return out
