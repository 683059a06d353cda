"""Finite fields F_{p^n} with canonical integer encodings and fiber streams.

Representation
--------------
An element of F_{p^n} is an integer in [0, p^n).  Its base-p digits, least
significant first, are the coordinates in the power basis 1, x, ..., x^{n-1}
of F_p[x] modulo a deterministically chosen monic irreducible of degree n
(the candidate with the lowest coefficient encoding, scanning from the seed).
For n = 1 the modulus is x, so elements are plain residues mod p.

All tower structure is explicit.  For every divisor d | n the degree-d
subfield sits inside F_{p^n} as the fixed set of the d-th Frobenius power;
an Embedding object identifies the canonical F_{p^d} with that subset by
sending the power basis to powers of a fixed root of the F_{p^d} modulus
(the root with the smallest encoding, so the map is reproducible).

Relative traces are F_p-linear and are applied as precomputed matrices;
relative norms are power maps u -> u^((p^n-1)/(p^d-1)).  Fibers of either
map are never enumerated by scanning the field: trace fibers are an affine
subspace (particular solution plus the kernel of the trace matrix), norm
fibers are a coset of the cyclic kernel of the norm, walked from a base
point found by a baby-step giant-step discrete log in the subfield group.

Bulk kernels
------------
Methods prefixed with ``b`` operate on int64 coordinate matrices of shape
(batch, n) and are plain numpy arithmetic mod p; they exist so that fiber
sweeps stay vectorized.  Scalar operations accept and return encodings, and
switch to log/exp tables when the field is small enough to hold them.
"""

import math

import numpy as np

from ._intmath import factorize, is_prime
from .errors import (
    BudgetExceeded,
    DegreeTooLarge,
    NotADivisor,
    NotInSubfield,
    NotPrime,
    ZeroArgument,
    ZeroNorm,
)

DEFAULT_MAX_ORDER = 1 << 28
TABLE_LIMIT = 1 << 21
FIBER_BUDGET = 1 << 26


# ---------------------------------------------------------------------------
# dense polynomial helpers over F_p (coefficient lists, constant term first)


def _fp_trim(a):
    i = len(a)
    while i > 0 and a[i - 1] == 0:
        i -= 1
    return a[:i]


def _fp_mulmod(a, b, mod, p):
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    return _fp_divmod(out, mod, p)[1]


def _fp_divmod(a, b, p):
    a = list(a)
    b = _fp_trim(list(b))
    db = len(b) - 1
    inv_lead = pow(b[-1], p - 2, p)
    q = [0] * max(1, len(a) - db)
    while len(_fp_trim(a)) - 1 >= db:
        a = _fp_trim(a)
        da = len(a) - 1
        c = a[-1] * inv_lead % p
        q[da - db] = c
        for j in range(db + 1):
            a[da - db + j] = (a[da - db + j] - c * b[j]) % p
    return _fp_trim(q), _fp_trim(a)


def _fp_powmod(base, e, mod, p):
    result = [1]
    base = _fp_divmod(base, mod, p)[1]
    while e:
        if e & 1:
            result = _fp_mulmod(result, base, mod, p)
        base = _fp_mulmod(base, base, mod, p)
        e >>= 1
    return result


def _fp_gcd(a, b, p):
    a, b = _fp_trim(list(a)), _fp_trim(list(b))
    while b:
        a, b = b, _fp_divmod(a, b, p)[1]
    if a:
        inv = pow(a[-1], p - 2, p)
        a = [c * inv % p for c in a]
    return a


def _fp_is_irreducible(f, p):
    """Rabin's test: f of degree n is irreducible iff x^(p^n) = x mod f and
    gcd(x^(p^(n/l)) - x, f) = 1 for every prime l | n."""
    n = len(f) - 1
    if n <= 0:
        return False
    x = [0, 1]
    for ell in factorize(n):
        h = _fp_powmod(x, p ** (n // ell), f, p)
        h = [(c - d) % p for c, d in _pad(h, x)]
        if len(_fp_gcd(h, f, p)) != 1:
            return False
    h = _fp_powmod(x, p**n, f, p)
    h = [(c - d) % p for c, d in _pad(h, x)]
    return not _fp_trim(h)


def _pad(a, b):
    m = max(len(a), len(b))
    return zip(list(a) + [0] * (m - len(a)), list(b) + [0] * (m - len(b)))


def _canonical_modulus(p, n, seed):
    """Lowest monic irreducible of degree n under coefficient encoding order,
    scanning cyclically from the seed offset."""
    if n == 1:
        return (0, 1)
    span = p**n
    for i in range(span):
        c = (seed + i) % span
        low = [(c // p**k) % p for k in range(n)]
        f = low + [1]
        if _fp_is_irreducible(f, p):
            return tuple(f)
    raise ArithmeticError("no irreducible polynomial found")  # pragma: no cover


def _rref_mod_p(rows, p):
    """Row-reduce an integer matrix mod p.  Returns (rref rows, pivot cols)."""
    rows = [[int(v) % p for v in r] for r in rows]
    if not rows:
        return rows, []
    cols = len(rows[0])
    pivots = []
    r = 0
    for c in range(cols):
        pivot = next((i for i in range(r, len(rows)) if rows[i][c] % p), None)
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        inv = pow(rows[r][c], p - 2, p)
        rows[r] = [v * inv % p for v in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] % p:
                f = rows[i][c]
                rows[i] = [(v - f * w) % p for v, w in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return rows, pivots


def _solve_affine_mod_p(A, b, p):
    """Solve A x = b over F_p.  Returns (particular solution, kernel basis)
    or (None, kernel basis) when inconsistent.  A is a list of rows."""
    rows = [list(r) + [v] for r, v in zip(A, b)]
    rref, pivots = _rref_mod_p(rows, p)
    cols = len(A[0])
    if cols in pivots:
        return None, []
    x = [0] * cols
    for r, c in enumerate(pivots):
        x[c] = rref[r][cols]
    free = [c for c in range(cols) if c not in pivots]
    kernel = []
    for fc in free:
        v = [0] * cols
        v[fc] = 1
        for r, c in enumerate(pivots):
            v[c] = (-rref[r][fc]) % p
        kernel.append(v)
    return x, kernel


class Embedding:
    """Canonical identification of F_{p^d} with the degree-d subfield of a
    larger context.  ``matrix`` columns are the parent coordinates of
    root^j, so the map is F_p-linear on coordinate vectors."""

    __slots__ = ("src", "dst", "root", "matrix", "section")

    def __init__(self, src, dst, root, matrix, section):
        self.src = src
        self.dst = dst
        self.root = root
        self.matrix = matrix
        self.section = section

    def embed(self, u):
        c = self.src.coords(u)
        img = (self.matrix @ c) % self.src.p
        return self.dst.encode(img)

    def bembed(self, coords_src):
        return (coords_src @ self.matrix.T) % self.src.p

    def project(self, u):
        c = self.dst.coords(u)
        s = (self.section @ c) % self.src.p
        if np.any((self.matrix @ s) % self.src.p != c):
            raise NotInSubfield(
                f"element {u} is not in the degree-{self.src.n} subfield"
            )
        return self.src.encode(s)

    def contains(self, u):
        return self.dst.frobenius(u, self.src.n) == u


class FieldCtx:
    """One finite field F_{p^n} with deterministic modulus and generator."""

    def __init__(self, p, n, seed=0, max_order=DEFAULT_MAX_ORDER, registry=None):
        if not is_prime(p):
            raise NotPrime(f"{p} is not prime")
        if n < 1:
            raise ValueError("degree must be positive")
        order = p**n
        if order > max_order:
            raise DegreeTooLarge(
                f"p^n = {p}^{n} exceeds the field-size ceiling {max_order}; "
                "raise max_order (or NORML_MAX_FIELD_BITS) to allow it"
            )
        self.p = p
        self.n = n
        self.order = order
        self.seed = seed
        self.registry = registry
        self.modulus = _canonical_modulus(p, n, seed)

        # reduction rows: coordinates of x^(n+k) for k = 0..n-2; each row comes
        # from shifting the previous one and folding the spilled x^n term back
        red = []
        cur = [(-c) % p for c in self.modulus[:n]]  # x^n
        red.append(list(cur))
        for _ in range(n - 2):
            carry = cur[-1]
            cur = [0] + cur[:-1]
            if carry:
                cur = [(a + carry * b) % p for a, b in zip(cur, red[0])]
            red.append(list(cur))
        self._red = np.array(red, dtype=np.int64) if n > 1 else np.zeros((0, 1), np.int64)
        self._red_rows = tuple(tuple(r) for r in red) if n > 1 else ()

        self._pow_base = tuple(p**k for k in range(n))
        self._frob = self._frobenius_matrix()
        self._frob_pows = {0: np.eye(n, dtype=np.int64) % p, 1: self._frob}
        self._trace_mats = {}
        self._order_factors = factorize(order - 1) if order > 2 else {}
        self._exp = None
        self._log = None
        self._frob_perm = None
        self.generator = self._find_generator()
        if order <= TABLE_LIMIT:
            self._build_tables()

    # -- encoding ----------------------------------------------------------

    def coords(self, u):
        if not 0 <= u < self.order:
            raise ValueError(f"encoding {u} out of range for order {self.order}")
        p = self.p
        out = np.empty(self.n, dtype=np.int64)
        for k in range(self.n):
            out[k] = u % p
            u //= p
        return out

    def encode(self, coords):
        u = 0
        for k in range(self.n - 1, -1, -1):
            u = u * self.p + int(coords[k]) % self.p
        return u

    def bdecode(self, encs):
        """Encodings (B,) -> coordinate matrix (B, n)."""
        encs = np.asarray(encs, dtype=np.int64)
        out = np.empty(encs.shape + (self.n,), dtype=np.int64)
        rem = encs.copy()
        for k in range(self.n):
            out[..., k] = rem % self.p
            rem //= self.p
        return out

    def bencode(self, coords):
        coords = np.asarray(coords, dtype=np.int64) % self.p
        weights = np.array(self._pow_base, dtype=np.int64)
        return coords @ weights

    # -- construction helpers ----------------------------------------------

    def _frobenius_matrix(self):
        """Matrix F with F[:, j] = coordinates of (x^j)^p."""
        n, p = self.n, self.p
        cols = []
        for j in range(n):
            xj = [0] * j + [1]
            img = _fp_powmod(xj, p, list(self.modulus), p)
            img = img + [0] * (n - len(img))
            cols.append(img[:n])
        return np.array(cols, dtype=np.int64).T % p

    def _find_generator(self):
        if self.order == 2:
            return 1
        total = self.order - 1
        primes = list(self._order_factors)
        if any(not is_prime(q) for q in primes):  # pragma: no cover
            raise ArithmeticError("incomplete factorization of the group order")
        start = 2 + (self.seed % max(1, self.order - 2))
        for i in range(self.order - 2):
            g = 2 + (start - 2 + i) % (self.order - 2)
            if all(self.pow(g, total // q) != 1 for q in primes):
                return g
        raise ArithmeticError("no generator found")  # pragma: no cover

    def _build_tables(self):
        size = self.order - 1
        exp = np.empty(size, dtype=np.int64)
        block = max(1, math.isqrt(size))
        row = np.empty((min(block, size), self.n), dtype=np.int64)
        cur = 1
        for i in range(row.shape[0]):
            row[i] = self.coords(cur)
            cur = self._mul_poly(cur, self.generator)
        big = self.coords(cur)  # generator^block
        filled = 0
        work = row
        while filled < size:
            take = min(row.shape[0], size - filled)
            exp[filled : filled + take] = self.bencode(work[:take])
            filled += take
            if filled < size:
                work = self._bmul_scalar(work, big)
        log = np.full(self.order, -1, dtype=np.int64)
        log[exp] = np.arange(size, dtype=np.int64)
        self._exp = exp
        self._log = log
        perm = np.empty(self.order, dtype=np.int64)
        for lo in range(0, self.order, 1 << 18):
            hi = min(lo + (1 << 18), self.order)
            chunk = self.bdecode(np.arange(lo, hi, dtype=np.int64))
            perm[lo:hi] = self.bencode(self.bfrobenius(chunk))
        self._frob_perm = perm

    # -- scalar arithmetic ---------------------------------------------------

    def add(self, a, b):
        if self.n == 1:
            return (a + b) % self.p
        return self.encode((self.coords(a) + self.coords(b)) % self.p)

    def sub(self, a, b):
        if self.n == 1:
            return (a - b) % self.p
        return self.encode((self.coords(a) - self.coords(b)) % self.p)

    def neg(self, a):
        if self.n == 1:
            return (-a) % self.p
        return self.encode((-self.coords(a)) % self.p)

    def mul(self, a, b):
        if self._log is not None:
            if a == 0 or b == 0:
                return 0
            return int(
                self._exp[(self._log[a] + self._log[b]) % (self.order - 1)]
            )
        return self._mul_poly(a, b)

    def _mul_poly(self, a, b):
        p, n = self.p, self.n
        if n == 1:
            return a * b % p
        ca, cb = self.coords(a), self.coords(b)
        conv = [0] * (2 * n - 1)
        for i in range(n):
            ai = int(ca[i])
            if ai:
                for j in range(n):
                    conv[i + j] += ai * int(cb[j])
        res = conv[:n]
        for k, row in enumerate(self._red_rows):
            c = conv[n + k]
            if c:
                for j in range(n):
                    res[j] += c * row[j]
        return self.encode([v % p for v in res])

    def pow(self, a, e):
        if e < 0:
            return self.pow(self.inverse(a), -e)
        if self._log is not None:
            if a == 0:
                return 0 if e else 1
            return int(self._exp[(self._log[a] * e) % (self.order - 1)])
        result = 1
        base = a
        while e:
            if e & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            e >>= 1
        return result

    def inverse(self, a):
        if a == 0:
            raise ZeroArgument("zero has no multiplicative inverse")
        if self._log is not None:
            return int(self._exp[(-self._log[a]) % (self.order - 1)])
        return self.pow(a, self.order - 2)

    def frobenius(self, u, k=1):
        """u -> u^(p^k), as the precomputed linear map on coordinates."""
        k %= self.n
        if k == 0:
            return u
        if self._frob_perm is not None:
            v = u
            for _ in range(k):
                v = int(self._frob_perm[v])
            return v
        m = self._frob_power(k)
        return self.encode((m @ self.coords(u)) % self.p)

    def _frob_power(self, k):
        if k not in self._frob_pows:
            m = self._frob_power(k - 1)
            self._frob_pows[k] = (self._frob @ m) % self.p
        return self._frob_pows[k]

    # -- tower structure -----------------------------------------------------

    def _check_divisor(self, d):
        if self.n % d:
            raise NotADivisor(f"{d} does not divide the field degree {self.n}")

    def trace_matrix(self, d):
        """Matrix of the relative trace onto the degree-d subfield."""
        self._check_divisor(d)
        if d not in self._trace_mats:
            acc = np.zeros((self.n, self.n), dtype=np.int64)
            for i in range(self.n // d):
                acc = (acc + self._frob_power((d * i) % self.n)) % self.p
            self._trace_mats[d] = acc
        return self._trace_mats[d]

    def rel_trace(self, d, u):
        """Trace onto the degree-d subfield; the result is an ambient encoding
        fixed by the d-th Frobenius power."""
        m = self.trace_matrix(d)
        return self.encode((m @ self.coords(u)) % self.p)

    def rel_norm(self, d, u):
        """Norm onto the degree-d subfield: u^((p^n-1)/(p^d-1))."""
        self._check_divisor(d)
        if u == 0:
            return 0
        return self.pow(u, (self.order - 1) // (self.p**d - 1))

    def in_subfield(self, d, u):
        self._check_divisor(d)
        return self.frobenius(u, d) == u

    def absolute_trace(self, u):
        """Trace down to F_p, returned as an integer residue in [0, p)."""
        t = self.rel_trace(1, u)
        return t % self.p  # encoding of a prime-field element is itself

    # -- fibers ---------------------------------------------------------------

    def trace_fiber(self, d, t):
        """All u with rel_trace(d, u) = t, sorted by encoding.

        The fiber is the affine space u0 + ker(trace matrix); it always has
        exactly p^(n-d) points and is materialized without a field scan.
        """
        self._check_divisor(d)
        if not self.in_subfield(d, t):
            raise NotInSubfield(f"trace target {t} is not in the degree-{d} subfield")
        size = self.p ** (self.n - d)
        if size > FIBER_BUDGET:
            raise BudgetExceeded(f"trace fiber of size {size} exceeds the budget")
        A = [list(row) for row in self.trace_matrix(d)]
        x, kernel = _solve_affine_mod_p(A, [int(v) for v in self.coords(t)], self.p)
        if x is None:  # pragma: no cover - trace is surjective onto the subfield
            raise NotInSubfield(f"no solution for trace target {t}")
        base = np.array(x, dtype=np.int64)
        if not kernel:
            return np.array([self.encode(base)], dtype=np.int64)
        K = np.array(kernel, dtype=np.int64)
        digits = self.bdigits(np.arange(size, dtype=np.int64), len(kernel))
        pts = (digits @ K + base) % self.p
        return np.sort(self.bencode(pts))

    def bdigits(self, values, k):
        out = np.empty(values.shape + (k,), dtype=np.int64)
        rem = values.copy()
        for i in range(k):
            out[..., i] = rem % self.p
            rem //= self.p
        return out

    def norm_fiber(self, d, t):
        """All u with rel_norm(d, u) = t != 0, sorted by encoding.

        The fiber is u0 * <g^(p^d - 1)>, a coset of the norm kernel of size
        (p^n-1)/(p^d-1); u0 comes from one discrete log in the subfield group.
        """
        self._check_divisor(d)
        if t == 0:
            raise ZeroNorm("norm fibers above zero are empty on the unit group")
        if not self.in_subfield(d, t):
            raise NotInSubfield(f"norm target {t} is not in the degree-{d} subfield")
        sub_order = self.p**d - 1
        e = (self.order - 1) // sub_order
        if e > FIBER_BUDGET:
            raise BudgetExceeded(f"norm fiber of size {e} exceeds the budget")
        if e == 1:
            return np.array([t], dtype=np.int64)
        ng = self.pow(self.generator, e)  # generates the subfield units
        j = self.dlog(t, ng, sub_order)
        u0 = self.pow(self.generator, j)
        kappa = self.pow(self.generator, sub_order)
        return np.sort(self._coset(u0, kappa, e))

    def _coset(self, u0, kappa, size):
        """Encodings of u0 * kappa^i for i < size, via blocked powering."""
        block = max(1, math.isqrt(size) + 1)
        row = np.empty((min(block, size), self.n), dtype=np.int64)
        cur = u0
        for i in range(row.shape[0]):
            row[i] = self.coords(cur)
            cur = self.mul(cur, kappa)
        big = self.coords(self.pow(kappa, row.shape[0]))
        out = np.empty(size, dtype=np.int64)
        filled = 0
        work = row
        while filled < size:
            take = min(row.shape[0], size - filled)
            out[filled : filled + take] = self.bencode(work[:take])
            filled += take
            if filled < size:
                work = self._bmul_scalar(work, big)
        return out

    def dlog(self, target, base, group_order):
        """Baby-step giant-step discrete log of target in <base>."""
        if target == 0:
            raise ZeroArgument("discrete log of zero")
        m = math.isqrt(group_order) + 1
        baby = {}
        cur = 1
        for i in range(m):
            baby.setdefault(cur, i)
            cur = self.mul(cur, base)
        giant = self.inverse(cur)  # base^(-m)
        y = target
        for k in range(m + 1):
            if y in baby:
                return (k * m + baby[y]) % group_order
            y = self.mul(y, giant)
        raise NotInSubfield(f"{target} is not in the subgroup generated by {base}")

    # -- bulk kernels ---------------------------------------------------------

    def bmul(self, A, B):
        """Pointwise product of two coordinate matrices (B, n)."""
        p, n = self.p, self.n
        if n == 1:
            return (A * B) % p
        conv = np.zeros((A.shape[0], 2 * n - 1), dtype=np.int64)
        for j in range(n):
            conv[:, j : j + n] += A * B[:, j : j + 1]
        res = conv[:, :n] + conv[:, n:] @ self._red
        return res % p

    def _bmul_scalar(self, A, s_coords):
        p, n = self.p, self.n
        if n == 1:
            return (A * int(s_coords[0])) % p
        conv = np.zeros((A.shape[0], 2 * n - 1), dtype=np.int64)
        for j in range(n):
            c = int(s_coords[j])
            if c:
                conv[:, j : j + n] += A * c
        res = conv[:, :n] + conv[:, n:] @ self._red
        return res % p

    def bpow(self, A, e):
        """Pointwise power of a coordinate matrix by a (possibly huge) int."""
        if e < 0:
            raise ValueError("bulk powering requires a nonnegative exponent")
        result = np.zeros_like(A)
        result[:, 0] = 1
        base = A % self.p
        while e:
            if e & 1:
                result = self.bmul(result, base)
            base = self.bmul(base, base)
            e >>= 1
        return result

    def bfrobenius(self, A, k=1):
        m = self._frob_power(k % self.n)
        return (A @ m.T) % self.p

    def btrace(self, d, A):
        m = self.trace_matrix(d)
        return (A @ m.T) % self.p

    def bnorm(self, d, A):
        self._check_divisor(d)
        return self.bpow(A, (self.order - 1) // (self.p**d - 1))

    def babsolute_trace(self, A):
        """Trace to F_p for every row, as an int64 vector of residues."""
        return self.btrace(1, A)[:, 0]

    def beval_poly(self, coeff_encodings, X):
        """Evaluate sum_k c_k T^k at each row of X (coordinate matrix)."""
        coeffs = [self.coords(c) for c in coeff_encodings]
        if not coeffs:
            return np.zeros_like(X)
        acc = np.broadcast_to(coeffs[-1], X.shape).copy() % self.p
        for c in reversed(coeffs[:-1]):
            acc = self.bmul(acc, X)
            acc = (acc + c) % self.p
        return acc

    def poly_eval(self, coeff_encodings, x):
        acc = 0
        for c in reversed(coeff_encodings):
            acc = self.add(self.mul(acc, x), c)
        return acc

    # -- misc -----------------------------------------------------------------

    def elements(self):
        return np.arange(self.order, dtype=np.int64)

    @property
    def order_factors(self):
        return dict(self._order_factors)

    @property
    def log_table(self):
        """Discrete logs base ``generator`` (index by encoding; -1 at zero).
        None when the field is above the table limit."""
        return self._log

    @property
    def exp_table(self):
        return self._exp

    def subfield_embedding(self, d):
        """Embedding of the canonical F_{p^d} into this field, cached."""
        self._check_divisor(d)
        reg = self.registry
        if reg is None:
            reg = self.registry = FieldRegistry(self.seed, max_order=self.order)
            reg._fields[(self.p, self.n)] = self
        return reg.embedding(self.p, d, self.n)

    @property
    def subfield_registry(self):
        """Embeddings keyed by divisor, for the subfields built so far."""
        if self.registry is None:
            return {}
        return {
            a: emb
            for (p, a, b), emb in self.registry._embeddings.items()
            if p == self.p and b == self.n
        }

    def __repr__(self):
        return f"FieldCtx(p={self.p}, n={self.n})"


# ---------------------------------------------------------------------------
# registry and embeddings


class FieldRegistry:
    """Cache of canonical fields and canonical one-hop embeddings.

    A registry pins (seed, max_order).  Fields are keyed by (p, n); the
    embedding for a | b is computed once and reused, so any two computations
    that route the same data through the same pair of fields agree exactly.
    """

    def __init__(self, seed=0, max_order=DEFAULT_MAX_ORDER):
        self.seed = seed
        self.max_order = max_order
        self._fields = {}
        self._embeddings = {}

    def field(self, p, n):
        key = (p, n)
        if key not in self._fields:
            self._fields[key] = FieldCtx(
                p, n, seed=self.seed, max_order=self.max_order, registry=self
            )
        return self._fields[key]

    def embedding(self, p, a, b):
        """Canonical embedding F_{p^a} -> F_{p^b} for a | b."""
        if b % a:
            raise NotADivisor(f"{a} does not divide {b}")
        key = (p, a, b)
        if key not in self._embeddings:
            src = self.field(p, a)
            dst = self.field(p, b)
            self._embeddings[key] = _build_embedding(src, dst)
        return self._embeddings[key]


def _build_embedding(src, dst):
    if src.n == dst.n:
        eye = np.eye(src.n, dtype=np.int64)
        root = src.p if src.n > 1 else 1  # image of x (or of 1 for a prime field)
        return Embedding(src, dst, root, eye, eye)
    if src.n == 1:
        mat = np.zeros((dst.n, 1), dtype=np.int64)
        mat[0, 0] = 1
        sec = np.zeros((1, dst.n), dtype=np.int64)
        sec[0, 0] = 1
        return Embedding(src, dst, 1, mat, sec)
    roots = _roots_in_field(dst, list(src.modulus))
    root = min(roots)
    cols = []
    cur = 1
    for _ in range(src.n):
        cols.append(dst.coords(cur))
        cur = dst.mul(cur, root)
    E = np.array(cols, dtype=np.int64).T % dst.p
    # left inverse: row-reduce E augmented with the identity; the pivot rows
    # of the reduced block express each source coordinate in dst coordinates
    aug = [
        list(E[i]) + [1 if j == i else 0 for j in range(dst.n)]
        for i in range(dst.n)
    ]
    rref, pivots = _rref_mod_p(aug, dst.p)
    sec = np.zeros((src.n, dst.n), dtype=np.int64)
    for r, c in enumerate(pivots):
        if c < src.n:
            sec[c] = rref[r][src.n :]
    return Embedding(src, dst, root, E, sec)


# -- root finding for subfield moduli (equal-degree splitting) ---------------


def _fpoly_trim(ctx, a):
    i = len(a)
    while i > 0 and a[i - 1] == 0:
        i -= 1
    return a[:i]


def _fpoly_divmod(ctx, a, b):
    a = list(a)
    b = _fpoly_trim(ctx, list(b))
    db = len(b) - 1
    inv_lead = ctx.inverse(b[-1])
    while True:
        a = _fpoly_trim(ctx, a)
        da = len(a) - 1
        if da < db:
            return a
        c = ctx.mul(a[-1], inv_lead)
        for j in range(db + 1):
            a[da - db + j] = ctx.sub(a[da - db + j], ctx.mul(c, b[j]))


def _fpoly_mulmod(ctx, a, b, mod):
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = ctx.add(out[i + j], ctx.mul(ai, bj))
    return _fpoly_divmod(ctx, out, mod)


def _fpoly_powmod(ctx, base, e, mod):
    result = [1]
    base = _fpoly_divmod(ctx, list(base), mod)
    while e:
        if e & 1:
            result = _fpoly_mulmod(ctx, result, base, mod)
        base = _fpoly_mulmod(ctx, base, base, mod)
        e >>= 1
    return result


def _fpoly_gcd(ctx, a, b):
    a, b = _fpoly_trim(ctx, list(a)), _fpoly_trim(ctx, list(b))
    while b:
        a, b = b, _fpoly_divmod(ctx, a, b)
    if a:
        inv = ctx.inverse(a[-1])
        a = [ctx.mul(c, inv) for c in a]
    return a


def _roots_in_field(ctx, fp_poly):
    """All roots in ctx of a squarefree F_p-polynomial that splits there."""
    h = [c % ctx.p for c in fp_poly]  # prime-field encodings embed as themselves
    work = [_fpoly_trim(ctx, h)]
    roots = []
    shift = 0
    while work:
        f = work.pop()
        if len(f) == 2:
            roots.append(ctx.mul(ctx.neg(f[0]), ctx.inverse(f[1])))
            continue
        split = None
        while split is None:
            shift += 1
            if ctx.p == 2:
                # char 2: the quadratic-character trick is unavailable; split
                # by the absolute trace of delta*X, which separates any two
                # distinct roots for some delta (the trace form is
                # nondegenerate), unlike translation by a constant
                base = [0, shift % ctx.order]
                acc = [0]
                cur = _fpoly_divmod(ctx, base, f)
                for _ in range(ctx.n):
                    acc = _fpoly_trim(ctx, [
                        ctx.add(x, y) for x, y in _pad_lists(acc, cur)
                    ])
                    cur = _fpoly_mulmod(ctx, cur, cur, f)
                s = acc
            else:
                base = [shift % ctx.order, 1]
                s = _fpoly_powmod(ctx, base, (ctx.order - 1) // 2, f)
                s = _fpoly_trim(ctx, [ctx.sub(x, y) for x, y in _pad_lists(s, [1])])
            g = _fpoly_gcd(ctx, s, f)
            if 0 < len(g) - 1 < len(f) - 1:
                split = g
        work.append(split)
        work.append(_fpoly_quotient(ctx, f, split))
    return roots


def _fpoly_quotient(ctx, a, b):
    a = list(a)
    b = _fpoly_trim(ctx, list(b))
    db = len(b) - 1
    inv_lead = ctx.inverse(b[-1])
    q = [0] * (len(a) - db)
    while True:
        a = _fpoly_trim(ctx, a)
        da = len(a) - 1
        if da < db:
            return _fpoly_trim(ctx, q)
        c = ctx.mul(a[-1], inv_lead)
        q[da - db] = c
        for j in range(db + 1):
            a[da - db + j] = ctx.sub(a[da - db + j], ctx.mul(c, b[j]))


def _pad_lists(a, b):
    m = max(len(a), len(b))
    return zip(list(a) + [0] * (m - len(a)), list(b) + [0] * (m - len(b)))


def build_field(p, n, seed=0, max_order=DEFAULT_MAX_ORDER):
    """Standalone constructor for a canonical F_{p^n} context."""
    return FieldCtx(p, n, seed=seed, max_order=max_order)
