"""The dictionary of trace functions: expressions over a base field k = F_{p^m0}
whose leaves are the concrete objects the rest of the library sums over.

An expression denotes a function f(k_m, t) of a finite extension k_m / k and a
point t in k_m.  Expressions are immutable trees; ``evaluate`` gives one exact
cyclotomic value, and ``compile_expr`` + ``eval_points_sum`` stream the same
values over large batches of points without leaving integer arithmetic until
the very end.

Compilation flattens the tree into monomials: each monomial carries a rational
coefficient, scalar twist factors raised to the relative degree, and a product
of atoms.  An atom contributes either an integer factor (point counts, point
indicators, vanishing masks) or an exponent of a fixed root of unity; per point
the exponents are merged at one conductor, so a whole batch reduces to an
integer histogram per monomial.

Field data of different degrees is realized inside the evaluation field
through canonical subfield identifications corrected by a Frobenius offset, so
that every identification restricts to one and the same embedding of the base
field.  Without that correction two identifications could disagree on k by an
arbitrary Frobenius twist, which would silently break the exact identities
between sums over different extensions.  The offset leaves quotient characters
acting through their canonical sections, at the price of conjugating each
character by the matching power of p.
"""

import math
import re
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

import numpy as np

from .characters import AdditiveCharacter, MultiplicativeCharacter
from .cyclotomic import CycNumber
from .errors import DomainViolation, FieldMismatch
from .gf import FieldRegistry
from .rootcount import count_roots

CHUNK = 1 << 17


class GroupKind(Enum):
    """The ambient group of a sum: the affine line or the torus."""

    Additive = "additive"
    Multiplicative = "multiplicative"


# -- expression tree ----------------------------------------------------------


@dataclass(frozen=True)
class Constant:
    """The function that is 1 everywhere."""


@dataclass(frozen=True)
class TwistDeg:
    """(k_m, t) -> alpha^m, with a declared weight for bookkeeping."""

    alpha: object
    weight: int = 0


@dataclass(frozen=True)
class ArtinSchreier:
    """(k_m, t) -> psi(Tr_{k_m/k}(g(t)))."""

    psi: AdditiveCharacter
    g: tuple

    def __post_init__(self):
        object.__setattr__(self, "g", tuple(int(c) for c in self.g))


@dataclass(frozen=True)
class Kummer:
    """(k_m, t) -> chi(N_{k_m/k}(g(t))) where g(t) != 0, and 0 at zeros of g."""

    chi: MultiplicativeCharacter
    g: tuple

    def __post_init__(self):
        object.__setattr__(self, "g", tuple(int(c) for c in self.g))


@dataclass(frozen=True)
class PushforwardCount:
    """(k_m, t) -> #{x in k_m : g(x) = t}."""

    g: tuple

    def __post_init__(self):
        object.__setattr__(self, "g", tuple(int(c) for c in self.g))


@dataclass(frozen=True)
class PushforwardKernel:
    """PushforwardCount(g) - 1, the complement of the constant summand."""

    g: tuple

    def __post_init__(self):
        object.__setattr__(self, "g", tuple(int(c) for c in self.g))


@dataclass(frozen=True)
class Punctual:
    """alpha^m at the one chosen realization of a point of degree d over k.

    ``a`` is an encoding in F_{p^(d*m0)}.  The value is alpha^m when t equals
    the canonical realization of a (zero at its other conjugates); proper
    conjugates are reachable as further Punctual leaves.
    """

    a: int
    d: int
    alpha: object = 1


@dataclass(frozen=True)
class InducedKummer:
    """(k_m, t) -> sum of the d conjugate characters at N_{k_m/k_d}(t) when
    d | m, and 0 otherwise.  Lives on the torus only."""

    d: int
    chi: MultiplicativeCharacter


@dataclass(frozen=True)
class Shift:
    """Pointwise negation."""

    expr: object


@dataclass(frozen=True)
class Sum:
    exprs: tuple

    def __post_init__(self):
        object.__setattr__(self, "exprs", tuple(self.exprs))


@dataclass(frozen=True)
class Product:
    exprs: tuple

    def __post_init__(self):
        object.__setattr__(self, "exprs", tuple(self.exprs))


# -- integrality --------------------------------------------------------------


def _is_integer_scalar(alpha):
    if isinstance(alpha, CycNumber):
        return alpha.is_rational() and alpha.as_fraction().denominator == 1
    return Fraction(alpha).denominator == 1


def is_integral(expr):
    """True when every value of the expression is a rational integer."""
    if isinstance(expr, Constant):
        return True
    if isinstance(expr, TwistDeg):
        return _is_integer_scalar(expr.alpha)
    if isinstance(expr, ArtinSchreier):
        return expr.psi.is_trivial or expr.psi.p == 2
    if isinstance(expr, Kummer):
        return expr.chi.order <= 2
    if isinstance(expr, (PushforwardCount, PushforwardKernel)):
        return True
    if isinstance(expr, Punctual):
        return _is_integer_scalar(expr.alpha)
    if isinstance(expr, InducedKummer):
        return expr.chi.order <= 2
    if isinstance(expr, Shift):
        return is_integral(expr.expr)
    if isinstance(expr, (Sum, Product)):
        return all(is_integral(e) for e in expr.exprs)
    raise TypeError(f"not a dictionary expression: {expr!r}")


def on_torus(expr):
    """True when the expression is defined on the torus only."""
    if isinstance(expr, InducedKummer):
        return True
    if isinstance(expr, Shift):
        return on_torus(expr.expr)
    if isinstance(expr, (Sum, Product)):
        return any(on_torus(e) for e in expr.exprs)
    return False


# -- compilation --------------------------------------------------------------


@dataclass(frozen=True)
class PsiAtom:
    psi: AdditiveCharacter
    g: tuple


@dataclass(frozen=True)
class ChiAtom:
    chi: MultiplicativeCharacter
    g: object  # coefficient tuple, or None for the identity map


@dataclass(frozen=True)
class CountAtom:
    g: tuple
    minus_one: bool


@dataclass(frozen=True)
class PointAtom:
    a: int
    d_abs: int


@dataclass(frozen=True)
class Monomial:
    coeff: Fraction
    alphas: tuple
    atoms: tuple
    d_data: int  # evaluation degrees must be multiples of this
    modulus: int  # all exponents merge at this conductor


class CompiledExpr:
    """Monomial form of an expression over a fixed base field."""

    __slots__ = ("p", "m0", "monomials", "has_multiplicative_domain")

    def __init__(self, p, m0, monomials, has_multiplicative_domain):
        self.p = p
        self.m0 = m0
        self.monomials = monomials
        self.has_multiplicative_domain = has_multiplicative_domain


def _check_poly(g, p, m0):
    limit = p**m0
    g = tuple(int(c) for c in g)
    for c in g:
        if not 0 <= c < limit:
            raise FieldMismatch(f"coefficient {c} is not an F_{p}^{m0} encoding")
    return g


def _lower(expr, p, m0):
    """List of (coeff, alphas, atoms) triples whose sum is the expression."""
    if isinstance(expr, Constant):
        return [(Fraction(1), (), ())]
    if isinstance(expr, TwistDeg):
        return [(Fraction(1), (expr.alpha,), ())]
    if isinstance(expr, ArtinSchreier):
        psi = expr.psi
        if psi.p != p or psi.m0 != m0:
            raise FieldMismatch(
                f"psi over {psi.p}^{psi.m0} inside an expression over {p}^{m0}"
            )
        g = _check_poly(expr.g, p, m0)
        if psi.is_trivial:
            return [(Fraction(1), (), ())]
        return [(Fraction(1), (), (PsiAtom(psi, g),))]
    if isinstance(expr, Kummer):
        chi = expr.chi
        if chi.p != p or chi.d0 != m0:
            raise FieldMismatch(
                f"chi over {chi.p}^{chi.d0} inside an expression over {p}^{m0}"
            )
        g = _check_poly(expr.g, p, m0)
        return [(Fraction(1), (), (ChiAtom(chi, g),))]
    if isinstance(expr, PushforwardCount):
        return [(Fraction(1), (), (CountAtom(_check_poly(expr.g, p, m0), False),))]
    if isinstance(expr, PushforwardKernel):
        return [(Fraction(1), (), (CountAtom(_check_poly(expr.g, p, m0), True),))]
    if isinstance(expr, Punctual):
        if expr.d < 1:
            raise ValueError("point degree must be positive")
        d_abs = expr.d * m0
        if not 0 <= expr.a < p**d_abs:
            raise FieldMismatch(
                f"point encoding {expr.a} is not an F_{p}^{d_abs} encoding"
            )
        alphas = () if expr.alpha == 1 else (expr.alpha,)
        return [(Fraction(1), alphas, (PointAtom(expr.a, d_abs),))]
    if isinstance(expr, InducedKummer):
        if expr.d < 1:
            raise ValueError("induction degree must be positive")
        chi = expr.chi
        if chi.p != p or chi.d0 != expr.d * m0:
            raise FieldMismatch(
                f"induced character must live on the degree-{expr.d} extension "
                f"of F_{p}^{m0}"
            )
        q = p**m0
        return [
            (Fraction(1), (), (ChiAtom(chi.power(q**i), None),))
            for i in range(expr.d)
        ]
    if isinstance(expr, Shift):
        return [(-c, al, at) for c, al, at in _lower(expr.expr, p, m0)]
    if isinstance(expr, Sum):
        out = []
        for e in expr.exprs:
            out.extend(_lower(e, p, m0))
        return out
    if isinstance(expr, Product):
        acc = [(Fraction(1), (), ())]
        for e in expr.exprs:
            acc = [
                (c1 * c2, al1 + al2, at1 + at2)
                for c1, al1, at1 in acc
                for c2, al2, at2 in _lower(e, p, m0)
            ]
        return acc
    raise TypeError(f"not a dictionary expression: {expr!r}")


def _atom_modulus(atom):
    if isinstance(atom, PsiAtom):
        return atom.psi.p
    if isinstance(atom, ChiAtom):
        return atom.chi.order
    return 1


def compile_expr(expr, p, m0):
    """Flatten an expression over F_{p^m0} into monomial form."""
    monomials = []
    for coeff, alphas, atoms in _lower(expr, p, m0):
        d_data = m0
        modulus = 1
        for atom in atoms:
            modulus = math.lcm(modulus, _atom_modulus(atom))
            if isinstance(atom, ChiAtom):
                d_data = math.lcm(d_data, atom.chi.d0)
            elif isinstance(atom, PointAtom):
                d_data = math.lcm(d_data, atom.d_abs)
        monomials.append(Monomial(coeff, alphas, atoms, d_data, modulus))
    return CompiledExpr(p, m0, tuple(monomials), on_torus(expr))


# -- realization in an evaluation field ----------------------------------------


def _anchor_twists(K, m0, degrees):
    """Frobenius offsets j(d) making Frob^j o (canonical F_{p^d} -> K)
    restrict to the canonical base embedding on F_{p^m0}.

    Both identifications send the base generator to a conjugate of the same
    element, so some offset below m0 always works.
    """
    out = {}
    if not degrees:
        return out
    base_emb = K.subfield_embedding(m0)
    g0 = base_emb.src.generator
    target = base_emb.embed(g0)
    for d in degrees:
        emb_d = K.subfield_embedding(d)
        x = emb_d.embed(emb_d.src.subfield_embedding(m0).embed(g0))
        j = 0
        while x != target:
            x = K.frobenius(x)
            j += 1
            if j >= m0:  # pragma: no cover - the orbit has exactly m0 points
                raise RuntimeError("subfield anchoring failed")
        out[d] = j
    return out


class _RPsi:
    __slots__ = ("psi", "g_up", "modulus")

    def __init__(self, psi, g_up):
        self.psi = psi
        self.g_up = g_up
        self.modulus = psi.p

    def chunk(self, K, U, X):
        return None, self.psi.bulk_exponents(K, K.beval_poly(self.g_up, X))


class _RChi:
    __slots__ = ("chi", "g_up", "modulus")

    def __init__(self, chi, g_up):
        self.chi = chi
        self.g_up = g_up
        self.modulus = chi.order

    def chunk(self, K, U, X):
        y = X if self.g_up is None else K.beval_poly(self.g_up, X)
        mask = y.any(axis=1).astype(np.int64)  # extension by zero
        return mask, self.chi.bulk_exponents(K, y)


class _RCount:
    __slots__ = ("g_up", "minus_one", "modulus")

    def __init__(self, g_up, minus_one):
        self.g_up = g_up
        self.minus_one = minus_one
        self.modulus = 1

    def chunk(self, K, U, X):
        counts = count_roots(K, self.g_up, U)
        return (counts - 1 if self.minus_one else counts), None


class _RPoint:
    __slots__ = ("image", "modulus")

    def __init__(self, image):
        self.image = image
        self.modulus = 1

    def chunk(self, K, U, X):
        return (U == self.image).astype(np.int64), None


class _RMono:
    __slots__ = ("scalar", "modulus", "atoms", "hist", "acc")

    def __init__(self, scalar, modulus, atoms):
        self.scalar = scalar
        self.modulus = modulus
        self.atoms = atoms
        self.hist = np.zeros(modulus, dtype=np.int64) if modulus > 1 else None
        self.acc = 0

    def value(self):
        z = (
            CycNumber.from_exponent_histogram(self.modulus, self.hist)
            if self.modulus > 1
            else CycNumber.from_rational(self.acc)
        )
        return self.scalar * z


def _scalar_power(alpha, k):
    if isinstance(alpha, CycNumber):
        return alpha**k
    return Fraction(alpha) ** k


def _realize(compiled, K):
    """Bind a compiled expression to one evaluation field."""
    if K.p != compiled.p or K.n % compiled.m0:
        raise FieldMismatch(
            f"expression over {compiled.p}^{compiled.m0} cannot be evaluated "
            f"on F_{K.p}^{K.n}"
        )
    E = K.n
    m_rel = E // compiled.m0
    active = [mo for mo in compiled.monomials if E % mo.d_data == 0]
    if not active:
        return []
    need = set()
    for mo in active:
        for atom in mo.atoms:
            if isinstance(atom, ChiAtom):
                need.add(atom.chi.d0)
            elif isinstance(atom, PointAtom):
                need.add(atom.d_abs)
    anchors = _anchor_twists(K, compiled.m0, sorted(need))
    emb0 = K.subfield_embedding(compiled.m0)
    lift = lambda g: [emb0.embed(c) for c in g]
    out = []
    for mo in active:
        atoms = []
        for atom in mo.atoms:
            if isinstance(atom, PsiAtom):
                atoms.append(_RPsi(atom.psi, lift(atom.g)))
            elif isinstance(atom, ChiAtom):
                d0 = atom.chi.d0
                k = (d0 - anchors[d0]) % d0
                chi = atom.chi.power(compiled.p**k) if k else atom.chi
                atoms.append(_RChi(chi, None if atom.g is None else lift(atom.g)))
            elif isinstance(atom, CountAtom):
                atoms.append(_RCount(lift(atom.g), atom.minus_one))
            else:
                img = K.subfield_embedding(atom.d_abs).embed(atom.a)
                j = anchors[atom.d_abs]
                atoms.append(_RPoint(K.frobenius(img, j) if j else img))
        scalar = mo.coeff
        for alpha in mo.alphas:
            scalar = scalar * _scalar_power(alpha, m_rel)
        out.append(_RMono(scalar, mo.modulus, tuple(atoms)))
    return out


# -- evaluation ----------------------------------------------------------------


def eval_points_sum(compiled, K, U):
    """Exact sum of the expression's values over the encodings in U."""
    U = np.asarray(U, dtype=np.int64)
    if compiled.has_multiplicative_domain and U.size and not U.all():
        raise DomainViolation(
            "the expression lives on the torus; u = 0 is outside its domain"
        )
    realized = _realize(compiled, K)
    if realized and U.size:
        for lo in range(0, U.shape[0], CHUNK):
            u = U[lo : lo + CHUNK]
            X = K.bdecode(u)
            for mono in realized:
                ints = np.ones(u.shape[0], dtype=np.int64)
                exps = None if mono.modulus == 1 else np.zeros(
                    u.shape[0], dtype=np.int64
                )
                for atom in mono.atoms:
                    factor, e = atom.chunk(K, u, X)
                    if factor is not None:
                        ints *= factor
                    if e is not None and exps is not None:
                        exps += e * (mono.modulus // atom.modulus)
                if exps is None:
                    mono.acc += int(ints.sum())
                else:
                    np.add.at(mono.hist, exps % mono.modulus, ints)
    total = CycNumber.from_rational(0)
    for mono in realized:
        total = total + mono.value()
    return total


def _ambient(ctx, n_abs):
    reg = ctx.registry
    if reg is None:
        reg = FieldRegistry(ctx.seed)
        reg._fields[(ctx.p, ctx.n)] = ctx
        ctx.registry = reg
    return reg.field(ctx.p, n_abs)


def evaluate(expr, ctx, m, t):
    """The dictionary value f(k_m, t), exact.

    ``ctx`` is the base field k; ``t`` is an encoding in the canonical field
    of degree m over it.
    """
    if m < 1:
        raise ValueError("degree multiple must be positive")
    compiled = compile_expr(expr, ctx.p, ctx.n)
    K = _ambient(ctx, ctx.n * m)
    if not 0 <= t < K.order:
        raise FieldMismatch(f"encoding {t} is not an F_{K.p}^{K.n} encoding")
    if compiled.has_multiplicative_domain and t == 0:
        raise DomainViolation(
            "the expression lives on the torus; t = 0 is outside its domain"
        )
    return eval_points_sum(compiled, K, np.array([t], dtype=np.int64))


# -- literals -------------------------------------------------------------------

_ZETA_RE = re.compile(r"^(-?)z(\d+)\^(\d+)$")
_PSI_ARG_RE = re.compile(r"^a=(\d+)(?:@(\d+)\^(\d+))?$")
_CHI_ARG_RE = re.compile(r"^e=(\d+)(?:@(\d+)\^(\d+))?$")
_POINT_ARG_RE = re.compile(r"^a=(\d+)@(\d+)$")
_INT_RE = re.compile(r"^-?\d+$")


def _parse_scalar(tok):
    m = _ZETA_RE.match(tok)
    if m:
        z = CycNumber.zeta(int(m.group(2)), int(m.group(3)))
        return -z if m.group(1) else z
    try:
        return Fraction(tok)
    except (ValueError, ZeroDivisionError):
        raise ValueError(f"unreadable scalar literal {tok!r}") from None


def _format_scalar(alpha):
    if isinstance(alpha, CycNumber):
        if alpha.is_rational():
            return str(alpha.as_fraction())
        hot = [(k, c) for k, c in enumerate(alpha.coords) if c]
        if len(hot) == 1 and abs(hot[0][1]) == 1:
            k, c = hot[0]
            return f"{'-' if c < 0 else ''}z{alpha.conductor}^{k}"
        raise ValueError("twist scalar has no literal form")
    return str(Fraction(alpha))


def _neg_encoding(c, p, m0):
    """Additive inverse of an encoding, digit by digit."""
    digits = []
    rem = c
    for _ in range(m0):
        digits.append((-(rem % p)) % p)
        rem //= p
    if rem:
        raise ValueError(f"encoding {c} is too large for F_{p}^{m0}")
    out = 0
    for d in reversed(digits):
        out = out * p + d
    return out


def _tokenize(text):
    toks = re.findall(r"\(|\)|[^\s()]+", text)
    if not toks:
        raise ValueError("empty expression")
    return toks


class _Cursor:
    def __init__(self, toks):
        self.toks = toks
        self.pos = 0

    def peek(self):
        return self.toks[self.pos] if self.pos < len(self.toks) else None

    def next(self):
        tok = self.peek()
        if tok is None:
            raise ValueError("unbalanced expression: unexpected end of input")
        self.pos += 1
        return tok

    def expect(self, tok):
        got = self.next()
        if got != tok:
            raise ValueError(f"expected {tok!r}, found {got!r}")


def _parse_list(cur):
    cur.expect("(")
    head = cur.next()
    if head in ("(", ")"):
        raise ValueError("expected a form name after '('")
    args = []
    while True:
        tok = cur.peek()
        if tok is None:
            raise ValueError("unbalanced expression: missing ')'")
        if tok == ")":
            cur.next()
            return head, args
        if tok == "(":
            args.append(_parse_list(cur))
        else:
            args.append(cur.next())


def _as_atom(arg, what):
    if not isinstance(arg, str):
        raise ValueError(f"expected {what}, found a subform")
    return arg


def _as_form(arg, what):
    if isinstance(arg, str):
        raise ValueError(f"expected {what}, found {arg!r}")
    return arg


def _build_psi(form, p, m0):
    head, args = form
    if head != "psi" or len(args) != 1:
        raise ValueError("additive character form must be (psi a=...)")
    m = _PSI_ARG_RE.match(_as_atom(args[0], "a=..."))
    if not m:
        raise ValueError(f"malformed additive character argument {args[0]!r}")
    a = int(m.group(1))
    if m.group(2) is not None:
        p, m0 = int(m.group(2)), int(m.group(3))
    if p is None or m0 is None:
        raise ValueError("additive character names no base field and none is bound")
    return AdditiveCharacter(p=p, m0=m0, a=a)


def _build_chi(form, p, d0):
    head, args = form
    if head != "chi" or len(args) != 1:
        raise ValueError("multiplicative character form must be (chi e=...)")
    m = _CHI_ARG_RE.match(_as_atom(args[0], "e=..."))
    if not m:
        raise ValueError(f"malformed multiplicative character argument {args[0]!r}")
    e = int(m.group(1))
    if m.group(2) is not None:
        p, d0 = int(m.group(2)), int(m.group(3))
    if p is None or d0 is None:
        raise ValueError(
            "multiplicative character names no base field and none is bound"
        )
    return MultiplicativeCharacter(p=p, d0=d0, e=e)


def _build_poly(form, p, m0):
    head, args = form
    if head != "poly":
        raise ValueError(f"expected a (poly ...) form, found ({head} ...)")
    out = []
    for tok in args:
        tok = _as_atom(tok, "a coefficient")
        if not _INT_RE.match(tok):
            raise ValueError(f"unreadable coefficient {tok!r}")
        c = int(tok)
        if c < 0:
            if p is None or m0 is None:
                raise ValueError(
                    f"negative coefficient {c} needs a bound base field"
                )
            c = _neg_encoding(-c, p, m0)
        out.append(c)
    return tuple(out)


def _build_expr(form, p, m0):
    head, args = form
    if head == "const":
        if args:
            raise ValueError("(const) takes no arguments")
        return Constant()
    if head == "twist":
        if len(args) != 2:
            raise ValueError("(twist ...) takes a scalar and a weight")
        alpha = _parse_scalar(_as_atom(args[0], "a scalar"))
        w = _as_atom(args[1], "a weight")
        if not _INT_RE.match(w):
            raise ValueError(f"unreadable weight {w!r}")
        return TwistDeg(alpha, int(w))
    if head == "artin-schreier":
        if len(args) != 2:
            raise ValueError("(artin-schreier ...) takes a character and a polynomial")
        psi = _build_psi(_as_form(args[0], "a (psi ...) form"), p, m0)
        g = _build_poly(_as_form(args[1], "a (poly ...) form"), psi.p, psi.m0)
        return ArtinSchreier(psi, g)
    if head == "kummer":
        if len(args) != 2:
            raise ValueError("(kummer ...) takes a character and a polynomial")
        chi = _build_chi(_as_form(args[0], "a (chi ...) form"), p, m0)
        g = _build_poly(_as_form(args[1], "a (poly ...) form"), chi.p, chi.d0)
        return Kummer(chi, g)
    if head in ("count", "kernel"):
        if len(args) != 1:
            raise ValueError(f"({head} ...) takes one polynomial")
        g = _build_poly(_as_form(args[0], "a (poly ...) form"), p, m0)
        return PushforwardCount(g) if head == "count" else PushforwardKernel(g)
    if head == "punctual":
        if len(args) not in (1, 2):
            raise ValueError("(punctual ...) takes a point and an optional scalar")
        m = _POINT_ARG_RE.match(_as_atom(args[0], "a=...@d"))
        if not m:
            raise ValueError(f"malformed point argument {args[0]!r}")
        alpha = (
            _parse_scalar(_as_atom(args[1], "a scalar"))
            if len(args) == 2
            else Fraction(1)
        )
        return Punctual(int(m.group(1)), int(m.group(2)), alpha)
    if head == "induced-kummer":
        if len(args) != 2:
            raise ValueError("(induced-kummer ...) takes d=... and a character")
        dm = re.match(r"^d=(\d+)$", _as_atom(args[0], "d=..."))
        if not dm:
            raise ValueError(f"malformed induction degree {args[0]!r}")
        d = int(dm.group(1))
        chi = _build_chi(
            _as_form(args[1], "a (chi ...) form"),
            p,
            None if m0 is None else d * m0,
        )
        return InducedKummer(d, chi)
    if head == "shift":
        if len(args) != 1:
            raise ValueError("(shift ...) takes one expression")
        return Shift(_build_expr(_as_form(args[0], "an expression"), p, m0))
    if head in ("sum", "product"):
        if not args:
            raise ValueError(f"({head} ...) needs at least one expression")
        parts = tuple(
            _build_expr(_as_form(a, "an expression"), p, m0) for a in args
        )
        return Sum(parts) if head == "sum" else Product(parts)
    raise ValueError(f"unknown expression form ({head} ...)")


def parse_expr(text, p=None, m0=None):
    """Parse an s-expression literal.

    Characters may carry their base field inline (``(psi a=1@7^1)``); without
    the suffix the field comes from the ``p``/``m0`` keywords.  Negative
    polynomial coefficients denote additive inverses in the base field.
    """
    cur = _Cursor(_tokenize(text))
    if cur.peek() != "(":
        raise ValueError("an expression starts with '('")
    form = _parse_list(cur)
    if cur.peek() is not None:
        raise ValueError(f"trailing input after expression: {cur.peek()!r}")
    return _build_expr(form, p, m0)


def _format_poly(g):
    return "(poly" + "".join(f" {c}" for c in g) + ")"


def format_expr(expr):
    """Literal form of an expression; parse_expr inverts it with no context."""
    if isinstance(expr, Constant):
        return "(const)"
    if isinstance(expr, TwistDeg):
        return f"(twist {_format_scalar(expr.alpha)} {expr.weight})"
    if isinstance(expr, ArtinSchreier):
        psi = expr.psi
        return (
            f"(artin-schreier (psi a={psi.a}@{psi.p}^{psi.m0}) "
            f"{_format_poly(expr.g)})"
        )
    if isinstance(expr, Kummer):
        chi = expr.chi
        return f"(kummer (chi e={chi.e}@{chi.p}^{chi.d0}) {_format_poly(expr.g)})"
    if isinstance(expr, PushforwardCount):
        return f"(count {_format_poly(expr.g)})"
    if isinstance(expr, PushforwardKernel):
        return f"(kernel {_format_poly(expr.g)})"
    if isinstance(expr, Punctual):
        tail = "" if expr.alpha == 1 else f" {_format_scalar(expr.alpha)}"
        return f"(punctual a={expr.a}@{expr.d}{tail})"
    if isinstance(expr, InducedKummer):
        chi = expr.chi
        return (
            f"(induced-kummer d={expr.d} (chi e={chi.e}@{chi.p}^{chi.d0}))"
        )
    if isinstance(expr, Shift):
        return f"(shift {format_expr(expr.expr)})"
    if isinstance(expr, Sum):
        return "(sum " + " ".join(format_expr(e) for e in expr.exprs) + ")"
    if isinstance(expr, Product):
        return "(product " + " ".join(format_expr(e) for e in expr.exprs) + ")"
    raise TypeError(f"not a dictionary expression: {expr!r}")
