"""Explicit constants bounding the degrees of local norm L-functions.

Every bound here counts, in one way or another, how many Frobenius
eigenvalues a norm power sum can see.  The primitive inputs are either
coarse sheaf numerics (rank, Euler characteristic, Swan conductor) or a
full unipotent-block profile of the local monodromies.  The profile
route feeds three combinatorial sums, ``formula_A``, ``formula_B`` and
``formula_M``, whose halved total ``C_bound_mult`` dominates the degree
of the r-th norm L-function on the torus.  Closed forms for the two
worked families (pushforward kernels of x -> g(x), and Kummer twists)
are provided separately so the two computations can cross-check each
other.

The tail of the module is concrete: ``critical_values`` extracts the
branch locus of a polynomial map from a field scan, and
``admissible_set`` builds the r-fold sumset or product set that a test
point must avoid for the square-root bounds to apply.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence, Union

import numpy as np

from .errors import BudgetExceeded, SplittingFieldTooLarge
from .gf import FieldCtx
from .tracefn import GroupKind, _ambient

_SCAN_BUDGET = 1 << 22
_SCAN_CHUNK = 1 << 19

__all__ = [
    "AdmissibleSet",
    "C_bound_mult",
    "MonodromyProfile",
    "SheafNumerics",
    "additive_example_bound",
    "admissible_set",
    "binom",
    "critical_values",
    "formula_A",
    "formula_B",
    "formula_M",
    "kummer_example_bound",
    "kummer_profile",
    "normexa1_bound",
    "normexa2_bound",
    "pushforward_kernel_profile",
    "swan_example_bound",
    "trex1_bound",
    "weyl_dim",
]


def binom(n: int, k: int) -> int:
    """Binomial coefficient with C(n, 0) = 1 for every n, negative included.

    The k = 0 case must not fall through to the n < k test: several closed
    forms below hit C(-1, 0) at their boundary and require the value 1.
    """
    if k < 0:
        return 0
    if k == 0:
        return 1
    if n < k:
        return 0
    return math.comb(n, k)


# -- coarse numerics -----------------------------------------------------------------


@dataclass(frozen=True)
class SheafNumerics:
    """Rank, negated Euler characteristic, Swan conductor at infinity, and
    the number of distinct finite ramification points."""

    d: int
    e: int
    c: int
    a: int = 0

    def __post_init__(self):
        if self.d < 1:
            raise ValueError("rank d must be at least 1")
        if self.e < 0 or self.c < 0 or self.a < 0:
            raise ValueError("e, c and a must be nonnegative")


def weyl_dim(n: int, r: int, i: int) -> int:
    """Dimension-type count C(n+r-i-1, r) * C(r-1, i)."""
    return binom(n + r - i - 1, r) * binom(r - 1, i)


def trex1_bound(num: SheafNumerics, r: int) -> int:
    """Degree bound from coarse numerics alone.

    Requires d + e - c >= 0; the formula sums weighted differences of
    Weyl-type dimensions over i < r and scales by 1 + c.
    """
    if r < 1:
        raise ValueError("r must be at least 1")
    d, e, c = num.d, num.e, num.c
    if d + e - c < 0:
        raise ValueError("requires d + e - c >= 0")
    total = 0
    for i in range(r):
        total += (binom(d + e - c + r - i - 1, r) - binom(e + r - i - 1, r)) * binom(
            r - 1, i
        )
    return (1 + c) * total


def additive_example_bound(d: int, r: int) -> int:
    """Degree bound for the additive-character pushforward of x -> g(x),
    deg g = d, on the affine line.  Collapses to d - 1 at r = 1."""
    if d < 2:
        raise ValueError("needs deg g >= 2")
    if r < 1:
        raise ValueError("r must be at least 1")
    return sum(binom(d + r - i - 2, r) * binom(r - 1, i) for i in range(r))


def kummer_example_bound(a: int, r: int) -> int:
    """Degree bound for a tame Kummer twist with a distinct finite branch
    points.  Equals 1 at r = 1 whatever a is."""
    if a < 1:
        raise ValueError("needs a >= 1")
    if r < 1:
        raise ValueError("r must be at least 1")
    return sum(binom(a + r - i - 2, r - 1) * binom(r - 1, i) for i in range(r))


def swan_example_bound(d: int, r: int) -> Fraction:
    """Wild-ramification variant of the additive bound, scaled by the Swan
    conductor d - 1.  Rational in general."""
    if d < 3:
        raise ValueError("needs d >= 3")
    return Fraction(additive_example_bound(d, r), d - 1)


# -- monodromy profiles --------------------------------------------------------------

_Blocks = Union[Mapping[str, Iterable], Iterable]


@dataclass(frozen=True)
class MonodromyProfile:
    """Unipotent block data of the local monodromies of a sheaf of rank n.

    ``blocks`` maps an opaque character label to the multiset of Jordan
    block sizes attached to that character: pairs (j, n_j) with j >= 1
    meaning n_j blocks of size j.  The count of size-0 slots for each
    character is derived, n_0 = n - sum_j n_j, and must stay nonnegative.
    Characters absent from the map carry no blocks and never contribute.
    """

    n: int
    blocks: tuple = field(default=())

    def __init__(self, n: int, blocks: _Blocks = ()):
        if n < 0:
            raise ValueError("n must be nonnegative")
        items = blocks.items() if isinstance(blocks, Mapping) else blocks
        normalized = []
        for label, pairs in items:
            merged = {}
            for j, mult in pairs:
                j = int(j)
                mult = int(mult)
                if j < 1:
                    raise ValueError("block sizes must be at least 1")
                if mult < 0:
                    raise ValueError("block multiplicities must be nonnegative")
                if mult:
                    merged[j] = merged.get(j, 0) + mult
            if not merged:
                continue
            if sum(merged.values()) > n:
                raise ValueError(
                    f"character {label!r} has more blocks than the rank allows"
                )
            normalized.append((str(label), tuple(sorted(merged.items()))))
        normalized.sort()
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "blocks", tuple(normalized))

    def slot_counts(self, label: str) -> dict:
        """Block counts by size for one character, including the derived
        size-0 slot count when positive."""
        merged = dict(dict(self.blocks)[label])
        extra = self.n - sum(merged.values())
        if extra > 0:
            merged[0] = extra
        return merged


def pushforward_kernel_profile(d: int) -> MonodromyProfile:
    """Profile of the rank d-1 kernel sheaf of the norm map x -> x^d style
    pushforward: the trivial character carries d-1 size-1 blocks, and each
    of the d-1 nontrivial characters killed by d carries one."""
    if d < 2:
        raise ValueError("needs d >= 2")
    blocks = {"1": [(1, d - 1)]}
    for k in range(1, d):
        blocks[f"chi{k}"] = [(1, 1)]
    return MonodromyProfile(n=d - 1, blocks=blocks)


def kummer_profile(a: int, same_char: bool) -> MonodromyProfile:
    """Profile of a tame Kummer twist with a distinct finite branch points.

    The two local monodromies are scalar characters; when they differ the
    profile carries one size-1 block on each, when they coincide a single
    character carries both."""
    if a < 1:
        raise ValueError("needs a >= 1")
    if same_char:
        if a < 2:
            raise ValueError("coincident characters force a >= 2")
        return MonodromyProfile(n=a, blocks={"eta": [(1, 2)]})
    return MonodromyProfile(n=a, blocks={"chi_e": [(1, 1)], "chi_d": [(1, 1)]})


def _compositions(total: int, slots: int):
    if slots == 0:
        if total == 0:
            yield ()
        return
    for head in range(total + 1):
        for tail in _compositions(total - head, slots - 1):
            yield (head,) + tail


def _profile_sum(profile: MonodromyProfile, r: int, stars: bool) -> int:
    # Common core of formulas A and B: sum over characters and over weak
    # compositions (i_j) of r across that character's slot sizes, of the
    # product of per-size choice counts weighted by sum_j j*i_j.  ``stars``
    # selects multichoose C(n_j + i_j - 1, i_j) instead of plain C(n_j, i_j).
    if r < 0:
        raise ValueError("r must be nonnegative")
    total = 0
    for label, _ in profile.blocks:
        slots = profile.slot_counts(label)
        sizes = sorted(slots)
        for comp in _compositions(r, len(sizes)):
            weight = sum(j * i for j, i in zip(sizes, comp))
            if weight == 0:
                continue
            term = weight
            for j, i in zip(sizes, comp):
                n_j = slots[j]
                term *= binom(n_j + i - 1, i) if stars else binom(n_j, i)
                if term == 0:
                    break
            total += term
    return total


def formula_A(profile: MonodromyProfile, r: int) -> int:
    """Weighted multichoose count over the profile; vanishes at r = 0."""
    return _profile_sum(profile, r, stars=True)


def formula_B(profile: MonodromyProfile, i: int) -> int:
    """Weighted plain-choose count over the profile; vanishes at i = 0."""
    return _profile_sum(profile, i, stars=False)


def formula_M(profile: MonodromyProfile, r: int, i: int) -> int:
    """Mixed term A_{r-i} * C(n, i) + B_i * C(n-1+r-i, r-i)."""
    if not 0 <= i <= r:
        raise ValueError("need 0 <= i <= r")
    n = profile.n
    return formula_A(profile, r - i) * binom(n, i) + formula_B(profile, i) * binom(
        n - 1 + r - i, r - i
    )


def C_bound_mult(profile: MonodromyProfile, r: int) -> Fraction:
    """Half the sum of the mixed terms: the degree bound for the r-th norm
    L-function attached to a sheaf with this profile."""
    if r < 0:
        raise ValueError("r must be nonnegative")
    return Fraction(sum(formula_M(profile, r, i) for i in range(r + 1)), 2)


def normexa1_bound(d: int, r: int) -> Fraction:
    """Closed form of C_bound_mult for the pushforward kernel profile."""
    if d < 2:
        raise ValueError("needs d >= 2")
    if r < 0:
        raise ValueError("r must be nonnegative")
    total = 0
    for i in range(r + 1):
        inner = sum(
            binom(d - 3 + j, j) * (r - i - j) for j in range(r - i)
        )
        total += binom(d - 1, i) * (
            (r + i) * binom(d - 2 + r - i, r - i) + (d - 1) * inner
        )
    return Fraction(total, 2)


def normexa2_bound(a: int, r: int, same_char: bool) -> Fraction:
    """Closed form of C_bound_mult for the Kummer profiles, in the two
    branches according to whether the local characters coincide."""
    if a < 1:
        raise ValueError("needs a >= 1")
    if r < 0:
        raise ValueError("r must be nonnegative")
    total = 0
    if same_char:
        for i in range(r + 1):
            inner = sum(
                binom(a + j - 3, j) * (r + 1 - i - j) * (r - i - j)
                for j in range(r - i)
            )
            total += 2 * binom(a - 1 + r - i, r - i) * binom(a - 1, i - 1) + binom(
                a, i
            ) * inner
    else:
        for i in range(r + 1):
            inner = sum(binom(a + j - 2, j) * (r - i - j) for j in range(r - i))
            total += 2 * (
                binom(a - 1 + r - i, r - i) * binom(a - 1, i - 1)
                + binom(a, i) * inner
            )
    return Fraction(total, 2)


# -- branch loci and admissible test points ------------------------------------------


def _trimmed(coeffs) -> list:
    out = [int(c) for c in coeffs]
    while out and out[-1] == 0:
        out.pop()
    return out


def _divide_linear(K: FieldCtx, coeffs: Sequence, x0: int):
    # Synthetic division by (x - x0); coefficients ascending, encodings.
    acc = 0
    table = []
    for c in reversed(coeffs):
        acc = K.add(K.mul(acc, x0), c)
        table.append(acc)
    rem = table.pop()
    return list(reversed(table)), rem


def _roots_in_field(K: FieldCtx, coeffs: Sequence) -> list:
    if K.order > _SCAN_BUDGET:
        raise BudgetExceeded(
            f"root scan over {K.order} elements exceeds the budget {_SCAN_BUDGET}"
        )
    roots = []
    for lo in range(0, K.order, _SCAN_CHUNK):
        block = np.arange(lo, min(lo + _SCAN_CHUNK, K.order), dtype=np.int64)
        values = K.beval_poly(list(coeffs), K.bdecode(block))
        hit = ~values.any(axis=1)
        roots.extend(int(u) for u in block[hit])
    return roots


def critical_values(g: Sequence, ctx: FieldCtx) -> set:
    """Values of g at the zeros of its derivative, as a set of encodings.

    ``ctx`` must contain every zero of g'; if the derivative does not split
    completely over ctx the computation raises SplittingFieldTooLarge
    rather than silently returning a partial set.  Requires deg g >= 2 and
    deg g prime to the characteristic, so the derivative keeps full degree.
    """
    coeffs = _trimmed(g)
    deg = len(coeffs) - 1
    if deg < 2:
        raise ValueError("needs deg g >= 2")
    if math.gcd(deg, ctx.p) != 1:
        raise ValueError("deg g must be prime to the characteristic")
    deriv = _trimmed(ctx.mul(coeffs[k], k % ctx.p) for k in range(1, len(coeffs)))
    roots = _roots_in_field(ctx, deriv)
    remainder = list(deriv)
    for x0 in roots:
        while len(remainder) > 1:
            quotient, r0 = _divide_linear(ctx, remainder, x0)
            if r0 != 0:
                break
            remainder = quotient
    if len(remainder) > 1:
        raise SplittingFieldTooLarge(
            "the derivative has zeros outside the given field"
        )
    return {ctx.poly_eval(coeffs, x0) for x0 in roots}


@dataclass(frozen=True)
class AdmissibleSet:
    """r-fold sumset or product set of a finite set, with its complement
    read as the admissible test points."""

    forbidden: frozenset
    r: int
    kind: GroupKind
    field: FieldCtx

    def is_admissible(self, t: int) -> bool:
        return int(t) not in self.forbidden


def admissible_set(
    S: Iterable, r: int, kind: GroupKind, ctx: FieldCtx, m: int = 1
) -> AdmissibleSet:
    """Fold S with itself r times under the group law and wrap the result.

    S consists of encodings in ctx; the fold happens inside the degree
    ctx.n * m extension, into which S is carried along the canonical
    subfield embedding.  An empty S forbids nothing.
    """
    if r < 1:
        raise ValueError("r must be at least 1")
    if m < 1:
        raise ValueError("m must be at least 1")
    if not isinstance(kind, GroupKind):
        raise TypeError("kind must be a GroupKind")
    K = _ambient(ctx, ctx.n * m)
    emb = K.subfield_embedding(ctx.n)
    points = frozenset(int(emb.embed(int(s))) for s in S)
    op = K.add if kind is GroupKind.Additive else K.mul
    folded = points
    for _ in range(r - 1):
        folded = frozenset(op(x, s) for x in folded for s in points)
    return AdmissibleSet(forbidden=folded, r=r, kind=kind, field=K)
