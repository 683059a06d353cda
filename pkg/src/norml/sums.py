"""Norm and trace power sums.

For an expression f over k = F_{p^m0}, the r-th norm power at (k_m, t) is

    f^{N,r}(k_m, t) = sum of f(k_{mr}, u) over u with N_{k_{mr}/k_m}(u) = t,

and the trace power replaces the norm condition by a trace condition.  The
sequence s -> f^{N,r}(k_{ms}, t) is the coefficient stream of the local
L-function at t, which downstream fitting turns into a rational function.

Everything is exact: fibers are materialized as cosets (never by scanning the
big field), values stream through the compiled monomial pipeline, and the only
full-field scan lives in ``brute_force_oracle``.
"""

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from .cyclotomic import CycNumber
from .errors import BudgetExceeded, DomainViolation, FieldMismatch
from .gf import FieldRegistry
from .tracefn import GroupKind, _anchor_twists, compile_expr, eval_points_sum, format_expr

SCAN_BUDGET = 1 << 22
_SCAN_CHUNK = 1 << 19

_default_registry = None


def _registry(registry):
    global _default_registry
    if registry is not None:
        return registry
    if _default_registry is None:
        _default_registry = FieldRegistry()
    return _default_registry


@dataclass(frozen=True)
class SumSpec:
    """One power sum: expression, ambient group, base field, and the point.

    ``t`` is an encoding in the canonical field of degree m over k = F_{p^m0};
    the evaluation field has degree m*r over k.
    """

    expr: object
    kind: GroupKind
    p: int
    m0: int
    m: int
    r: int
    t: int

    def __post_init__(self):
        if not isinstance(self.kind, GroupKind):
            raise TypeError("kind must be a GroupKind")
        if self.m < 1:
            raise ValueError("base degree m must be positive")
        if self.r < 1:
            raise ValueError("norm-power index r must be positive")
        if not 0 <= self.t < self.p ** (self.m0 * self.m):
            raise FieldMismatch(
                f"point {self.t} is not an F_{self.p}^{self.m0 * self.m} encoding"
            )
        if self.kind is GroupKind.Multiplicative and self.t == 0:
            raise DomainViolation("the torus does not contain 0")

    @property
    def q(self):
        return self.p**self.m0


@dataclass(frozen=True)
class CoefficientSequence:
    """c_1..c_S with c_s = f^{N,r}(k_{ms}, t), all at one conductor."""

    values: tuple
    q: int
    m: int
    r: int
    t: int
    fingerprint: str
    exact: bool = True

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(self.values))
        if len(self.values) < 1:
            raise ValueError("a coefficient sequence has at least one term")

    def prefix(self, S):
        """The same sequence truncated to its first S terms."""
        if not 1 <= S <= len(self.values):
            raise ValueError("prefix length out of range")
        return replace(self, values=self.values[:S])


def _realized_point(K, m0, d_sub, t):
    """Image of the degree-d_sub encoding t inside K, anchored over the base."""
    img = K.subfield_embedding(d_sub).embed(t)
    j = _anchor_twists(K, m0, [d_sub])[d_sub]
    return K.frobenius(img, j) if j else img


def norm_power_sum(spec, registry=None):
    """The power sum of ``spec``, exact."""
    reg = _registry(registry)
    compiled = compile_expr(spec.expr, spec.p, spec.m0)
    d_sub = spec.m0 * spec.m
    K = reg.field(spec.p, d_sub * spec.r)
    t_K = _realized_point(K, spec.m0, d_sub, spec.t)
    if spec.kind is GroupKind.Multiplicative:
        fiber = K.norm_fiber(d_sub, t_K)
    else:
        fiber = K.trace_fiber(d_sub, t_K)
    return eval_points_sum(compiled, K, fiber)


def _shared_conductor(values):
    conductor = 1
    for v in values:
        conductor = math.lcm(conductor, v.conductor)
    return tuple(v.to_conductor(conductor) for v in values)


def sum_sequence(spec, S, registry=None, jobs=1):
    """The coefficient stream (c_1, ..., c_S) of the local L-function at t."""
    if S < 1:
        raise ValueError("a coefficient sequence has at least one term")
    reg = _registry(registry)
    subspecs = []
    for s in range(1, S + 1):
        d_sub = spec.m0 * spec.m * s
        K_sub = reg.field(spec.p, d_sub)
        t_s = _realized_point(K_sub, spec.m0, spec.m0 * spec.m, spec.t)
        subspecs.append(
            SumSpec(spec.expr, spec.kind, spec.p, spec.m0, spec.m * s, spec.r, t_s)
        )
    if jobs > 1:
        # Warm the shared field and embedding caches before fanning out; the
        # workers then only run pure array arithmetic.
        for sub in subspecs:
            reg.field(sub.p, sub.m0 * sub.m * sub.r)
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            values = list(pool.map(lambda sub: norm_power_sum(sub, reg), subspecs))
    else:
        values = [norm_power_sum(sub, reg) for sub in subspecs]
    return CoefficientSequence(
        values=_shared_conductor(values),
        q=spec.q,
        m=spec.m,
        r=spec.r,
        t=spec.t,
        fingerprint=format_expr(spec.expr),
        exact=True,
    )


def brute_force_oracle(spec, registry=None):
    """norm_power_sum by scanning the whole evaluation field; tests only."""
    reg = _registry(registry)
    d_sub = spec.m0 * spec.m
    K = reg.field(spec.p, d_sub * spec.r)
    if K.order > SCAN_BUDGET:
        raise BudgetExceeded(
            f"full scan of {K.order} elements exceeds the {SCAN_BUDGET} budget"
        )
    compiled = compile_expr(spec.expr, spec.p, spec.m0)
    t_K = _realized_point(K, spec.m0, d_sub, spec.t)
    target = np.asarray(K.coords(t_K), dtype=np.int64)
    mult = spec.kind is GroupKind.Multiplicative
    picked = []
    for lo in range(0, K.order, _SCAN_CHUNK):
        u = np.arange(lo, min(lo + _SCAN_CHUNK, K.order), dtype=np.int64)
        X = K.bdecode(u)
        F = K.bnorm(d_sub, X) if mult else K.btrace(d_sub, X)
        picked.append(u[(F == target).all(axis=1)])
    fiber = np.concatenate(picked)
    return eval_points_sum(compiled, K, fiber)
