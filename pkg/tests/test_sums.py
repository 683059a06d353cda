"""Norm/trace power sums: frozen values, identities, and the scan oracle."""

import random
from fractions import Fraction

import pytest

from norml.characters import (
    AdditiveCharacter,
    MultiplicativeCharacter,
    eval_additive,
    eval_multiplicative,
)
from norml.cyclotomic import CycNumber
from norml.errors import BudgetExceeded, DegreeTooLarge, DomainViolation, FieldMismatch
from norml.gf import FieldRegistry
from norml.sums import (
    CoefficientSequence,
    SumSpec,
    brute_force_oracle,
    norm_power_sum,
    sum_sequence,
)
from norml.tracefn import (
    ArtinSchreier,
    Constant,
    GroupKind,
    InducedKummer,
    Kummer,
    Product,
    Punctual,
    PushforwardKernel,
    Shift,
    Sum,
    TwistDeg,
    evaluate,
    on_torus,
)

GM = GroupKind.Multiplicative
A1 = GroupKind.Additive

REG = FieldRegistry()


def rat(x):
    return CycNumber.from_rational(x)


# -- frozen point values --------------------------------------------------------


def test_constant_on_torus():
    spec = SumSpec(Constant(), GM, 3, 1, 1, 2, 1)
    assert norm_power_sum(spec, registry=REG) == 4


def test_constant_on_affine_line():
    for t in range(3):
        spec = SumSpec(Constant(), A1, 3, 1, 1, 2, t)
        assert norm_power_sum(spec, registry=REG) == 3


def test_shifted_induced_kummer():
    chi = MultiplicativeCharacter(3, 1, 1)
    spec = SumSpec(Shift(InducedKummer(1, chi)), GM, 3, 1, 1, 2, 2)
    assert norm_power_sum(spec, registry=REG) == 4


def test_artin_schreier_trace_collapse():
    psi = AdditiveCharacter(3, 1, 1)
    expr = ArtinSchreier(psi, (0, 1))
    for t in range(3):
        spec = SumSpec(expr, A1, 3, 1, 1, 2, t)
        expected = rat(3) * CycNumber.zeta(3, t % 3)
        assert norm_power_sum(spec, registry=REG) == expected


def test_nonprime_base_trace_collapse():
    # psi on F_9; the trace condition pins the character value on the fiber.
    F9 = REG.field(3, 2)
    psi = AdditiveCharacter(3, 2, 1)
    expr = ArtinSchreier(psi, (0, 1))
    for t in range(9):
        spec = SumSpec(expr, A1, 3, 2, 1, 2, t)
        expected = rat(9) * eval_additive(psi, F9, t)
        assert norm_power_sum(spec, registry=REG) == expected


def test_constant_on_torus_nonprime_base():
    spec = SumSpec(Constant(), GM, 3, 2, 1, 2, 5)
    assert norm_power_sum(spec, registry=REG) == 10  # (81-1)/(9-1)


def test_induced_kummer_norm_projection():
    # For a shifted induced character the whole fiber sees one value, so the
    # sum is (1 + q^m) times the single-point evaluation.
    chi = MultiplicativeCharacter(3, 1, 1)
    expr = Shift(InducedKummer(1, chi))
    base = REG.field(3, 1)
    for t in range(1, 9):
        spec = SumSpec(expr, GM, 3, 1, 2, 2, t)
        expected = rat(10) * evaluate(expr, base, 2, t)
        assert norm_power_sum(spec, registry=REG) == expected


# -- frozen sequences -----------------------------------------------------------


def test_constant_sequence():
    spec = SumSpec(Constant(), GM, 3, 1, 1, 2, 1)
    seq = sum_sequence(spec, 4, registry=REG)
    assert isinstance(seq, CoefficientSequence)
    assert seq.values == tuple(rat((9**s - 1) // (3**s - 1)) for s in range(1, 5))
    assert seq.values == (rat(4), rat(10), rat(28), rat(82))
    assert seq.q == 3 and seq.m == 1 and seq.r == 2 and seq.t == 1
    assert seq.fingerprint == "(const)"
    assert seq.exact


def test_skyscraper_sequence():
    # The point a with a^2 = -1 generates F_9 over F_3; its trace to k_s
    # vanishes exactly for odd s, so the coefficients alternate 1, 0.
    F9 = REG.field(3, 2)
    minus_one = F9.neg(1)
    a = next(x for x in range(9) if F9.mul(x, x) == minus_one)
    spec = SumSpec(Punctual(a, 2), A1, 3, 1, 1, 2, 0)
    seq = sum_sequence(spec, 6, registry=REG)
    assert seq.values == (rat(1), rat(0), rat(1), rat(0), rat(1), rat(0))


def test_kernel_sequence_identity_power():
    # r = 1 makes the fiber a single point, so c_s counts roots minus one.
    spec = SumSpec(PushforwardKernel((0, 4, 0, 1)), A1, 7, 1, 1, 1, 0)
    seq = sum_sequence(spec, 2, registry=REG)
    assert seq.values == (rat(0), rat(2))


def test_sequence_shares_one_conductor():
    psi = AdditiveCharacter(3, 1, 1)
    expr = Sum((ArtinSchreier(psi, (0, 1)), Constant()))
    spec = SumSpec(expr, A1, 3, 1, 1, 2, 1)
    seq = sum_sequence(spec, 3, registry=REG)
    conductors = {v.conductor for v in seq.values}
    assert len(conductors) == 1


def test_sequence_length_validation():
    spec = SumSpec(Constant(), GM, 3, 1, 1, 2, 1)
    with pytest.raises(ValueError):
        sum_sequence(spec, 0, registry=REG)


def test_sequence_parallel_matches_serial():
    psi = AdditiveCharacter(3, 1, 1)
    expr = Sum((ArtinSchreier(psi, (0, 0, 1)), Constant()))
    spec = SumSpec(expr, A1, 3, 1, 1, 2, 1)
    serial = sum_sequence(spec, 4, registry=REG)
    parallel = sum_sequence(spec, 4, registry=REG, jobs=3)
    assert serial.values == parallel.values


# -- the scan oracle ------------------------------------------------------------


def test_oracle_constant():
    spec = SumSpec(Constant(), GM, 5, 1, 1, 3, 2)
    assert brute_force_oracle(spec, registry=REG) == 31


def test_oracle_matches_fast_path_kummer():
    chi = MultiplicativeCharacter(5, 1, 1)  # order 4
    expr = Kummer(chi, (1, 0, 1))
    for t in range(1, 5):
        spec = SumSpec(expr, GM, 5, 1, 1, 2, t)
        assert brute_force_oracle(spec, registry=REG) == norm_power_sum(
            spec, registry=REG
        )


def test_oracle_budget():
    spec = SumSpec(Constant(), A1, 3, 1, 4, 4, 0)  # 3^16 elements
    with pytest.raises(BudgetExceeded):
        brute_force_oracle(spec, registry=REG)


def test_fast_path_against_scalar_scan():
    # Fully independent check: walk the fiber from the field layer and add up
    # single-point evaluations.
    psi = AdditiveCharacter(3, 1, 1)
    chi = MultiplicativeCharacter(3, 1, 1)
    expr = Sum((ArtinSchreier(psi, (1, 2, 1)), Kummer(chi, (2, 1))))
    base = REG.field(3, 1)
    K = REG.field(3, 2)
    for kind in (GM, A1):
        for t in range(1 if kind is GM else 0, 3):
            fiber = K.norm_fiber(1, t) if kind is GM else K.trace_fiber(1, t)
            direct = rat(0)
            for u in fiber:
                direct = direct + evaluate(expr, base, 2, int(u))
            spec = SumSpec(expr, kind, 3, 1, 1, 2, t)
            assert norm_power_sum(spec, registry=REG) == direct


# -- identities ------------------------------------------------------------------


def test_additivity():
    psi = AdditiveCharacter(5, 1, 2)
    chi = MultiplicativeCharacter(5, 1, 1)
    e1 = ArtinSchreier(psi, (0, 0, 1))
    e2 = Kummer(chi, (1, 1))
    for kind, t in ((GM, 3), (A1, 0), (A1, 4)):
        merged = norm_power_sum(SumSpec(Sum((e1, e2)), kind, 5, 1, 1, 2, t), registry=REG)
        split = norm_power_sum(
            SumSpec(e1, kind, 5, 1, 1, 2, t), registry=REG
        ) + norm_power_sum(SumSpec(e2, kind, 5, 1, 1, 2, t), registry=REG)
        assert merged == split


def test_twist_rule():
    psi = AdditiveCharacter(5, 1, 1)
    inner = ArtinSchreier(psi, (0, 1, 1))
    for alpha, factor in (
        (Fraction(5, 2), rat(Fraction(25, 4))),
        (CycNumber.zeta(4, 1), rat(-1)),
    ):
        twisted = Product((TwistDeg(alpha, 1), inner))
        for t in (1, 2):
            spec = SumSpec(twisted, GM, 5, 1, 1, 2, t)
            plain = norm_power_sum(SumSpec(inner, GM, 5, 1, 1, 2, t), registry=REG)
            assert norm_power_sum(spec, registry=REG) == factor * plain


def test_partition_of_the_unit_group():
    for p, m, r in ((3, 1, 2), (5, 1, 2), (3, 2, 2)):
        q_m = p**m
        total = rat(1)
        for t in range(1, q_m):
            total = total + norm_power_sum(
                SumSpec(Constant(), GM, p, 1, m, r, t), registry=REG
            )
        assert total == p ** (m * r)


def test_character_inversion():
    # sum_t chi(t) f^{N,r}(k,t) = sum_u chi(N(u)) f(k_r,u), exactly, for every
    # character of F_5^*.
    psi = AdditiveCharacter(5, 1, 1)
    expr = ArtinSchreier(psi, (0, 0, 1))
    base = REG.field(5, 1)
    K = REG.field(5, 2)
    for e in range(4):
        chi = MultiplicativeCharacter(5, 1, e)
        lhs = rat(0)
        for t in range(1, 5):
            lhs = lhs + eval_multiplicative(chi, base, t) * norm_power_sum(
                SumSpec(expr, GM, 5, 1, 1, 2, t), registry=REG
            )
        rhs = rat(0)
        for u in range(1, 25):
            n = K.rel_norm(1, u)
            rhs = rhs + eval_multiplicative(chi, base, n) * evaluate(expr, base, 2, u)
        assert lhs == rhs


# -- validation ------------------------------------------------------------------


def test_spec_validation():
    with pytest.raises(ValueError):
        SumSpec(Constant(), GM, 3, 1, 0, 2, 1)
    with pytest.raises(ValueError):
        SumSpec(Constant(), GM, 3, 1, 1, 0, 1)
    with pytest.raises(FieldMismatch):
        SumSpec(Constant(), GM, 3, 1, 1, 2, 3)  # t outside k_m
    with pytest.raises(DomainViolation):
        SumSpec(Constant(), GM, 3, 1, 1, 2, 0)  # torus excludes 0


def test_degree_too_large_propagates():
    small = FieldRegistry(max_order=1 << 10)
    spec = SumSpec(Constant(), A1, 3, 1, 2, 4, 0)  # needs 3^8 = 6561
    with pytest.raises(DegreeTooLarge):
        norm_power_sum(spec, registry=small)


# -- randomized agreement ---------------------------------------------------------


def _random_expr(rng, p):
    psi = AdditiveCharacter(p, 1, rng.randrange(1, p))
    chi = MultiplicativeCharacter(p, 1, rng.randrange(1, p - 1))
    deg = rng.randrange(1, 4)
    g = tuple(rng.randrange(p) for _ in range(deg)) + (rng.randrange(1, p),)
    leaves = [
        Constant(),
        ArtinSchreier(psi, g),
        Kummer(chi, g),
        PushforwardKernel(g),
        Punctual(rng.randrange(p**2), 2, Fraction(2)),
        InducedKummer(1, chi),
    ]
    pick = rng.randrange(9)
    if pick < 6:
        return leaves[pick]
    if pick == 6:
        return Shift(rng.choice(leaves))
    if pick == 7:
        return Sum((rng.choice(leaves), rng.choice(leaves)))
    return Product((rng.choice(leaves), rng.choice(leaves)))


def test_random_specs_fast_vs_oracle():
    rng = random.Random(20260816)
    done = 0
    while done < 25:
        p = rng.choice((3, 5, 7))
        m = rng.choice((1, 2))
        r = rng.choice((1, 2, 3))
        if p ** (m * r) > 1 << 18:
            continue
        expr = _random_expr(rng, p)
        kind = GM if on_torus(expr) else rng.choice((GM, A1))
        t = rng.randrange(1 if kind is GM else 0, p**m)
        spec = SumSpec(expr, kind, p, 1, m, r, t)
        assert norm_power_sum(spec, registry=REG) == brute_force_oracle(
            spec, registry=REG
        )
        done += 1
