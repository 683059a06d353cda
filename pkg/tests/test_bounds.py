"""Explicit constants, monodromy-profile formulas, and admissible sets."""

from fractions import Fraction

import pytest

from norml.bounds import (
    AdmissibleSet,
    C_bound_mult,
    MonodromyProfile,
    SheafNumerics,
    additive_example_bound,
    admissible_set,
    binom,
    critical_values,
    formula_A,
    formula_B,
    formula_M,
    kummer_example_bound,
    kummer_profile,
    normexa1_bound,
    normexa2_bound,
    pushforward_kernel_profile,
    swan_example_bound,
    trex1_bound,
    weyl_dim,
)
from norml.errors import BudgetExceeded, SplittingFieldTooLarge
from norml.gf import FieldCtx, FieldRegistry
from norml.tracefn import GroupKind

REG = FieldRegistry()


# -- binomial convention -----------------------------------------------------------


def test_binomial_convention():
    assert binom(5, 2) == 10
    assert binom(3, 3) == 1
    assert binom(2, 5) == 0
    assert binom(4, -1) == 0
    # The boundary value C(n, 0) = 1 holds for every n, including negative
    # ones; the closed-form example bounds rely on it.
    assert binom(0, 0) == 1
    assert binom(-1, 0) == 1
    assert binom(-3, 0) == 1
    assert binom(-1, 2) == 0


# -- dimension counts and direct bounds ---------------------------------------------


def test_weyl_dim():
    assert weyl_dim(2, 2, 0) == 3
    assert weyl_dim(2, 2, 1) == 1
    assert weyl_dim(3, 3, 1) == 8


def test_trex1_bound():
    assert trex1_bound(SheafNumerics(d=3, e=0, c=0), 2) == 9
    assert trex1_bound(SheafNumerics(d=1, e=0, c=0), 2) == 1
    for d, e, c in ((3, 1, 0), (4, 2, 1), (5, 0, 2)):
        assert trex1_bound(SheafNumerics(d=d, e=e, c=c), 1) == (1 + c) * (d - c)


def test_sheaf_numerics_validation():
    with pytest.raises(ValueError):
        SheafNumerics(d=0, e=0, c=0)
    with pytest.raises(ValueError):
        SheafNumerics(d=1, e=-1, c=0)
    with pytest.raises(ValueError):
        trex1_bound(SheafNumerics(d=1, e=0, c=3), 2)  # needs d+e-c >= 0


def test_additive_example_bound():
    assert additive_example_bound(3, 2) == 4
    assert additive_example_bound(2, 2) == 1
    assert additive_example_bound(3, 1) == 2  # d - 1, the classical count


def test_kummer_example_bound():
    assert kummer_example_bound(2, 2) == 3
    assert kummer_example_bound(1, 2) == 1
    for a in (1, 2, 5):
        assert kummer_example_bound(a, 1) == 1


def test_swan_example_bound():
    assert swan_example_bound(3, 2) == 2
    assert swan_example_bound(4, 2) == 3
    assert swan_example_bound(3, 1) == 1
    assert swan_example_bound(4, 3) == Fraction(19, 3)
    with pytest.raises(ValueError):
        swan_example_bound(2, 2)


# -- profile formulas ----------------------------------------------------------------


def test_pushforward_kernel_profile_shape():
    prof = pushforward_kernel_profile(3)
    assert prof.n == 2
    labels = dict(prof.blocks)
    assert labels["1"] == ((1, 2),)
    assert len(labels) == 3  # trivial plus the two others


def test_formula_A():
    assert formula_A(pushforward_kernel_profile(3), 1) == 4
    assert formula_A(MonodromyProfile(n=3, blocks={}), 4) == 0
    single = MonodromyProfile(n=1, blocks={"x": [(1, 1)]})
    assert formula_A(single, 2) == 2
    assert formula_A(single, 0) == 0


def test_formula_B():
    assert formula_B(pushforward_kernel_profile(3), 1) == 4
    assert formula_B(pushforward_kernel_profile(3), 0) == 0
    assert formula_B(MonodromyProfile(n=2, blocks={"x": [(1, 2)]}), 2) == 2


def test_formula_B_closed_form():
    # For the kernel profile, B_i collapses to 2i*C(d-1, i).
    for d in (2, 3, 4):
        prof = pushforward_kernel_profile(d)
        for i in range(4):
            assert formula_B(prof, i) == 2 * i * binom(d - 1, i)


def test_formula_M():
    prof = pushforward_kernel_profile(3)
    assert formula_M(prof, 2, 0) == formula_A(prof, 2) == 12
    for r in (1, 2, 3):
        assert formula_M(prof, r, 0) == formula_A(prof, r)
        assert formula_M(prof, r, r) == formula_B(prof, r)


def test_C_bound_mult():
    prof = pushforward_kernel_profile(3)
    assert C_bound_mult(prof, 2) == 16
    assert C_bound_mult(MonodromyProfile(n=0, blocks={}), 3) == 0
    for r in (1, 2):
        expected = Fraction(sum(formula_M(prof, r, i) for i in range(r + 1)), 2)
        assert C_bound_mult(prof, r) == expected


def test_normexa1_frozen_values():
    assert normexa1_bound(3, 2) == 16
    assert normexa1_bound(2, 1) == 2


def test_normexa1_matches_profile_bound():
    for d in (2, 3, 4):
        prof = pushforward_kernel_profile(d)
        for r in (1, 2, 3):
            assert normexa1_bound(d, r) == C_bound_mult(prof, r), (d, r)


def test_normexa2_frozen_values():
    assert normexa2_bound(2, 1, same_char=False) == 2
    assert normexa2_bound(2, 1, same_char=True) == 2


def test_normexa2_matches_profile_bound():
    for a in (2, 3, 4):
        for r in (1, 2, 3):
            for same in (False, True):
                assert normexa2_bound(a, r, same_char=same) == C_bound_mult(
                    kummer_profile(a, same_char=same), r
                ), (a, r, same)


def test_profile_validation():
    with pytest.raises(ValueError):
        MonodromyProfile(n=1, blocks={"x": [(0, 1)]})  # block size must be >= 1
    with pytest.raises(ValueError):
        MonodromyProfile(n=1, blocks={"x": [(1, -1)]})
    with pytest.raises(ValueError):
        MonodromyProfile(n=1, blocks={"x": [(1, 2)]})  # derived n_{x,0} < 0


def test_formulas_monotone_in_multiplicities():
    base = MonodromyProfile(n=3, blocks={"u": [(1, 1)], "v": [(2, 1)]})
    bump_u = MonodromyProfile(n=3, blocks={"u": [(1, 2)], "v": [(2, 1)]})
    bump_v = MonodromyProfile(n=3, blocks={"u": [(1, 1)], "v": [(2, 2)]})
    for r in (1, 2, 3):
        for bumped in (bump_u, bump_v):
            assert formula_A(bumped, r) >= formula_A(base, r)
            assert formula_B(bumped, r) >= formula_B(base, r)


def test_bounds_nonnegative():
    for d in (2, 3, 4):
        for r in (1, 2, 3):
            assert normexa1_bound(d, r) >= 0
            assert additive_example_bound(d, r) >= 0
    for a in (1, 2, 3):
        for r in (1, 2, 3):
            assert kummer_example_bound(a, r) >= 0
            assert normexa2_bound(a, r, same_char=False) >= 0


# -- critical values -----------------------------------------------------------------


def test_critical_values_morse_cubic():
    F7 = REG.field(7, 1)
    assert critical_values((0, 4, 0, 1), F7) == {5, 2}  # x^3 - 3x


def test_critical_values_squares():
    F5 = REG.field(5, 1)
    assert critical_values((0, 0, 1), F5) == {0}
    F7 = REG.field(7, 1)
    assert critical_values((0, 0, 0, 1), F7) == {0}


def test_critical_values_need_splitting_field():
    F7 = REG.field(7, 1)
    with pytest.raises(SplittingFieldTooLarge):
        critical_values((0, 3, 0, 1), F7)  # x^3 + 3x, critical points x^2 = -1
    F49 = REG.field(7, 2)
    vals = critical_values((0, 3, 0, 1), F49)
    assert len(vals) == 2
    for v in vals:
        assert not F49.in_subfield(1, v)  # the values generate F_49


def test_critical_values_validation():
    F7 = REG.field(7, 1)
    with pytest.raises(ValueError):
        critical_values((1, 1), F7)  # degree < 2
    with pytest.raises(ValueError):
        critical_values((0, 0, 0, 0, 0, 0, 0, 1), F7)  # p divides the degree


# -- admissible sets -----------------------------------------------------------------


def test_admissible_sumset():
    F7 = REG.field(7, 1)
    adm = admissible_set({2, 5}, 2, GroupKind.Additive, F7, 1)
    assert isinstance(adm, AdmissibleSet)
    assert adm.forbidden == frozenset({4, 0, 3})
    assert sorted(t for t in range(7) if adm.is_admissible(t)) == [1, 2, 5, 6]


def test_admissible_product_set():
    F7 = REG.field(7, 1)
    adm = admissible_set({2, 5}, 2, GroupKind.Multiplicative, F7, 1)
    assert adm.forbidden == frozenset({4, 3})
    assert sorted(t for t in range(1, 7) if adm.is_admissible(t)) == [1, 2, 5, 6]


def test_admissible_one_and_empty():
    F5 = REG.field(5, 1)
    assert admissible_set({1}, 7, GroupKind.Multiplicative, F5, 1).forbidden == {1}
    empty = admissible_set(set(), 3, GroupKind.Additive, F5, 1)
    assert empty.forbidden == frozenset()
    assert all(empty.is_admissible(t) for t in range(5))


def test_admissible_in_extension():
    F3 = REG.field(3, 1)
    adm = admissible_set({2}, 2, GroupKind.Additive, F3, 2)
    assert adm.forbidden == frozenset({1})  # 2 + 2 = 1 in the prime subfield
    assert not adm.is_admissible(1)
    assert all(adm.is_admissible(t) for t in range(9) if t != 1)


def test_admissible_cardinality():
    F7 = REG.field(7, 1)
    s = {1, 2, 3}
    for r in (1, 2, 3):
        adm = admissible_set(s, r, GroupKind.Additive, F7, 1)
        assert len(adm.forbidden) <= min(len(s) ** r, 7)
