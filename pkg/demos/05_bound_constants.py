"""Explicit square-root bound constants from monodromy profiles.

A profile lists Jordan-block multiplicities n_{chi,j} of the local
monodromies; formulas A, B, M combine into C, the degree bound for the
norm L-function on the admissible set, and hence into explicit constants
|sum - main term| <= C q^{m(r-1)/2}.
"""

from norml import (
    C_bound_mult,
    FieldRegistry,
    GroupKind,
    MonodromyProfile,
    additive_example_bound,
    admissible_set,
    critical_values,
    formula_A,
    formula_B,
    kummer_profile,
    normexa1_bound,
    normexa2_bound,
    pushforward_kernel_profile,
)

# The pushforward kernel of g with deg g = d has a rank d-1 profile: the
# trivial character with d-1 unipotent blocks at one end, d-1 distinct
# characters of rank 1 at the other.
profile = pushforward_kernel_profile(3)
print("profile labels:", [label for label, _ in profile.blocks])
print("A_1, A_2:", formula_A(profile, 1), formula_A(profile, 2))
print("B_1, B_2:", formula_B(profile, 1), formula_B(profile, 2))
print("C for r=2:", C_bound_mult(profile, 2), "= normexa1_bound(3,2) =", normexa1_bound(3, 2))

# The same machinery with a custom profile: one character, one Jordan
# block of size 2.
custom = MonodromyProfile(2, {"eta": [(1, 2)]})
print("custom C for r=1..3:", [str(C_bound_mult(custom, r)) for r in (1, 2, 3)])
print("matches normexa2 same-character branch:",
      [str(normexa2_bound(2, r, same_char=True)) for r in (1, 2, 3)])

# The distinct-character profile splits the same slopes across two
# characters (two rank-1 blocks instead of one rank-2 block).  A, B, C
# depend only on the multiset of (slope, multiplicity) pairs, so the
# constant comes out the same even though the profiles differ.
distinct = kummer_profile(2, same_char=False)
print("distinct-character blocks:", dict(distinct.blocks))
print("same constant either way:",
      [str(C_bound_mult(distinct, r)) for r in (1, 2, 3)])

# Where the bounds apply: the admissible set excludes the r-fold sumset
# (additive) or product set (multiplicative) of the critical values.
reg = FieldRegistry(seed=0)
k = reg.field(7, 1)
crit = critical_values((0, 4, 0, 1), k)  # g = x^3 - 3x over F_7
print("critical values of x^3-3x:", sorted(crit))
adm = admissible_set(crit, 2, GroupKind.Additive, k)
print("additive admissible t:", [t for t in range(7) if adm.is_admissible(t)])
adm = admissible_set(crit, 2, GroupKind.Multiplicative, k)
print("multiplicative admissible t:", [t for t in range(1, 7) if adm.is_admissible(t)])
print("additive example bound (d=3, r=2):", additive_example_bound(3, 2))
