"""Norm and trace power sums: f^{N,r}(k_m, t) = sum of a trace function
over the fiber of the norm (or trace) from k_{mr} down to k_m.

The fast path enumerates only the fiber, never the ambient field; the
oracle scans everything and must agree.
"""

from norml import (
    FieldRegistry,
    GroupKind,
    SumSpec,
    brute_force_oracle,
    norm_power_sum,
    parse_expr,
    sum_sequence,
)

reg = FieldRegistry(seed=0)

# The simplest sum: the constant sheaf counts the fiber.  Over q=3, m=1,
# r=2 the norm fiber has (3^2-1)/(3-1) = 4 points.
spec = SumSpec(parse_expr("(const)", 3, 1), GroupKind.Multiplicative, 3, 1, 1, 2, 1)
print("constant sheaf, norm fiber count:", norm_power_sum(spec, registry=reg))

# A Kummer twist: chi(N g(x)) summed over the fiber.  Exact cyclotomic
# output, and the full-scan oracle agrees.
expr = parse_expr("(kummer (chi e=1) (poly 0 1))", 5, 1)
spec = SumSpec(expr, GroupKind.Multiplicative, 5, 1, 1, 2, 3)
fast = norm_power_sum(spec, registry=reg)
slow = brute_force_oracle(spec, registry=reg)
print("Kummer sum:", fast, " oracle agrees:", fast == slow)

# Trace sums run the same way on the additive group; t = 0 is allowed.
expr = parse_expr("(artin-schreier (psi a=1) (poly 0 1))", 3, 1)
spec = SumSpec(expr, GroupKind.Additive, 3, 1, 1, 2, 0)
print("Artin-Schreier trace sum at t=0:", norm_power_sum(spec, registry=reg))

# Coefficient sequences c_s = f^{N,r}(k_s, t) for s = 1..S feed the
# L-series layer.  The constant sheaf gives c_s = 3^s + 1.
spec = SumSpec(parse_expr("(const)", 3, 1), GroupKind.Multiplicative, 3, 1, 1, 2, 1)
seq = sum_sequence(spec, 6, registry=reg)
print("c_1..c_6:", [str(v.as_fraction()) for v in seq.values])
