"""Local norm L-functions as exact rational functions.

L^{N,r}(T) = exp(sum_s c_s T^s / s).  A certified minimal recurrence on the
c_s (exact Berlekamp-Massey over cyclotomic numbers) yields the reciprocal
roots and poles with multiplicities; their moduli give integral q^m-weights
for dictionary objects.  A skyscraper at a degree-2 point shows rationality
genuinely failing while L^2 stays rational.
"""

from norml import (
    CoefficientSequence,
    CycNumber,
    FieldRegistry,
    GroupKind,
    NonIntegerMultiplicity,
    SumSpec,
    classify_weights,
    fit_rational_model,
    parse_expr,
    rth_power_check,
    series_expand,
    sum_sequence,
)

reg = FieldRegistry(seed=0)
rat = CycNumber.from_rational

# Constant sheaf on the torus, r = 2: c_s = 3^s + 1, so L has poles at 1
# and 3 with weights 0 and 2.
spec = SumSpec(parse_expr("(const)", 3, 1), GroupKind.Multiplicative, 3, 1, 1, 2, 1)
seq = sum_sequence(spec, 8, registry=reg)
model = fit_rational_model(seq.prefix(6))
print("poles:", [(str(b.value.as_fraction()), b.multiplicity) for b in model.poles])
print("predicts c_7, c_8 exactly:", series_expand(model, 8)[6:] == list(seq.values[6:]))
report = classify_weights(model, 3)
print("weights:", [round(row.weight, 9) for row in report.rows],
      "integral:", report.integral_weights_ok)

# The skyscraper sequence 1,0,1,0,... satisfies c_s = c_{s-2} but is NOT a
# signed power sum with integer multiplicities: the fit rejects it.
sky = CoefficientSequence(
    values=tuple(rat(v) for v in (1, 0, 1, 0, 1, 0, 1, 0)),
    q=3, m=1, r=2, t=1, fingerprint="skyscraper",
)
try:
    fit_rational_model(sky)
except NonIntegerMultiplicity as exc:
    print("plain fit fails:", [float(round(abs(v), 3)) for v in exc.multiplicities])

# Doubling the sequence models L^2 = (1+T)/(1-T): eigenvalues 1 and -1.
doubled = rth_power_check(sky, 2)
print("L^2 pole:", doubled.poles[0].value.as_fraction(),
      " root:", doubled.roots[0].value.as_fraction())
