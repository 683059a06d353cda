"""Characters and the expression dictionary.

Trace functions are built from a small grammar: Artin-Schreier twists
psi(Tr g(x)), Kummer twists chi(N g(x)), pushforward counts and kernels,
punctual objects, induced characters, and sums/products/shifts of these.
Values are exact cyclotomic numbers.
"""

from norml import (
    AdditiveCharacter,
    FieldRegistry,
    MultiplicativeCharacter,
    eval_additive,
    eval_multiplicative,
    evaluate,
    format_expr,
    parse_expr,
)

reg = FieldRegistry(seed=0)
k = reg.field(5, 1)

# psi_a(x) = zeta_5^{Tr(ax)}; chi_e = (dlog mod orders) on the torus.
psi = AdditiveCharacter(5, 1, 2)
chi = MultiplicativeCharacter(5, 1, 1)
print("psi_2(3) =", eval_additive(psi, k, 3))
print("chi(2) =", eval_multiplicative(chi, k, 2), " order:", chi.order)

# Expressions parse from literals and print back canonically.
expr = parse_expr("(product (artin-schreier (psi a=2) (poly 0 1)) (kummer (chi e=1) (poly 0 1)))", 5, 1)
print("expression:", format_expr(expr))

# evaluate(expr, k, m, t) is the trace function on k_m at t: here a Gauss
# summand psi(2t)chi(t) on the torus of F_25 ... exact roots of unity.
k2 = reg.field(5, 2)
for t in (1, 7, 12):
    print(f"f(F_25, {t}) =", evaluate(expr, k, 2, t))

# The same machinery accepts characters on extension fields: chi of order 8
# lives on F_9 and is induced down to the ground field F_3.
chi8 = MultiplicativeCharacter(3, 2, 1)
ik = parse_expr("(shift (induced-kummer d=2 (chi e=1@3^2)))", 3, 1)
k3 = reg.field(3, 1)
print("induced character order:", chi8.order)
print("f(F_3, 1) =", evaluate(ik, k3, 1, 1), " f(F_3, 2) =", evaluate(ik, k3, 1, 2))

# Over F_3 itself no point of F_9 descends, so the induced object vanishes.
# Over F_9 (m = 2) every fiber point is rational and chi shows up directly.
for u in (1, 2, 5):
    print(f"f(F_9, {u}) =", evaluate(ik, k3, 2, u))
