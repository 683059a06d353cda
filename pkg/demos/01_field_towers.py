"""Field towers, Frobenius, and the trace/norm fibers everything else sums over.

Every extension F_{p^n} is presented on a fixed power basis, elements are
integers in [0, p^n) via base-p digits, and subfield embeddings are chosen
once per registry so that towers commute.
"""

import numpy as np

from norml import FieldRegistry

reg = FieldRegistry(seed=0)

# A tower over F_7: the ground field, its quadratic extension, and the
# degree-4 field containing both.
k = reg.field(7, 1)
k2 = reg.field(7, 2)
k4 = reg.field(7, 4)

print("orders:", k.order, k2.order, k4.order)

# Arithmetic is explicit: 3 + 5, 3 * 5, 3^-1 in F_7.
print("in F_7: 3+5 =", k.add(3, 5), " 3*5 =", k.mul(3, 5), " 3^-1 =", k.inverse(3))

# The relative trace and norm down to the degree-2 subfield.  For u in
# F_{7^4}, norm values land in the image of F_{7^2}.
u = 1234
tr = k4.rel_trace(2, u)
nm = k4.rel_norm(2, u)
print("u =", u, "Tr_{F_7^4/F_7^2}(u) =", tr, "N(u) =", nm)
print("both in the quadratic subfield:", k4.in_subfield(2, tr), k4.in_subfield(2, nm))

# Fibers: the norm fiber over t has (q^{mr}-1)/(q^m-1) points, the trace
# fiber q^{m(r-1)}, independent of t (t = 0 excluded for norms).
emb = k4.subfield_embedding(2)
t = emb.embed(3)
print("norm fiber size over t=3:", k4.norm_fiber(2, t).size, "expected", (7**4 - 1) // (7**2 - 1))
print("trace fiber size over t=3:", k4.trace_fiber(2, t).size, "expected", 7**2)

# Bulk operations drive everything at scale: vectorized Frobenius over all
# of F_{7^2} takes one matrix multiply.
U = k2.bdecode(np.arange(k2.order, dtype=np.int64))
frob = k2.bencode(k2.bfrobenius(U, 1))
fixed = int((frob == np.arange(k2.order)).sum())
print("Frobenius fixed points in F_49:", fixed, "(the prime field)")
