"""Recover matrix coordinates from a triangulated Jordan triple.

We start from 2x2 symmetric matrices over Mat2(F7), forget the matrix
description, and rebuild it from the triple product alone.
"""

from gradedjordan import coordinatize as co, jordan, models

m = models.mat2_f7()
J, T = m["triple"], m["triangulated"]
print("J:", J.dim(), "dimensional over", J.field)
print("Peirce pieces of e1 (J2, J1, J0):", jordan.Peirce(J, T.e1).dims())

# The envelope: operators on M generated by J_1 acting through x . m.
env = co.envelope(T)
for k, v in sorted(env.report().items()):
    print("  envelope %-16s %s" % (k, v))

# C|Cu is the coordinate algebra; phi maps J onto H2 of it.
res = co.hermitian_coordinatize(T, env)
print("recovered algebra has dim", res.algebra.dim, "and covers J:", res.is_all)
print("phi is a bijective homomorphism:", res.homomorphism["passed"] and res.bijective)

# Compare with the algebra we started from.
rt = co.hermitian_round_trip(m["coords"], J, res)
print("round trip to Mat2(F7) with pi and bar intact:", rt["passed"])

# Classification reads off the same data.
r = co.classify(T)
print("classify:", r["case"], r["subcase"])

# A degenerate example is refused, with the reason.
try:
    co.classify(models.h2_nilpotent_f7()["triangulated"])
except co.CoordinatizationRefused as e:
    print("h2 over F7[x]/(x^2) refused:", e)
