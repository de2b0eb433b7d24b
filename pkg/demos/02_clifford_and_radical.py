"""Clifford systems: coordinates (D, q) and what happens when q degenerates."""

from gradedjordan import coordinatize as co, jordan, models

m = models.ac_rank2_f7_aniso()
C, T = m["triple"], m["triangulated"]
print("q = x^2 + y^2 over F7; dim J =", C.dim())

# The explicit product formulas agree with the generic quadratic form triple.
r = models.cross_check_formula(C)
print("formula cross-check on", r["checked"], "basis products:", r["passed"])

res = co.clifford_coordinatize(T)
print("recovered D has dim", res.report["dim_D"], "and M has rank", res.report["rank"])
print("round trip with the same Gram data:", co.clifford_round_trip(C, res)["passed"])

# Now make q(v) = 0 with v orthogonal to everything.
bad = models.ac_degenerate_f7()["triple"]
d = jordan.degeneracy(bad)
print("trivial element:", d["trivial_witness"])
print("radical dim:", d["radical"].dim, " quotient dim:", d["quotient"].dim())
print("quotient nondegenerate:", jordan.is_graded_nondegenerate(d["quotient"])[0])
print("is the triple graded-simple?", jordan.is_graded_simple(bad)[0])
print("Peirce-side battery still holds:", jordan.identity_battery(models.ac_degenerate_f7()["triangulated"],
                                                                   trials=30)["passed"])
