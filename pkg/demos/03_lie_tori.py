"""From Jordan triples to B2-graded Lie algebras.

The TKK algebra of a rank-1 Clifford system is 10-dimensional with every
root space of dimension 1.  Windowed versions of the two infinite
families show the Lie torus shape degree by degree.
"""

from gradedjordan import lie, models

m = models.ac_rank1_q()
K = lie.tkk(m["triple"], m["triangulated"])
print("TKK dim", K.dim())
for a, n in sorted(K.root_dims().items()):
    print("  root %-8s dim %d" % (a, n))
print("Jacobi:", lie.jacobi_check(K)["passed"], " RG axioms:", lie.root_grading_check(K)["passed"])

E = lie.build_eso_qinf(m["triple"].qf)
print("graded-isomorphic to eso(q_inf):", lie.graded_comparison(K, E)["passed"])

# The extra-centre mutant breaks RG2: L_0 is no longer spanned by root brackets.
print("mutant RG2:", lie.rg2_check(lie.SlotMutant(K, extra=1))["passed"])

# su2 over the quantum torus t1 t2 = -t2 t1, inspected on |lambda_i| <= 2.
q = models.h2_quantum_minus1(2)["coords"]
L = lie.SU2(q.A, q.pi, 2)
p = lie.lie_predicates(L)
print("su2 window: centre zero", p["centre_zero"], " Lie torus", p["is_lie_torus"])

# eso for the Z-graded Clifford torus; supports come out as 2Z and Z.
z = models.ac_z_torus(4)
E = lie.build_eso_qinf(z["triple"].qf, 4)
s = lie.lie_supports(E)
print("supports L =", s["L"], " S =", s["S"], " relations hold:", s["relations"])
