"""Acceptance criteria 1-10: exact checks, one PASS/FAIL line each."""

import json
import time

import pytest

from gradedjordan import cli, coordinatize as co, jordan, lie, models
from gradedjordan.exactlin import GF
from gradedjordan.grading import is_pointed_reflection_subspace, support_relations_check

F7 = GF(7)


@pytest.fixture
def verdict(capsys):
    def emit(n, ok, detail=""):
        with capsys.disabled():
            print("\ncriterion %d: %s %s" % (n, "PASS" if ok else "FAIL", detail))
        assert ok, detail
    return emit


AXIOM_MODELS = [("h2_quantum_minus1", 2), ("mat2_f7", None), ("ac_rank2_f7_aniso", None),
                ("ac_z_torus", 2), ("h2_nilpotent_f7", None), ("ac_degenerate_f7", None)]


def test_criterion_1_axiom_suite(verdict):
    t0 = time.time()
    bad = []
    for name, w in AXIOM_MODELS:
        r = jordan.axiom_check(models.registry(name, w)["triple"], trials=100, seed=1, radius=w or 1)
        if not r["passed"]:
            bad.append(name)
    mutant, entry = jordan.perturbed(models.mat2_f7()["triple"])
    r = jordan.axiom_check(mutant)
    caught = (not r["passed"]) and jordan.AXIOMS[r["failed_identity"]][0](mutant, *r["witness"])
    dt = time.time() - t0
    verdict(1, not bad and caught and dt < 60,
            "(6 models pass: %s, mutant caught by %s, %.1fs)" % (not bad, r.get("failed_identity"), dt))


BATTERY_MODELS = [("h2_quantum_minus1", 1), ("mat2_f7", None), ("h2_nilpotent_f7", None),
                  ("ac_rank2_f7_aniso", None), ("ac_rank3_q", None), ("ac_z_torus", 1)]
FORMULAS = {"01", "02", "03", "04", "05", "1", "pi", "pi2", "2", "3", "3.5", "4", "5", "6", "7", "8"}


def test_criterion_2_identity_battery(verdict):
    bad = []
    for name, w in BATTERY_MODELS:
        r = jordan.identity_battery(models.registry(name, w)["triangulated"], trials=100, seed=2)
        tags = set(r["formulas"])
        if not r["passed"] or tags != FORMULAS or r["trials"] < 100:
            bad.append(name)
        if any(v["failures"] for v in r["formulas"].values()):
            bad.append(name)
    verdict(2, not bad, "(16 formulas x 100 tuples on %d models; failing: %s)" % (len(BATTERY_MODELS), bad))


def test_criterion_3_product_cross_check(verdict):
    bad = []
    total = 0
    for name in ("ac_rank1_q", "ac_rank2_f7_aniso", "ac_degenerate_f7", "ac_rank3_q", "ac_rank3_f7"):
        r = models.cross_check_formula(models.registry(name)["triple"])
        total += r["checked"]
        if not (r["passed"] and r["complete"]):
            bad.append(name)
    verdict(3, not bad, "(%d basis products compared, failing: %s)" % (total, bad))


def test_criterion_4_round_trips(verdict):
    m = models.mat2_f7()
    h = co.hermitian_coordinatize(m["triangulated"])
    hr = co.hermitian_round_trip(m["coords"], m["triple"], h)
    herm_ok = (h.is_all and h.bijective and h.triangle_preserved and h.homomorphism["passed"]
               and hr["passed"] and hr["dim"] == 4 and h.algebra.dim == 4)
    c = models.ac_rank2_f7_aniso()
    cl = co.clifford_coordinatize(c["triangulated"])
    cr = co.clifford_round_trip(c["triple"], cl)
    cliff_ok = (cl.is_all and cl.bijective and cl.triangle_preserved and cl.homomorphism["passed"]
                and cr["passed"])
    verdict(4, herm_ok and cliff_ok, "(hermitian %s, clifford %s)" % (herm_ok, cliff_ok))


def test_criterion_5_classification(verdict):
    h = co.classify(models.mat2_f7()["triangulated"])
    c = co.classify(models.ac_rank2_f7_aniso()["triangulated"])
    refused = []
    for name in ("ac_degenerate_f7", "h2_nilpotent_f7"):
        try:
            co.classify(models.registry(name)["triangulated"])
        except co.CoordinatizationRefused:
            refused.append(name)
    eq = co.hermitian_equivalences(models.h2_nilpotent_f7()["triangulated"])
    cross = (eq["J_nondegenerate"] is False and eq["A_semiprime"] is False
             and eq["nondegenerate_iff_semiprime"] is True and eq["simple_iff_simple"] is True)
    ok = h["case"] == "hermitian" and c["case"] == "clifford" and len(refused) == 2 and cross
    verdict(5, ok, "(%s / %s, refused %d, equivalences %s)" % (h["case"], c["case"], len(refused), cross))


def test_criterion_6_radical(verdict):
    J = models.ac_degenerate_f7()["triple"]
    d = jordan.degeneracy(J)
    v = d["trivial_witness"]
    ideal = jordan.ideal_closure(J, [v])
    same = ideal.dim == d["radical"].dim and all(d["radical"].contains(b) for b in ideal.basis())
    Q = d["quotient"]
    nondeg, witness = jordan.is_graded_nondegenerate(Q)
    exhaustive = jordan.trivial_elements(Q)[1]
    ok = v == {("m", ("v", 0)): F7(1)} and same and nondeg is True and witness is None and exhaustive
    verdict(6, ok, "(witness %s, dim GM %d, quotient nondegenerate %s)" % (v, d["radical"].dim, nondeg))


def test_criterion_7_tkk(verdict):
    m = models.ac_rank1_q()
    K = lie.tkk(m["triple"], m["triangulated"])
    dims = K.root_dims()
    tkk_ok = (K.dim() == 10 and dims[lie.ZERO] == 2 and all(dims[a] == 1 for a in lie.ROOTS)
              and lie.jacobi_check(K)["passed"] and K.dictionary_check()["passed"])
    from gradedjordan.assoc import field_algebra, identity_morphism
    from gradedjordan.exactlin import Field
    A = field_algebra(Field(0))
    S = lie.build_su2(A, identity_morphism(A, anti=True))
    su_ok = S["su2"].dim() == 10 and not any(S["centre"].values())
    E = lie.build_eso_qinf(m["triple"].qf)
    cmp = lie.graded_comparison(K, E, seed=7, spots=40)
    verdict(7, tkk_ok and su_ok and cmp["passed"],
            "(TKK dim %d, su2 dim %d, TKK ~ eso %s)" % (K.dim(), S["su2"].dim(), cmp["passed"]))


def test_criterion_8_lie_tori(verdict):
    t0 = time.time()
    m = models.h2_quantum_minus1(3)
    cs = m["coords"]
    L = lie.SU2(cs.A, cs.pi, 3)
    rg1 = lie.rg1_check(L)["passed"]
    rg2 = lie.rg2_check(L)["passed"]
    certs = lie.sl2_certificates(L)
    one_dim = all(v["dim"] == 1 for v in certs.values())
    solved = all(c is not None and c["sl2"] for v in certs.values() for c in v["certificates"])
    cd = lie.centre_decomposition(cs.A, 3)
    split = all(v[0] for v in cd.values()) and len(cd) == 49
    a_ok = rg1 and rg2 and one_dim and solved and split
    z = models.ac_z_torus(6)
    E = lie.build_eso_qinf(z["triple"].qf, 6)
    p = lie.lie_predicates(E)
    s = lie.lie_supports(E)
    torus_ok = p["centre_zero"] and p["is_division_graded"] is True and p["is_lie_torus"] is True
    far = range(-40, 41)
    lattice_ok = (all(((d,) in s["L"]) == (d % 2 == 0) for d in far) and all((d,) in s["S"] for d in far)
                  and s["L"].subgroup is not None and s["S"].subgroup is not None)
    supp_ok = s["relations"] is True
    b_ok = torus_ok and supp_ok and lattice_ok and s["S_pointed_reflection"] and s["L_pointed_reflection"]
    dt = time.time() - t0
    verdict(8, a_ok and b_ok and dt < 120, "(su2 torus %s, eso torus %s, %.1fs)" % (a_ok, b_ok, dt))


def test_criterion_9_support_lattices(verdict):
    checked = []
    bad = []
    for name in models.REGISTRY:
        w = 2 if name in models.WINDOWED else None
        T = models.registry(name, w)["triangulated"]
        p = jordan.triple_predicates(T, radius=w)
        if p["division_triangulated"] is not True:
            continue
        checked.append(name)
        L, S = p["supports"]["L"], p["supports"]["S"]
        if not (is_pointed_reflection_subspace(L) and is_pointed_reflection_subspace(S)
                and support_relations_check(L, S) is True):
            bad.append(name)
    verdict(9, checked and not bad, "(division-triangulated: %s; failing: %s)" % (checked, bad))


DETERMINISM = [
    ["build", "--registry", "ac_rank2_f7_aniso"],
    ["verify-jordan", "--registry", "h2_quantum_minus1", "--window", "1", "--trials", "30"],
    ["peirce", "--registry", "mat2_f7", "--tripotent", "e"],
    ["triangle-check", "--registry", "ac_z_torus", "--window", "1"],
    ["battery", "--registry", "mat2_f7", "--trials", "20"],
    ["simple-check", "--registry", "h2_nilpotent_f7"],
    ["radical", "--registry", "ac_degenerate_f7"],
    ["coordinatize", "--registry", "ac_rank2_f7_aniso", "--mode", "clifford"],
    ["classify", "--registry", "mat2_f7"],
    ["tkk", "--registry", "ac_rank1_q"],
    ["lie-verify", "--registry", "ac_z_torus", "--window", "1"],
    ["torus-check", "--registry", "h2_quantum_minus1", "--window", "1"],
    ["supports", "--registry", "ac_z_torus", "--window", "2"],
]


def test_criterion_10_determinism(verdict):
    assert {a[0] for a in DETERMINISM} == set(cli.COMMANDS)
    bad = []
    for argv in DETERMINISM:
        argv = argv + ["--seed", "5"]
        runs = [cli.dumps(cli.run(argv)[0]) for _ in range(2)]
        if runs[0] != runs[1]:
            bad.append(argv[0])
        json.loads(runs[0])
    verdict(10, not bad, "(%d commands byte-identical; differing: %s)" % (len(DETERMINISM), bad))
