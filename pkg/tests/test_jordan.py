import random

import pytest
from hypothesis import given, settings, strategies as st

from gradedjordan import jordan, models
from gradedjordan.exactlin import GF, Field, vadd, vscale
from gradedjordan.grading import GradingGroup

F7 = GF(7)
Q = Field(0)


def test_p_examples(registry):
    m = registry("h2_rational")
    J, T = m["triple"], m["triangulated"]
    assert J.P(T.u, T.e1) == T.e2
    C = registry("ac_rank3_f7")["triple"]
    e = vadd(C.e1, C.e2)
    rng = random.Random(1)
    for _ in range(10):
        x = C.random_element(rng)
        assert C.P(e, x) == C.bar_formula(x)
    assert J.P({}, T.e1) == {}


def test_axiom_check_passes(registry):
    r = jordan.axiom_check(registry("h2_quantum_minus1", 2)["triple"], trials=60, seed=7, radius=2)
    assert r["passed"] and r["window"] == 2
    r = jordan.axiom_check(registry("ac_rank2_f7_aniso")["triple"])
    assert r["passed"] and r["mode"] == "exhaustive"


def test_perturbed_table_fails_with_reproducible_witness(registry):
    mutant, entry = jordan.perturbed(registry("mat2_f7")["triple"])
    r = jordan.axiom_check(mutant)
    assert not r["passed"]
    f = jordan.AXIOMS[r["failed_identity"]][0]
    assert f(mutant, *r["witness"])


def test_peirce_dims(registry):
    m = registry("h2_rational")
    J, T = m["triple"], m["triangulated"]
    assert jordan.Peirce(J, T.e1).dims() == (1, 1, 1)
    assert jordan.Peirce(J, vadd(T.e1, T.e2)).dims() == (3, 0, 0)
    assert jordan.Peirce(J, {}).dims() == (0, 0, 3)
    with pytest.raises(jordan.NotTripotent):
        jordan.Peirce(J, vscale(Q(2), T.e1))


def test_peirce_rules_and_projectors(registry):
    for name in ("mat2_f7", "ac_rank3_q", "h2_nilpotent_f7"):
        m = registry(name)
        J, T = m["triple"], m["triangulated"]
        for e in (T.e1, T.u, vadd(T.e1, T.e2)):
            assert jordan.peirce_rules_check(J, e, random.Random(0), samples=5) == []
            assert jordan.Peirce(J, e).check_projectors(J.basis()) == []


def test_triangle_criterion(registry):
    for name in ("mat2_f7", "ac_rank2_f7_aniso"):
        m = registry(name)
        J, T = m["triple"], m["triangulated"]
        u, e1, e2 = jordan.triangle_complete(J, T.u, T.e1)
        assert e2 == T.e2
        assert jordan.triangle_check(J, u, e1, e2)["passed"]
        assert jordan.is_triangulated(J, e1, e2)[0]
    J = registry("h2_rational")["triple"]
    T = registry("h2_rational")["triangulated"]
    with pytest.raises(jordan.JordanError):
        jordan.triangle_complete(J, vscale(Q(2), T.u), T.e1)


def test_derived_operations(registry):
    m = registry("mat2_f7")
    J, T, cs = m["triple"], m["triangulated"], m["coords"]
    a = {(0, 1, 0): F7(1), (1, 1, 0): F7(3)}
    x = J.element(a=a)
    assert T.star(x) == J.element(a=cs.pi(a))
    assert T.Q(1, T.u) == T.e1
    with pytest.raises(jordan.JordanError):
        T.derived("Q_1", T.e1)
    C = registry("ac_rank3_q")
    Cj, Ct = C["triple"], C["triangulated"]
    rng = random.Random(3)
    for _ in range(10):
        y = Cj.random_element(rng)
        assert Ct.star(y) == Cj.star_formula(y)


def test_battery_examples(registry):
    m = registry("mat2_f7")
    J, T, cs = m["triple"], m["triangulated"], m["coords"]
    a = {(0, 1, 0): F7(2)}
    mm = J.element(a=a)
    assert vadd(T.dot(1, T.T(1, mm), T.u), vscale(F7(-1), mm)) == J.element(a=cs.pi(a))
    rng = random.Random(5)
    for _ in range(5):
        x1 = T.random_in(1, rng)
        assert T.T(1, T.dot(1, x1, T.u)) == vscale(F7(2), x1)
    r = jordan.identity_battery(T, trials=10, seed=0)
    assert r["passed"]


@pytest.mark.parametrize("name", ["mat2_f7", "mat2_mat2_f7", "h2_nilpotent_f7", "ac_rank3_f7", "ac_rank3_q",
                                  "ac_degenerate_f7"])
def test_battery_all_formulas(registry, name):
    r = jordan.identity_battery(registry(name)["triangulated"], trials=20, seed=11)
    assert r["passed"], {k: v["failures"] for k, v in r["formulas"].items() if v["failures"]}
    assert set(r["formulas"]) == {"01", "02", "03", "04", "05", "1", "pi", "pi2", "2", "3", "3.5",
                                  "4", "5", "6", "7", "8"}


def test_degeneracy_examples(registry):
    d = jordan.degeneracy(registry("ac_degenerate_f7")["triple"])
    v = {("m", ("v", 0)): F7(1)}
    assert d["trivial_witness"] == v and d["radical"].basis() == [v]
    d = jordan.degeneracy(registry("h2_nilpotent_f7")["triple"])
    assert d["trivial_witness"] is not None and d["radical"].dim == 3
    d = jordan.degeneracy(registry("ac_rank2_f7_aniso")["triple"])
    assert d["trivial_witness"] is None and d["radical"].dim == 0 and d["exact"]


def test_simplicity(registry):
    assert jordan.is_graded_simple(registry("mat2_f7")["triple"])[0] is True
    verdict, witness, _ = jordan.is_graded_simple(registry("ac_degenerate_f7")["triple"])
    assert verdict is False and witness == [{("m", ("v", 0)): F7(1)}]
    g = GradingGroup(0)
    zero = jordan.StructureTriple(Q, g, [0, 1], {0: (), 1: ()}, {}, {})
    with pytest.raises(jordan.NotCandidate):
        jordan.is_graded_simple(zero)


def test_invertibility(registry):
    C = registry("ac_rank2_f7_aniso")["triple"]
    e = vadd(C.e1, C.e2)
    assert jordan.invertible(C, e) == (True, e)
    assert C.invertible_element(e) == (True, e)
    H = registry("h2_quantum_minus1", 2)["triple"]
    ok, inv = jordan.invertible(H, H.element(a={(1, -1): Q(1)}), radius=2)
    assert ok and H.P(H.element(a={(1, -1): Q(1)}), inv) == H.element(a={(1, -1): Q(1)})
    assert jordan.invertible(C, {}) == (False, None)


def test_isotopes(registry):
    m = registry("mat2_f7")
    J, T = m["triple"], m["triangulated"]
    e = vadd(T.e1, T.e2)
    Je = jordan.isotope(J, e)
    rng = random.Random(2)
    for _ in range(5):
        x, y = J.random_element(rng), J.random_element(rng)
        assert Je.P(x, y) == J.P(x, T.bar(y))
    alg = m["algebra"]
    Ju = jordan.isotope(alg, alg.unit)
    for _ in range(5):
        x, y = J.random_element(rng), J.random_element(rng)
        assert Ju.P(x, y) == alg.P(x, y)
    with pytest.raises(jordan.JordanError):
        jordan.isotope(J, T.e1)


def test_special_isotope_shift(registry):
    z = registry("ac_z_torus", 3)
    T = z["triangulated"]
    u1 = {("m", ("u1", (0,))): Q(1)}
    Jt, Tt = jordan.special_isotope(T, u1, radius=3)
    for mu in range(-2, 3):
        assert {frozenset(b) for b in Tt.basis_of("m", (mu,))} == {frozenset(b) for b in T.basis_of("m", (mu + 1,))}
    assert Jt.element_degree(u1) == (0,)
    assert jordan.axiom_check(Jt, trials=30, radius=2)["passed"]


def test_conversions(registry):
    m = registry("mat2_f7")
    alg = m["algebra"]
    T = jordan.algebra_to_triple(alg)
    rng = random.Random(4)
    V = jordan.JordanPair.from_triple(T)
    H = jordan.algebra_from_pair(V, alg.unit)
    for _ in range(5):
        x, y = alg.random_element(rng), alg.random_element(rng)
        assert T.P(x, y) == alg.U(x, y) == H.U(x, y)
    D = jordan.polarized_double(m["triple"])
    assert D.dim() == 2 * m["triple"].dim()
    assert jordan.axiom_check(D, trials=10)["passed"]
    Tm = m["triangulated"]
    e1, e2, u = (D.double(x) for x in (Tm.e1, Tm.e2, Tm.u))
    assert jordan.triangle_check(D, u, e1, e2)["passed"]


def test_torus_predicates(registry):
    p = jordan.triple_predicates(registry("h2_quantum_minus1", 2)["triangulated"], radius=2)
    assert p["division_triangulated"] is True and p["torus"] is True and p["faithful"] is True
    p = jordan.triple_predicates(registry("mat2_f7")["triangulated"])
    assert p["division_triangulated"] is False and p["torus"] is False


@pytest.mark.parametrize("name", ["ac_degenerate_f7", "h2_nilpotent_f7"])
def test_trivial_components_inherit(registry, name):
    m = registry(name)
    J, T = m["triple"], m["triangulated"]
    d = jordan.degeneracy(J, T=T)
    z = d["trivial_witness"]
    z1, mm, z2 = T.components(z)
    for i, zi in ((1, z1), (2, z2)):
        for b in J.basis():
            bi = T.project(i, b)
            assert J.P(zi, bi) == {}
    for i in (1, 2):
        assert T.Q(i, mm) == {}
        for b in J.basis():
            assert T.Q(i, mm, T.project_m(b)) == {}


def test_simple_implies_nondegenerate(registry):
    for name in ("mat2_f7", "ac_rank2_f7_aniso", "ac_rank3_f7", "mat2_exchange_f7"):
        J = registry(name)["triple"]
        if jordan.is_graded_simple(J)[0] is True:
            assert jordan.degeneracy(J)["trivial_witness"] is None


def test_peirce_one_space_simplicity(registry):
    # J graded-simple iff J_1 graded-simple, on the finite hermitian models
    for name in ("mat2_f7", "h2_nilpotent_f7", "mat2_mat2_f7"):
        m = registry(name)
        J, T = m["triple"], m["triangulated"]
        J1 = jordan.snapshot(J, [(i, b) for i, b in enumerate(T.basis_of(1, ()))]).triple
        s = jordan.is_graded_simple(J)[0]
        try:
            s1 = jordan.is_graded_simple(J1)[0]
        except jordan.NotCandidate:
            s1 = False
        assert s == s1


SYSTEMS = {name: models.registry(name)["triple"] for name in ("mat2_f7", "ac_rank3_q", "h2_rational", "ac_rank3_f7")}


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10 ** 6), st.sampled_from(sorted(SYSTEMS)))
def test_quadratic_and_symmetric(seed, name):
    J = SYSTEMS[name]
    rng = random.Random(seed)
    x, y, z = (J.random_element(rng) for _ in range(3))
    c = J.field(rng.randrange(1, 6))
    assert J.P(vscale(c, x), y) == vscale(c * c, J.P(x, y))
    assert J.triple(x, y, z) == J.triple(z, y, x)
    lin = vadd(vadd(J.P(x, y), J.P(z, y)), J.triple(x, y, z))
    assert J.P(vadd(x, z), y) == lin


def test_grading_law_on_torus(registry):
    J = registry("h2_quantum_minus1", 2)["triple"]
    g = J.group

    @settings(max_examples=30, deadline=None)
    @given(st.integers(0, 10 ** 6))
    def check(seed):
        rng = random.Random(seed)
        x, y = J.random_homogeneous(rng, radius=2), J.random_homogeneous(rng, radius=2)
        w = J.P(x, y)
        if w:
            assert J.element_degree(w) == g.add(g.scale(2, J.element_degree(x)), J.element_degree(y))

    check()


def test_nilpotent_off_diagonal_is_trivial(registry):
    J = registry("h2_nilpotent_f7")["triple"]
    x12 = J.element(a={1: F7(1)})
    assert all(J.P(x12, b) == {} for b in J.basis())
    assert jordan.degeneracy(J)["radical"].contains(x12)
