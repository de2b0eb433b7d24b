import random

import pytest

from gradedjordan import coordinatize as co
from gradedjordan import jordan, models
from gradedjordan.exactlin import Field, GF
from gradedjordan.grading import GradingGroup

Q = Field(0)
F7 = GF(7)


@pytest.fixture(scope="module")
def mat2():
    m = models.mat2_f7()
    return m, co.envelope(m["triangulated"])


def test_envelope_mat2(mat2):
    m, env = mat2
    r = env.report()
    assert r["dim_C"] == 4 and r["M_equals_Cu"] and r["u_C_faithful"] and r["L_injective"]
    assert r["pi_verified"] and not r["commutative"] and not r["pi_is_identity"]


def test_envelope_rank1():
    env = co.envelope(models.ac_rank1_q()["triangulated"])
    assert env.C.dim == 1
    assert env.C.matrices == [env.frame.identity()]
    assert env.pi.is_identity(env.C.alg.all_keys())


def faithless_system():
    """h2_rational plus an extra element z in the Peirce 2-space of e1 acting as zero on M.

    Not a Jordan triple: it only serves to exercise the injectivity guard.
    """
    S = jordan.snapshot(models.h2_rational()["triple"]).triple
    keys = S.keys + ["z"]
    deg = dict(S.deg)
    deg["z"] = ()
    Pq = dict(S.Pq)
    T3 = dict(S.T)
    e1 = 0
    Pq[(e1, "z")] = {"z": Q(1)}
    T3[(e1, "z", e1)] = {"z": Q(2)}
    J = jordan.StructureTriple(Q, GradingGroup(0), keys, deg, Pq, T3, name="faithless")
    return jordan.TriangulatedSystem(J, {1: Q(1)}, {0: Q(1)}, {2: Q(1)}, check=False)


def test_refuses_non_injective_L():
    T = faithless_system()
    assert T.basis_of(1, ()) and len(T.basis_of(1, ())) == 2
    with pytest.raises(co.CoordinatizationRefused) as exc:
        co.envelope(T)
    z = exc.value.witness
    assert z and all(T.dot(1, z, m) == {} for m in T.basis_of("m", ()))


def test_faithfulness_identity_on_triangles():
    # T_1(x_1 . u) = 2 x_1 forces L to be injective on genuine triangles
    for name in ("mat2_f7", "ac_rank3_q", "h2_nilpotent_f7"):
        T = models.registry(name)["triangulated"]
        for x in T.basis_of(1, ()):
            assert T.T(1, T.dot(1, x, T.u)) == {k: 2 * c for k, c in x.items()}


def test_windowed_refused():
    T = models.h2_quantum_minus1(1)["triangulated"]
    with pytest.raises(co.CoordinatizationRefused):
        co.envelope(T)


def test_hermitian_round_trip(mat2):
    m, env = mat2
    res = co.hermitian_coordinatize(m["triangulated"], env)
    assert res.is_all and res.bijective and res.triangle_preserved and res.homomorphism["passed"]
    assert res.algebra.dim == 4
    rt = co.hermitian_round_trip(m["coords"], m["triple"], res)
    assert rt["passed"], rt["failures"]


def test_hermitian_exchange_double():
    m = models.mat2_mat2_f7()
    res = co.hermitian_coordinatize(m["triangulated"])
    assert res.is_all and res.bijective and res.algebra.dim == 8
    rt = co.hermitian_round_trip(m["coords"], m["triple"], res)
    assert rt["passed"], rt["failures"]


def test_hermitian_from_rank1_clifford():
    res = co.hermitian_coordinatize(models.ac_rank1_q()["triangulated"])
    assert res.is_all and res.algebra.dim == 1 and res.algebra.alg.is_commutative()


def test_clifford_round_trip():
    m = models.ac_rank2_f7_aniso()
    res = co.clifford_coordinatize(m["triangulated"])
    assert res.is_all and res.bijective and res.triangle_preserved
    assert res.report["dim_D"] == 1 and res.report["rank"] == 2
    rt = co.clifford_round_trip(m["triple"], res)
    assert rt["passed"], rt["failures"]


def test_clifford_on_hermitian_is_partial(mat2):
    m, env = mat2
    res = co.clifford_coordinatize(m["triangulated"], env)
    assert res.is_all is False
    assert res.report["dim_Jq"] < res.report["dim_J"] == 10
    assert res.homomorphism["passed"] and res.triangle_preserved


def test_clifford_rank1_vacuous():
    m = models.ac_rank1_q()
    T = m["triangulated"]
    res = co.clifford_coordinatize(T)
    assert len(res.K[1]) == len(T.basis_of(1, ())) and len(res.K[2]) == len(T.basis_of(2, ()))
    assert len(res.N) == len(T.basis_of("m", ()))


def test_clifford_rank3_round_trips():
    for make in (models.ac_rank3_q, models.ac_rank3_f7):
        m = make()
        res = co.clifford_coordinatize(m["triangulated"])
        assert res.is_all
        assert co.clifford_round_trip(m["triple"], res)["passed"]


def test_classify_cases(mat2):
    m, _ = mat2
    r = co.classify(m["triangulated"])
    assert r["case"] == "hermitian" and r["subcase"] == "I"
    assert r["certificate"]["hypothesis_torsion_free"] is True
    r = co.classify(models.ac_rank2_f7_aniso()["triangulated"])
    assert r["case"] == "clifford" and r["subcase"] == "I"
    r = co.classify(models.mat2_mat2_f7()["triangulated"])
    assert r["case"] == "hermitian" and r["subcase"] == "II"


@pytest.mark.parametrize("name", ["ac_degenerate_f7", "h2_nilpotent_f7"])
def test_classify_refuses_degenerate(name):
    with pytest.raises(co.CoordinatizationRefused):
        co.classify(models.registry(name)["triangulated"])


def test_hermitian_equivalences():
    for name in ("h2_nilpotent_f7", "mat2_f7", "h2_rational"):
        r = co.hermitian_equivalences(models.registry(name)["triangulated"])
        assert r["nondegenerate_iff_semiprime"] is True
        assert r["simple_iff_simple"] is True
    r = co.hermitian_equivalences(models.h2_nilpotent_f7()["triangulated"])
    assert r["J_nondegenerate"] is False and r["A_semiprime"] is False


def test_cbreve(mat2):
    _, env = mat2
    assert co.cbreve_check(env) == (True, None)
    env = co.envelope(models.mat2_mat2_f7()["triangulated"])
    assert co.cbreve_check(env)[0]


def test_pi2_and_ampleness(mat2):
    m, env = mat2
    T = m["triangulated"]
    fr = env.frame
    rng = random.Random(0)
    for _ in range(10):
        c = env.C.to_matrix({k: F7(rng.randrange(7)) for k in env.C.alg.all_keys()})
        cpi = env.pi_matrix(c)
        mm, nn = T.random_in("m", rng), T.random_in("m", rng)
        assert T.Q(2, fr.apply(c, mm), nn) == T.Q(2, mm, fr.apply(cpi, nn))
        x1 = T.random_in(1, rng)
        lhs = co.mat_mul(co.mat_mul(c, env.L(x1)), cpi)
        cu = fr.apply(c, T.u)
        assert lhs == env.L(T.J.P(cu, T.J.P(T.u, x1)))


def test_envelope_of_nontrivial_bar():
    m = models.mat2_exchange_f7()
    env = co.envelope(m["triangulated"])
    assert not env.pi_failures
    keys = env.C.alg.all_keys()
    for k in keys:
        x = {k: F7(1)}
        assert env.bar(env.bar(x)) == x
        assert env.pi(env.bar(x)) == env.bar(env.pi(x))
