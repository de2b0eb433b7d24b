import random

import pytest
from hypothesis import given, settings, strategies as st

from gradedjordan import models
from gradedjordan.assoc import field_algebra
from gradedjordan.exactlin import Field, GF
from gradedjordan.quadform import (GradedQuadForm, QuadFormError, anisotropy, check_base_point,
                                   check_clifford_ample, clifford_form, graded_radical, hyperbolic_extension,
                                   predicates, quadform_from_json, quadform_to_json, radical)

Q = Field(0)
F7 = GF(7)


def field_form(F, values, bilinear=None):
    return models._field_form(F, values, bilinear)[1]


@pytest.fixture(scope="module")
def zform():
    return models.ac_z_torus(2)["coords"]


def test_base_point_value():
    qf = field_form(F7, {"u": 1, "v": 1})
    assert qf.q(qf.basis_vector("u")) == {0: F7(1)}
    assert qf.q({}) == {}
    check_base_point(qf, qf.basis_vector("u"))
    with pytest.raises(QuadFormError):
        check_base_point(qf, {})
    with pytest.raises(QuadFormError):
        check_base_point(qf, qf.basis_vector("u", {0: F7(2)}))


def test_laurent_form_evaluation(zform):
    D = zform.D
    a, b = Q(3), Q(-5)
    m = {("u", (0,)): a, ("u1", (0,)): b}
    assert zform.q(m) == {(0,): a * a, (2,): b * b}
    assert zform.bilinear(zform.basis_vector("u"), zform.basis_vector("u1")) == {}
    del D


def test_radical_examples():
    assert graded_radical(field_form(Q, {"u": 1, "v": 3})).dim == 0
    deg = field_form(F7, {"u": 1, "v": 0})
    R = graded_radical(deg)
    assert R.dim == 1 and R.basis() == [{("v", 0): F7(1)}]
    assert radical(deg).dim == 1
    F2 = Field(2)
    assert graded_radical(field_form(F2, {"u": 1})).dim == 0


def test_radical_char2_additive_cut():
    # over F2 with q(u) = q(v) = 1, q(u, v) = 0: the bilinear radical is everything,
    # q(u + v) = 0, so the radical is spanned by u + v
    F2 = Field(2)
    qf = field_form(F2, {"u": 1, "v": 1})
    R = graded_radical(qf)
    assert R.dim == 1 and R.contains({("u", 0): F2(1), ("v", 0): F2(1)})


def test_anisotropy_examples(zform):
    assert predicates(zform, window=3)["graded_anisotropic"] is True
    cf = clifford_form(field_form(Q, {"u": 1}))
    verdict, witness = anisotropy(cf)
    assert verdict is False
    assert anisotropy(field_form(F7, {"u": 1, "v": 1}))[0] is True
    assert anisotropy(field_form(F7, {"u": 1, "v": 6}))[0] is False


def test_hyperbolic_extension_gram():
    qf = field_form(Q, {"u": 1})
    qi = hyperbolic_extension(qf, qf.basis_vector("u"))
    assert qi.labels == ["h2", "h1", "u", "h-1", "h-2"]
    G = [[qi.bilinear(qi.basis_vector(a), qi.basis_vector(b)).get(0, 0) for b in qi.labels] for a in qi.labels]
    assert G == [[0, 0, 0, 0, 1],
                 [0, 0, 0, 1, 0],
                 [0, 0, -2, 0, 0],
                 [0, 1, 0, 0, 0],
                 [1, 0, 0, 0, 0]]
    assert qi.q(qi.basis_vector("u")) == {0: Q(-1)}
    assert qi.q(qi.basis_vector("h2")) == {}
    with pytest.raises(QuadFormError):
        hyperbolic_extension(qf, {})


def test_clifford_ample_checks(zform):
    D = zform.D
    full = D.subspace(rule=lambda d: [{k: Q(1)} for k in D.keys_of_degree(d)])
    assert check_clifford_ample(zform, full, window=2) == []
    only_one = D.subspace([D.unit()])
    fails = check_clifford_ample(zform, only_one, window=2)
    assert fails and fails[0][0] == "D0 q(M) in D0"


def test_json_round_trip():
    qf = field_form(F7, {"u": 1, "v": 3, "w": 4}, {("v", "w"): 2})
    back = quadform_from_json(quadform_to_json(qf), qf.D)
    for a in qf.labels:
        for b in qf.labels:
            x = qf.basis_vector(a)
            y = qf.basis_vector(b)
            assert back.bilinear(x, y) == qf.bilinear(x, y)


def test_asymmetric_bilinear_rejected():
    D = field_algebra(Q)
    with pytest.raises(QuadFormError):
        GradedQuadForm(D, ["a", "b"], {"a": (), "b": ()}, {"a": {0: Q(1)}, "b": {0: Q(1)}},
                       {("a", "b"): {0: Q(1)}, ("b", "a"): {0: Q(2)}})


FORMS = [field_form(Q, {"u": 1, "v": -2, "w": 3}, {("u", "v"): 1}),
         field_form(F7, {"u": 1, "v": 3, "w": 4}, {("v", "w"): 2}),
         models.ac_z_torus(2)["coords"]]


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10 ** 6), st.sampled_from(range(3)))
def test_quadratic_laws(seed, which):
    qf = FORMS[which]
    rng = random.Random(seed)
    D = qf.D
    m = qf.random_element(rng, radius=1, homogeneous=False)
    n = qf.random_element(rng, radius=1, homogeneous=False)
    lhs = qf.q({k: m.get(k, 0) + n.get(k, 0) for k in set(m) | set(n)})
    rhs = {}
    for part in (qf.q(m), qf.q(n), qf.bilinear(m, n)):
        for k, c in part.items():
            rhs[k] = rhs.get(k, 0) + c
    assert {k: c for k, c in lhs.items() if c} == {k: c for k, c in rhs.items() if c}
    assert qf.bilinear(m, n) == qf.bilinear(n, m)
    assert qf.bilinear(m, m) == {k: 2 * c for k, c in qf.q(m).items() if 2 * c}
    d = D.random_homogeneous(rng, radius=1) if not D.finite else {0: qf.field.random(rng)}
    d2 = D.mul(d, d)
    assert qf.q(qf.act(d, m)) == D.mul(d2, qf.q(m))


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_extended_isometry(seed):
    rng = random.Random(seed)
    qf = FORMS[0]
    qi = hyperbolic_extension(qf, qf.basis_vector("u"))
    m = qi.random_element(rng, homogeneous=False)
    assert qi.q(qi.S(m)) == qi.bar(qi.q(m))
    assert qi.S(qi.S(m)) == {k: c for k, c in m.items() if c}


def test_torus_basis_orthogonal(zform):
    for a in zform.labels:
        for b in zform.labels:
            if a != b:
                assert zform.bilinear(zform.basis_vector(a), zform.basis_vector(b)) == {}
