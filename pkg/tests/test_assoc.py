import random

import pytest
from hypothesis import given, settings, strategies as st

from gradedjordan.assoc import (CoordinateSystemError, ExchangeDouble, GroupAlgebra, InvalidPresentation,
                                MatrixAlgebra, QuantumTorus, StructureConstantAlgebra, centre, exchange_morphisms,
                                field_algebra, graded_ideal_closure, identity_morphism, inverse,
                                is_graded_semiprime, is_graded_simple, make_coordinate_system, reversal_involution,
                                structure_invariants, transpose_involution, truncated_polynomial_algebra)
from gradedjordan.exactlin import Field, GF
from gradedjordan.grading import GradingGroup

Q = Field(0)
F7 = GF(7)


@pytest.fixture(scope="module")
def torus():
    return QuantumTorus(Q, [[1, -1], [-1, 1]])


def test_quantum_torus_normal_order(torus):
    assert torus.mul(torus.monomial((0, 1)), torus.monomial((1, 0))) == {(1, 1): -1}
    assert torus.mul(torus.monomial((1, 0)), torus.monomial((0, 1))) == {(1, 1): 1}
    assert torus.commutation_scalar((1, 0), (0, 1)) == -1


def test_quantum_torus_rejects_bad_q():
    with pytest.raises(InvalidPresentation):
        QuantumTorus(Q, [[1, 2], [2, 1]])
    with pytest.raises(InvalidPresentation):
        QuantumTorus(Q, [[-1, 1], [1, 1]])


def test_group_algebra_law():
    A = GroupAlgebra(Q, GradingGroup(1))
    assert A.mul(A.monomial((3,)), A.monomial((-5,))) == {(-2,): 1}


def test_exchange_double_products():
    E = ExchangeDouble(field_algebra(F7), "pi_exchange")
    assert E.mul(E.embed(0, {0: F7(1)}), E.embed(1, {0: F7(1)})) == {}
    pi, bar = exchange_morphisms(E)
    assert pi(E.tuple_element([{0: F7(2)}, {0: F7(5)}])) == E.tuple_element([{0: F7(5)}, {0: F7(2)}])


def test_nonassociative_table_rejected():
    g = GradingGroup(0)
    # e0 unit, x^2 = e0 and x * e0 = 0 breaks associativity and unit laws
    with pytest.raises(InvalidPresentation):
        A = StructureConstantAlgebra(Q, g, [0, 1], {0: (), 1: ()}, {(0, 0): {0: 1}, (0, 1): {1: 1},
                                                                     (1, 1): {0: 1}, (1, 0): {}}, {0: 1})
        A.validate()


def test_reversal_involution(torus):
    pi = reversal_involution(torus)
    assert pi(torus.monomial((1, 1))) == {(1, 1): -1}
    assert pi(torus.monomial((1, 0))) == {(1, 0): 1}
    assert identity_morphism(torus, anti=True)(torus.unit()) == torus.unit()


def test_torus_coordinate_system(torus):
    pi = reversal_involution(torus)
    cs = make_coordinate_system(torus, pi, identity_morphism(torus), window=2)
    assert cs.A0.component((1, 1)) == []
    assert len(cs.A0.component((1, 0))) == 1
    assert cs.diagonal is True


def test_exchange_coordinate_system():
    E = ExchangeDouble(field_algebra(F7), "pi_exchange")
    pi, bar = exchange_morphisms(E)
    cs = make_coordinate_system(E, pi, bar)
    assert cs.A0.dim == 1
    assert cs.A0.contains(E.unit())
    assert cs.diagonal is False


def test_missing_one_rejected():
    A = field_algebra(F7)
    with pytest.raises(CoordinateSystemError):
        make_coordinate_system(A, identity_morphism(A, anti=True), identity_morphism(A), A0=[])


def test_non_ample_rejected():
    M = MatrixAlgebra(field_algebra(Q), 2)
    pi = transpose_involution(M)
    one = M.unit()
    with pytest.raises(CoordinateSystemError):
        make_coordinate_system(M, pi, identity_morphism(M), A0=[one])


def test_structure_invariants(torus):
    inv = structure_invariants(torus, window=2)
    assert inv["division_graded"] is True
    support = set(inv["centre"].degrees())
    assert support == {d for d in torus.degrees_in_window(2) if d[0] % 2 == 0 and d[1] % 2 == 0}
    assert inv["decomposition"] is True
    nil = truncated_polynomial_algebra(F7, 2)
    inv = structure_invariants(nil)
    assert inv["division_graded"] is False
    assert inv["non_invertible_witness"] == {1: F7(1)}
    inv = structure_invariants(field_algebra(Q))
    assert inv["centre"].dim == 1 and inv["commutators"].dim == 0 and inv["decomposition"]


def test_graded_simplicity_examples():
    E = ExchangeDouble(field_algebra(F7), "pi_exchange")
    pi, _ = exchange_morphisms(E)
    assert is_graded_simple(E, [pi])[0] is True
    assert is_graded_simple(E)[0] is False
    verdict, witness, _ = is_graded_simple(truncated_polynomial_algebra(F7, 2))
    assert verdict is False and witness == [{1: F7(1)}]
    cyc = GroupAlgebra(F7, GradingGroup(0, [5]))
    assert is_graded_simple(cyc)[0] is True


def test_semiprime_examples():
    nil = truncated_polynomial_algebra(F7, 2)
    verdict, witness, _ = is_graded_semiprime(nil)
    assert verdict is False and witness == [{1: F7(1)}]
    assert is_graded_semiprime(field_algebra(Q))[0] is True
    E = ExchangeDouble(field_algebra(F7), "pi_exchange")
    assert is_graded_semiprime(E)[0] is True


def test_semiprime_ignores_morphisms():
    # x -> -x is an automorphism of F7[x]/(x^3); invariance does not change semiprimeness
    for n in (2, 3):
        A = truncated_polynomial_algebra(F7, n)
        from gradedjordan.assoc import table_morphism
        neg = table_morphism(A, {i: {i: (-1) ** i} for i in range(n)}, anti=False, name="neg")
        assert is_graded_semiprime(A, [neg])[0] == is_graded_semiprime(A)[0]
    Q3 = truncated_polynomial_algebra(Q, 3)
    assert is_graded_semiprime(Q3)[0] is False


def test_exchange_modes_formulas():
    B = field_algebra(F7)
    E = ExchangeDouble(B, "quadruple")
    pi, bar = exchange_morphisms(E)
    a = E.tuple_element([{0: F7(i + 1)} for i in range(4)])
    assert pi(a) == E.tuple_element([{0: F7(c)} for c in (2, 1, 4, 3)])
    assert bar(a) == E.tuple_element([{0: F7(c)} for c in (3, 4, 1, 2)])
    E = ExchangeDouble(B, "bar_exchange")
    pi, bar = exchange_morphisms(E)
    a = E.tuple_element([{0: F7(2)}, {0: F7(3)}])
    assert pi(a) == a and bar(a) == E.tuple_element([{0: F7(3)}, {0: F7(2)}])


def test_invertible_monomials(torus):
    for d in [(1, 0), (3, -2), (-1, -1)]:
        x = torus.monomial(d)
        y = inverse(torus, x)
        assert torus.mul(x, y) == torus.unit() == torus.mul(y, x)


mono = st.tuples(st.integers(-3, 3), st.integers(-3, 3), st.integers(-3, 3))
Q3 = QuantumTorus(Q, [[1, -1, 2], [-1, 1, 3], [Q(1) / 2, Q(1) / 3, 1]])
SIGNS = QuantumTorus(Q, [[1, -1, 1], [-1, 1, -1], [1, -1, 1]])


def test_reversal_needs_sign_matrix():
    with pytest.raises(InvalidPresentation):
        reversal_involution(Q3)


@settings(max_examples=80)
@given(mono, mono, mono)
def test_monomial_normalization_associative(a, b, c):
    x, y, z = Q3.monomial(a), Q3.monomial(b), Q3.monomial(c)
    assert Q3.mul(Q3.mul(x, y), z) == Q3.mul(x, Q3.mul(y, z))


@settings(max_examples=60)
@given(mono, mono)
def test_reversal_is_antimultiplicative(a, b):
    pi = reversal_involution(SIGNS)
    x, y = SIGNS.monomial(a), SIGNS.monomial(b)
    assert pi(SIGNS.mul(x, y)) == SIGNS.mul(pi(y), pi(x))
    assert pi(pi(x)) == x


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_matrix_transpose_pair(seed):
    rng = random.Random(seed)
    M = MatrixAlgebra(ExchangeDouble(field_algebra(F7), "pi_exchange"), 2)
    keys = M.all_keys()

    def rand():
        return {k: F7(rng.randrange(7)) for k in rng.sample(keys, 3)}

    x, y = rand(), rand()
    base_pi, _ = exchange_morphisms(M.base)
    pi = transpose_involution(M, base_pi)
    assert pi(M.mul(x, y)) == M.mul(pi(y), pi(x))
    assert pi(pi(x)) == {k: c for k, c in x.items() if c}


def test_centre_of_matrices():
    M = MatrixAlgebra(field_algebra(F7), 2)
    Z = centre(M, M.degrees())
    assert Z.dim == 1 and Z.contains(M.unit())
    I = graded_ideal_closure(M, [], [M.from_entries({(0, 1): {0: F7(1)}})])
    assert I.dim == 4
