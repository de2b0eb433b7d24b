from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from gradedjordan.exactlin import (BasisCoordinates, Field, GF, GradedMap, GradedSubspace, ClosureError,
                                   closure, inverse_matrix, matmul, rank, solve)

Q = Field(0)
F7 = GF(7)


def graded_plane(F, degs=None):
    degs = degs or {0: (0,), 1: (0,)}
    return lambda: GradedSubspace(F, lambda k: degs[k], lambda d: [k for k in degs if degs[k] == d])


def test_field_arithmetic():
    a = F7(3)
    assert a * F7(5) == F7(1) and (a ** -1) == F7(5)
    assert F7(-1) == F7(6)
    assert Q(Fraction(1, 3)) * 3 == 1
    with pytest.raises(ValueError):
        Field(9)


def test_solve_examples():
    s = solve([[F7(1), F7(0)], [F7(0), F7(1)]], [F7(4), F7(5)], F7)
    assert s.particular == [F7(4), F7(5)] and s.unique
    s = solve([[Q(0), Q(0)]], [Q(0)], Q)
    assert len(s.kernel) == 2
    s = solve([[F7(1), F7(2)], [F7(0), F7(4)]], [F7(3), F7(1)], F7)
    assert s.particular == [F7(6), F7(2)]
    assert solve([[Q(1)], [Q(1)]], [Q(0), Q(1)], Q) is None
    with pytest.raises(ValueError):
        solve([[Q(1)]], [Q(1), Q(2)], Q)


def test_closure_examples():
    make = graded_plane(Q)
    ident = GradedMap(lambda v: dict(v), (0,))
    swap = GradedMap(lambda v: {1 - k: c for k, c in v.items()}, None)
    one = make()
    one.add({0: Q(1)})
    assert closure(one, [ident]) == one
    assert closure(make(), [swap]).dim == 0
    seed = make()
    seed.add({0: Q(1)})
    assert closure(seed, [swap]).dim == 2
    assert seed.dim == 1


def test_closure_rejects_wrong_degree():
    degs = {0: (0,), 1: (1,)}
    seed = graded_plane(Q, degs)()
    seed.add({0: Q(1)})
    up = GradedMap(lambda v: {1: c for k, c in v.items() if k == 0}, (2,))
    with pytest.raises(ClosureError):
        closure(seed, [up])


def test_basis_coordinates():
    bc = BasisCoordinates(Q, [{"a": Q(1), "b": Q(1)}, {"b": Q(1)}])
    assert bc({"a": Q(2), "b": Q(5)}) == [Q(2), Q(3)]
    assert bc({"c": Q(1)}) is None
    with pytest.raises(ValueError):
        BasisCoordinates(Q, [{"a": Q(1)}, {"a": Q(2)}])


small = st.integers(-3, 3)


def matrices(n, m):
    return st.lists(st.lists(small, min_size=m, max_size=m), min_size=n, max_size=n)


@settings(max_examples=60)
@given(matrices(3, 4), st.lists(small, min_size=3, max_size=3), st.sampled_from([0, 5, 7]))
def test_solve_resubstitution(A, b, p):
    F = Field(p)
    A = [[F(x) for x in row] for row in A]
    b = [F(x) for x in b]
    s = solve(A, b, F)
    aug_rank = rank([row + [bi] for row, bi in zip(A, b)], 5)
    if s is None:
        assert aug_rank > rank(A, 4)
        return
    for row, bi in zip(A, b):
        assert sum((a * x for a, x in zip(row, s.particular)), F.zero) == bi
    for k in s.kernel:
        assert all(sum((a * x for a, x in zip(row, k)), F.zero) == 0 for row in A)
    assert len(s.kernel) == 4 - rank(A, 4)


@settings(max_examples=40)
@given(matrices(3, 3))
def test_inverse(A):
    A = [[F7(x) for x in row] for row in A]
    inv = inverse_matrix(A, F7)
    if rank(A, 3) < 3:
        assert inv is None
    else:
        assert matmul(A, inv, F7) == [[F7(int(i == j)) for j in range(3)] for i in range(3)]


@settings(max_examples=40)
@given(st.lists(st.lists(small, min_size=3, max_size=3), min_size=1, max_size=2))
def test_closure_idempotent_and_monotone(seedvecs):
    degs = {0: (0,), 1: (0,), 2: (0,)}
    cyc = GradedMap(lambda v: {(k + 1) % 3: c for k, c in v.items()}, None)
    proj = GradedMap(lambda v: {k: c for k, c in v.items() if k == 0}, None)
    seed = graded_plane(Q, degs)()
    for v in seedvecs:
        seed.add({i: Q(c) for i, c in enumerate(v) if c})
    c1 = closure(seed, [proj])
    assert closure(c1, [proj]) == c1
    c2 = closure(seed, [proj, cyc])
    assert c1.is_subspace_of(c2)
    assert seed.is_subspace_of(c1)
