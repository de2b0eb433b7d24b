from hypothesis import given, settings, strategies as st

from gradedjordan.grading import (GradingGroup, Subgroup, SupportSet, hermite_normal_form,
                                  is_pointed_reflection_subspace, smith_invariants, span_subgroup,
                                  support_relations_check)

Z = GradingGroup(1)
Z2 = GradingGroup(2)


def test_torsion_coordinates_are_reduced():
    g = GradingGroup(1, [2, 3])
    assert g.degree((5, 3, 7)) == (5, 1, 1)
    assert g.add((1, 1, 2), (0, 1, 2)) == (1, 0, 1)
    assert g.neg((2, 1, 1)) == (-2, 1, 2)
    assert not g.torsion_free and Z2.torsion_free


def test_span_examples():
    H = span_subgroup(SupportSet.finite(Z2, [(2, 0), (0, 2)]))
    assert H.index == 4
    assert H.quotient_invariants() == ([2, 2], 0)
    assert H == Subgroup(Z2, [(2, 0), (0, 2), (2, 2)])
    trivial = span_subgroup(SupportSet.finite(Z, []))
    assert trivial.index is None and trivial.contains((0,)) and not trivial.contains((1,))
    assert span_subgroup(SupportSet.finite(Z, [(1,)])).index == 1


def test_smith_oracle():
    # generator matrix [[2,4],[6,8]] has invariants 2, 4 (det -8)
    assert smith_invariants([[2, 4], [6, 8]], 2) == ([2, 4], 0)
    assert smith_invariants([[2, 0]], 2) == ([2], 1)
    assert hermite_normal_form([[2, 0], [0, 2], [2, 2]], 2) == hermite_normal_form([[0, 2], [2, 0]], 2)


def test_pointed_reflection_examples():
    assert is_pointed_reflection_subspace(SupportSet.cosets(Z, [(2,)], [(0,), (1,)]))
    assert is_pointed_reflection_subspace(SupportSet.finite(Z, [(0,)]))
    assert not is_pointed_reflection_subspace(SupportSet.cosets(Z, [(3,)], [(0,), (1,)]))
    assert not is_pointed_reflection_subspace(SupportSet.cosets(Z, [(2,)], [(1,)]))


def test_support_relations_examples():
    assert support_relations_check(SupportSet.cosets(Z, [(2,)], [(0,)]), SupportSet.whole(Z))
    zero = SupportSet.finite(Z, [(0,)])
    assert support_relations_check(zero, zero)
    assert support_relations_check(SupportSet.cosets(Z, [(2,)], [(0,)]), SupportSet.cosets(Z, [(2,)], [(1,)]))
    assert not support_relations_check(SupportSet.whole(Z), SupportSet.cosets(Z, [(2,)], [(0,)]))


def test_support_relations_rejects_mixed_groups():
    import pytest
    with pytest.raises(ValueError):
        support_relations_check(SupportSet.finite(Z, [(0,)]), SupportSet.finite(Z2, [(0, 0)]))


def test_coset_union_requires_finite_index():
    import pytest
    with pytest.raises(ValueError):
        SupportSet.cosets(Z2, [(1, 0)], [(0, 0)])


def test_from_window_detects_non_coset_data():
    import pytest
    win = Z.window(4)
    S = SupportSet.from_window(Z, [d for d in win if d[0] % 2 == 0], win)
    assert S.subgroup.index == 4 or S.contains((6,))
    with pytest.raises(ValueError):
        SupportSet.from_window(Z, [(0,), (1,)], win, subgroup=[(2,)])


degree = st.tuples(st.integers(-9, 9), st.integers(-9, 9), st.integers(0, 5))
G = GradingGroup(2, [6])


@given(degree, degree, degree)
def test_degree_group_laws(a, b, c):
    a, b, c = G.degree(a), G.degree(b), G.degree(c)
    assert G.add(G.add(a, b), c) == G.add(a, G.add(b, c))
    assert G.add(a, G.zero) == a
    assert G.add(a, G.neg(a)) == G.zero
    assert G.add(a, b) == G.add(b, a)


gens = st.lists(st.tuples(st.integers(-6, 6), st.integers(-6, 6)), max_size=4)


@settings(max_examples=60)
@given(gens, gens)
def test_span_idempotent_and_monotone(A, B):
    S = SupportSet.finite(Z2, A)
    H = span_subgroup(S)
    assert Subgroup(Z2, H.basis()) == H
    H2 = span_subgroup(SupportSet.finite(Z2, A + B))
    assert H2.contains_subgroup(H)
    for a in A:
        assert H.contains(a)


@settings(max_examples=40)
@given(st.integers(1, 6), st.sets(st.integers(0, 5), min_size=1))
def test_pointed_reflection_matches_brute_force(n, residues):
    residues = {r % n for r in residues}
    S = SupportSet.cosets(Z, [(n,)], [(r,) for r in residues])
    brute = 0 in residues and all((2 * s - t) % n in residues for s in residues for t in residues)
    assert is_pointed_reflection_subspace(S) == brute
