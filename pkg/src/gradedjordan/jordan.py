"""Quadratic Jordan triple systems, pairs and algebras.

A triple system exposes its carrier degree by degree: ``basis_of_degree``
returns a basis (sparse vectors over ambient keys) of the homogeneous
component.  Finite systems list their degrees; infinite model-backed
systems are inspected through degree windows.  The quadratic operator
is ``P(x, y)``; the triple product is its linearization
{x, y, z} = P(x + z)y - P(x)y - P(z)y.
"""

import random
from itertools import product

import numpy as np

from .exactlin import (BasisCoordinates, GradedMap, GradedSubspace, closure, inverse_matrix,
                       key_order, norton_irreducible, nullspace, solve, sorted_keys, vadd, vcomb,
                       vneg, vscale, vsub)
from .assoc import projective_count, projective_points
from .grading import GradingGroup, SupportSet


class JordanError(ValueError):
    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class NotTripotent(JordanError):
    pass


class NotCandidate(JordanError):
    pass


# ---------------------------------------------------------------------------
# base interface

class JordanTriple:
    field = None
    group = None
    finite = True
    name = "triple"

    def degree_of(self, key):
        raise NotImplementedError

    def keys_of_degree(self, deg):
        raise NotImplementedError

    def basis_of_degree(self, deg):
        return [{k: self.field.one} for k in self.keys_of_degree(deg)]

    def all_degrees(self):
        """Degrees of the carrier (finite systems)."""
        raise NotImplementedError

    def P(self, x, y):
        raise NotImplementedError

    def triple(self, x, y, z):
        return vsub(self.P(vadd(x, z), y), vadd(self.P(x, y), self.P(z, y)))

    def P2(self, x, z, y):
        """Linearized operator P(x, z)y = {x, y, z}."""
        return self.triple(x, y, z)

    # carrier ---------------------------------------------------------

    def degrees(self, radius=None):
        if self.finite:
            return self.all_degrees()
        if radius is None:
            raise ValueError("infinite system: pass a window radius")
        return [d for d in self.group.window(radius) if self.basis_of_degree(d)]

    def basis(self, radius=None):
        out = []
        for d in self.degrees(radius):
            out.extend(self.basis_of_degree(d))
        return out

    def dim(self):
        return len(self.basis()) if self.finite else None

    def carrier(self):
        c = getattr(self, "_carrier", None)
        if c is None:
            c = GradedSubspace(self.field, self.degree_of, self.keys_of_degree, rule=self.basis_of_degree)
            self._carrier = c
        return c

    def element_degree(self, x):
        """Degree of a nonzero homogeneous element (ValueError otherwise)."""
        degs = {self.degree_of(k) for k in x}
        if len(degs) != 1:
            raise ValueError("element is zero or not homogeneous")
        return degs.pop()

    def random_homogeneous(self, rng, deg=None, radius=1, basis_fn=None):
        basis_fn = basis_fn or self.basis_of_degree
        if deg is None:
            degs = [d for d in self.degrees(radius) if basis_fn(d)]
            if not degs:
                return {}
            deg = rng.choice(degs)
        return vcomb((self.field.random(rng), b) for b in basis_fn(deg))

    def random_element(self, rng, radius=1):
        return vcomb((self.field.one, self.random_homogeneous(rng, d))
                     for d in self.degrees(radius) if rng.random() < 0.6)


# ---------------------------------------------------------------------------
# structure-constant backend

class StructureTriple(JordanTriple):
    """Finite triple given by P(b_i)b_j and P(b_i, b_k)b_j (i < k) on basis keys."""

    def __init__(self, field, group, keys, degrees, Pq, T, name="structure_triple"):
        self.field = field
        self.group = group
        self.keys = list(keys)
        self.index = {k: i for i, k in enumerate(self.keys)}
        self.deg = {k: group.degree(degrees[k]) for k in self.keys}
        self.Pq = {kk: v for kk, v in Pq.items() if v}
        self.T = {}
        for (a, c, b), v in T.items():
            if not v:
                continue
            if self.index[a] > self.index[c]:
                a, c = c, a
            self.T[(a, c, b)] = v
        self.name = name
        self._by_degree = {}
        for k in self.keys:
            self._by_degree.setdefault(self.deg[k], []).append(k)
        # per-operator lookup: y-key -> image
        self._P_of = {}
        for (a, b), v in self.Pq.items():
            self._P_of.setdefault(a, {})[b] = v
        self._T_of = {}
        for (a, c, b), v in self.T.items():
            self._T_of.setdefault((a, c), {})[b] = v

    def degree_of(self, key):
        return self.deg[key]

    def keys_of_degree(self, deg):
        return self._by_degree.get(deg, [])

    def all_degrees(self):
        return sorted(self._by_degree, key=key_order)

    def _apply(self, table, y):
        terms = []
        for b, c in y.items():
            v = table.get(b)
            if v:
                terms.append((c, v))
        return vcomb(terms)

    def P(self, x, y):
        terms = []
        items = sorted(x.items(), key=lambda t: self.index[t[0]])
        for i, (a, ca) in enumerate(items):
            tab = self._P_of.get(a)
            if tab:
                terms.append((ca * ca, self._apply(tab, y)))
            for c, cc in items[i + 1:]:
                tab = self._T_of.get((a, c))
                if tab:
                    terms.append((ca * cc, self._apply(tab, y)))
        return vcomb(terms)

    def triple(self, x, y, z):
        two = self.field(2)
        terms = []
        for a, ca in x.items():
            for c, cc in z.items():
                if a == c:
                    tab = self._P_of.get(a)
                    if tab:
                        terms.append((two * ca * cc, self._apply(tab, y)))
                else:
                    key = (a, c) if self.index[a] < self.index[c] else (c, a)
                    tab = self._T_of.get(key)
                    if tab:
                        terms.append((ca * cc, self._apply(tab, y)))
        return vcomb(terms)

    def to_json(self):
        F = self.field

        def vec(v):
            return [[self.index[k], F.format(c)] for k, c in sorted(v.items(), key=lambda t: self.index[t[0]])]

        return {
            "kind": "structure_triple",
            "field": F.to_json(),
            "group": self.group.to_json(),
            "keys": [_key_json(k) for k in self.keys],
            "degrees": [list(self.deg[k]) for k in self.keys],
            "P": [[self.index[a], self.index[b], vec(v)]
                  for (a, b), v in sorted(self.Pq.items(), key=lambda t: (self.index[t[0][0]], self.index[t[0][1]]))],
            "T": [[self.index[a], self.index[c], self.index[b], vec(v)]
                  for (a, c, b), v in sorted(self.T.items(),
                                             key=lambda t: tuple(self.index[k] for k in t[0]))],
        }

    @staticmethod
    def from_json(obj):
        from .exactlin import Field
        F = Field.from_json(obj["field"])
        group = GradingGroup.from_json(obj.get("group", {}))
        keys = [_key_from_json(k) for k in obj["keys"]]
        degrees = {k: tuple(d) for k, d in zip(keys, obj["degrees"])}

        def vec(pairs):
            return {keys[int(i)]: F(c) for i, c in pairs if F(c)}

        Pq = {(keys[a], keys[b]): vec(v) for a, b, v in obj.get("P", [])}
        T = {(keys[a], keys[c], keys[b]): vec(v) for a, c, b, v in obj.get("T", [])}
        return StructureTriple(F, group, keys, degrees, Pq, T, name=obj.get("name", "structure_triple"))


def _key_json(k):
    if isinstance(k, tuple):
        return [_key_json(x) for x in k]
    return k


def _key_from_json(k):
    if isinstance(k, list):
        return tuple(_key_from_json(x) for x in k)
    return k


class Snapshot:
    """A finite structure-constant copy of a triple with maps back and forth."""

    def __init__(self, J, triple, vectors, keys):
        self.source = J
        self.triple = triple
        self.vectors = vectors
        self.keys = keys
        self.coords = BasisCoordinates(J.field, vectors)

    def to_snapshot(self, x):
        c = self.coords(x)
        if c is None:
            raise JordanError("element is outside the snapshot carrier", x)
        return {k: a for k, a in zip(self.keys, c) if a}

    def from_snapshot(self, x):
        idx = {k: i for i, k in enumerate(self.keys)}
        return vcomb((c, self.vectors[idx[k]]) for k, c in x.items())


def snapshot(J, labelled=None, name=None):
    """Structure-constant copy of a finite triple.

    ``labelled`` is an optional list of (label, vector) pairs giving the basis
    (e.g. Peirce-labelled); by default the carrier basis is numbered.
    Products leaving the span raise (no silent truncation).
    """
    if labelled is None:
        vecs = J.basis()
        labelled = [(i, v) for i, v in enumerate(vecs)]
    keys = [k for k, _ in labelled]
    vectors = [v for _, v in labelled]
    coords = BasisCoordinates(J.field, vectors)
    degrees = {k: J.element_degree(v) for k, v in labelled}

    def co(w):
        c = coords(w)
        if c is None:
            raise JordanError("product leaves the snapshot carrier", w)
        return {keys[i]: a for i, a in enumerate(c) if a}

    Pq, T = {}, {}
    n = len(keys)
    for i in range(n):
        for j in range(n):
            Pq[(keys[i], keys[j])] = co(J.P(vectors[i], vectors[j]))
            for k in range(i + 1, n):
                T[(keys[i], keys[k], keys[j])] = co(J.triple(vectors[i], vectors[j], vectors[k]))
    S = StructureTriple(J.field, J.group, keys, degrees, Pq, T, name=name or ("snapshot(%s)" % J.name))
    return Snapshot(J, S, vectors, keys)


def windowed_snapshot(J, radius):
    """Structure-constant copy of the window |deg| <= radius of an infinite triple.

    A product of window elements landing outside the window aborts with an
    overflow error instead of being dropped.
    """
    vecs = J.basis(radius)
    labelled = list(enumerate(vecs))
    keys = [k for k, _ in labelled]
    coords = BasisCoordinates(J.field, vecs)
    degrees = {k: J.element_degree(v) for k, v in labelled}
    Pq, T = {}, {}
    n = len(vecs)

    def co(w):
        for k in w:
            if not J.group.in_window(J.degree_of(k), radius):
                raise JordanError("window overflow: product lands in degree %r" % (J.degree_of(k),), w)
        c = coords(w)
        return {keys[i]: a for i, a in enumerate(c) if a}

    for i in range(n):
        for j in range(n):
            Pq[(i, j)] = co(J.P(vecs[i], vecs[j]))
            for k in range(i + 1, n):
                T[(i, k, j)] = co(J.triple(vecs[i], vecs[j], vecs[k]))
    S = StructureTriple(J.field, J.group, keys, degrees, Pq, T)
    return Snapshot(J, S, vecs, keys)


# ---------------------------------------------------------------------------
# axioms

def _jp1(J, x, y, z):
    return vsub(J.triple(x, y, J.P(x, z)), J.P(x, J.triple(y, x, z)))


def _jp2(J, x, y, z):
    return vsub(J.triple(J.P(x, y), y, z), J.triple(x, J.P(y, x), z))


def _jp3(J, x, y, z):
    return vsub(J.P(J.P(x, y), z), J.P(x, J.P(y, J.P(x, z))))


def _lin_x(f):
    def g(J, x, x2, y, z):
        return vsub(f(J, vadd(x, x2), y, z), vadd(f(J, x, y, z), f(J, x2, y, z)))
    return g


def _lin_y(f):
    def g(J, x, y, y2, z):
        return vsub(f(J, x, vadd(y, y2), z), vadd(f(J, x, y, z), f(J, x, y2, z)))
    return g


AXIOMS = {
    "JP1": (_jp1, 3),
    "JP2": (_jp2, 3),
    "JP3": (_jp3, 3),
    "JP1_lin_x": (_lin_x(_jp1), 4),
    "JP2_lin_x": (_lin_x(_jp2), 4),
    "JP3_lin_x": (_lin_x(_jp3), 4),
    "JP2_lin_y": (_lin_y(_jp2), 4),
    "JP3_lin_y": (_lin_y(_jp3), 4),
}


def _grading_failure(J, x, y):
    """Check P(x)y and the triple product for degree additivity."""
    g = J.group
    if not x or not y:
        return None
    dx, dy = J.element_degree(x), J.element_degree(y)
    want = g.add(g.scale(2, dx), dy)
    for k in J.P(x, y):
        if J.degree_of(k) != want:
            return {"identity": "grading", "witness": [x, y]}
    return None


def axiom_check(J, trials=200, seed=0, radius=1, exhaustive_budget=4000):
    """Verify the quadratic Jordan identities and the grading law.

    Finite systems: every basis substitution when the number of tuples
    is within ``exhaustive_budget`` (basis and pairwise sums for the
    variable x), otherwise seeded samples of basis tuples.  In all cases
    ``trials`` random homogeneous tuples are added.  Infinite systems
    use random homogeneous elements from the degree window.
    Returns a report dict; ``passed`` is False with a witness on failure.
    """
    rng = random.Random(seed)
    checked = {name: 0 for name in AXIOMS}
    checked["grading"] = 0
    basis = J.basis(None if J.finite else radius)
    mode = "random"
    if J.finite:
        n = len(basis)
        pairs = [vadd(basis[i], basis[j]) for i in range(n) for j in range(i + 1, n)]
        xs = basis + pairs
        tuples3 = len(xs) * n * n
        if tuples3 <= exhaustive_budget:
            mode = "exhaustive"
        for name, (f, arity) in AXIOMS.items():
            if arity == 3:
                if mode == "exhaustive":
                    it = product(xs, basis, basis)
                else:
                    it = ((rng.choice(xs), rng.choice(basis), rng.choice(basis)) for _ in range(exhaustive_budget // 8))
            else:
                count = n ** 4
                if count <= exhaustive_budget:
                    it = product(basis, basis, basis, basis)
                else:
                    it = ((rng.choice(basis), rng.choice(basis), rng.choice(basis), rng.choice(basis))
                          for _ in range(exhaustive_budget // 8))
            for args in it:
                if f(J, *args):
                    return _fail_report(name, args, checked, mode)
                checked[name] += 1
        for x in basis:
            for y in basis:
                bad = _grading_failure(J, x, y)
                if bad:
                    return _fail_report("grading", (x, y), checked, mode)
                checked["grading"] += 1
    for _ in range(trials):
        x, x2, y, y2, z = (J.random_homogeneous(rng, radius=radius) for _ in range(5))
        for name, (f, arity) in AXIOMS.items():
            args = (x, y, z) if arity == 3 else ((x, x2, y, z) if "lin_x" in name else (x, y, y2, z))
            if f(J, *args):
                return _fail_report(name, args, checked, mode)
            checked[name] += 1
        if _grading_failure(J, x, y):
            return _fail_report("grading", (x, y), checked, mode)
        checked["grading"] += 1
    return {"passed": True, "checked": checked, "mode": mode,
            "window": None if J.finite else radius, "identities": sorted(checked)}


def _fail_report(name, args, checked, mode):
    return {"passed": False, "failed_identity": name, "witness": list(args), "checked": checked,
            "mode": mode, "identities": sorted(checked)}


def perturbed(J, seed=0):
    """Copy of a finite structure triple with one structure constant changed.

    Keeps trying constants until the axioms break; returns (mutant, changed entry).
    """
    rng = random.Random(seed)
    S = J if isinstance(J, StructureTriple) else snapshot(J).triple
    entries = sorted(S.Pq, key=lambda k: (S.index[k[0]], S.index[k[1]]))
    rng.shuffle(entries)
    for a, b in entries:
        Pq = dict(S.Pq)
        v = dict(Pq[(a, b)])
        k = next(iter(sorted(v, key=lambda t: S.index[t])))
        v[k] = v[k] + S.field.one
        Pq[(a, b)] = v
        M = StructureTriple(S.field, S.group, S.keys, S.deg, Pq, S.T, name="mutant")
        if not axiom_check(M, trials=20, seed=seed, exhaustive_budget=4000)["passed"]:
            return M, (a, b, k)
    raise JordanError("no breaking perturbation found")


# ---------------------------------------------------------------------------
# Peirce decomposition

class Peirce:
    """Peirce projectors and spaces of a degree-0 tripotent."""

    def __init__(self, J, e):
        self.J = J
        self.e = dict(e)
        if J.P(e, e) != self.e:
            raise NotTripotent("element is not a tripotent", e)
        if e and J.element_degree(e) != J.group.zero:
            raise JordanError("Peirce spaces are computed for tripotents of degree 0", e)
        self.spaces = {i: GradedSubspace(J.field, J.degree_of, J.keys_of_degree,
                                         rule=lambda d, i=i: self._rule(i, d)) for i in (0, 1, 2)}
        if J.finite:
            degs = J.all_degrees()
            for s in self.spaces.values():
                s.materialize(degs)

    def E2(self, x):
        return self.J.P(self.e, self.J.P(self.e, x))

    def Lee(self, x):
        return self.J.triple(self.e, self.e, x)

    def E1(self, x):
        return vsub(self.Lee(x), vscale(self.J.field(2), self.E2(x)))

    def E0(self, x):
        return vadd(vsub(x, self.Lee(x)), self.E2(x))

    def project(self, i, x):
        return (self.E0, self.E1, self.E2)[i](x)

    def _rule(self, i, d):
        return [self.project(i, b) for b in self.J.basis_of_degree(d)]

    def space(self, i):
        return self.spaces[i]

    def contains(self, i, x):
        return self.project(i, x) == {k: c for k, c in x.items() if c}

    def dims(self, radius=None):
        degs = self.J.degrees(radius)
        for s in self.spaces.values():
            s.materialize(degs)
        return tuple(sum(self.spaces[i].block(d).dim for d in degs) for i in (2, 1, 0))

    def check_projectors(self, vectors):
        """Idempotent, orthogonal, summing to the identity on ``vectors``; returns failures."""
        fails = []
        for x in vectors:
            parts = [self.project(i, x) for i in (0, 1, 2)]
            if vadd(vadd(parts[0], parts[1]), parts[2]) != {k: c for k, c in x.items() if c}:
                fails.append(("sum", x))
            for i in (0, 1, 2):
                for j in (0, 1, 2):
                    w = self.project(j, parts[i])
                    if (i == j and w != parts[i]) or (i != j and w):
                        fails.append(("E%d E%d" % (j, i), x))
        return fails


def peirce(J, e):
    p = Peirce(J, e)
    return p.spaces[2], p.spaces[1], p.spaces[0]


def peirce_rules_check(J, e, rng, samples=20, radius=1):
    """Sampled Peirce multiplication rules P(J_i)J_j in J_(2i-j), {J_i, J_j, J_k} in J_(i-j+k).

    Spaces with index outside 0..2 are zero.  Returns a list of failures.
    """
    pc = Peirce(J, e)
    fails = []

    def sample(i):
        return pc.project(i, J.random_element(rng, radius))

    def inside(v, t):
        if t < 0 or t > 2:
            return not v
        return pc.contains(t, v)

    for _ in range(samples):
        xs = {i: sample(i) for i in (0, 1, 2)}
        ys = {i: sample(i) for i in (0, 1, 2)}
        for i in (0, 1, 2):
            for j in (0, 1, 2):
                if not inside(J.P(xs[i], ys[j]), 2 * i - j):
                    fails.append(("P(J%d)J%d" % (i, j), [xs[i], ys[j]]))
                for k in (0, 1, 2):
                    if not inside(J.triple(xs[i], ys[j], xs[k]), i - j + k):
                        fails.append(("{J%d,J%d,J%d}" % (i, j, k), [xs[i], ys[j], xs[k]]))
    return fails


# ---------------------------------------------------------------------------
# triangles

def is_tripotent(J, x):
    return J.P(x, x) == {k: c for k, c in x.items() if c}


def triangle_failures(J, u, e1, e2, cube_check=None):
    """List of failed triangle conditions (empty when (u; e1, e2) is a triangle)."""
    fails = []
    for name, x in (("u", u), ("e1", e1), ("e2", e2)):
        if not x:
            fails.append("%s is zero" % name)
            continue
        if J.element_degree(x) != J.group.zero:
            fails.append("%s is not of degree 0" % name)
        if not is_tripotent(J, x):
            fails.append("%s is not a tripotent" % name)
    if fails:
        return fails
    if cube_check or (cube_check is None and J.field.char == 2):
        for name, x in (("u", u), ("e1", e1), ("e2", e2)):
            if J.P(x, J.P(x, x)) != J.P(x, x):
                fails.append("%s^3 != %s" % (name, name))
    p1, p2, pu = Peirce(J, e1), Peirce(J, e2), Peirce(J, u)
    if not p2.contains(0, e1):
        fails.append("e1 not in J0(e2)")
    if not p1.contains(0, e2):
        fails.append("e2 not in J0(e1)")
    if not pu.contains(2, e1):
        fails.append("e1 not in J2(u)")
    if not pu.contains(2, e2):
        fails.append("e2 not in J2(u)")
    if not p1.contains(1, u):
        fails.append("u not in J1(e1)")
    if not p2.contains(1, u):
        fails.append("u not in J1(e2)")
    if J.P(u, e1) != e2:
        fails.append("P(u)e1 != e2")
    if J.P(u, e2) != e1:
        fails.append("P(u)e2 != e1")
    if J.triple(e1, u, e2) != u:
        fails.append("P(e1, e2)u != u")
    return fails


def triangle_check(J, u, e1, e2):
    fails = triangle_failures(J, u, e1, e2)
    return {"passed": not fails, "failures": fails}


def triangle_complete(J, u, e1):
    """Triangle criterion: u, e1 tripotents, u in J1(e1), e1 in J2(u) give (u; e1, P(u)e1)."""
    if not u or not is_tripotent(J, u):
        raise JordanError("u is not a tripotent", u)
    if not e1 or not is_tripotent(J, e1):
        raise JordanError("e1 is not a tripotent", e1)
    if not Peirce(J, e1).contains(1, u):
        raise JordanError("criterion fails: u is not in J1(e1)", u)
    if not Peirce(J, u).contains(2, e1):
        raise JordanError("criterion fails: e1 is not in J2(u)", e1)
    e2 = J.P(u, e1)
    fails = triangle_failures(J, u, e1, e2)
    if fails:
        raise JordanError("triangle identities fail: %s" % "; ".join(fails), (u, e1, e2))
    return u, e1, e2


def is_triangulated(J, e1, e2, radius=None):
    """J = J2(e1 + e2) on the carrier (windowed for infinite systems)."""
    e = vadd(e1, e2)
    pe = Peirce(J, e)
    for b in J.basis(radius):
        if pe.E2(b) != b:
            return False, b
    return True, None


# ---------------------------------------------------------------------------
# envelope words: formal combinations of products L(x_1) ... L(x_n)

class Word:
    """Linear combination of products of operators L(x) on M.

    Each term is (coefficient, [(i, x), ...]) meaning L(x_1) ... L(x_n)
    with x_r in J_i acting by m -> {x, e_i, m}.
    """

    def __init__(self, terms=()):
        self.terms = [(c, list(f)) for c, f in terms if c]

    @staticmethod
    def L(x, i=1, coeff=1):
        return Word([(coeff, [(i, x)])])

    @staticmethod
    def identity(field):
        return Word([(field.one, [])])

    def __add__(self, other):
        return Word(self.terms + other.terms)

    def __sub__(self, other):
        return Word(self.terms + [(-c, f) for c, f in other.terms])

    def __mul__(self, other):
        return Word([(a * b, fa + fb) for a, fa in self.terms for b, fb in other.terms])

    def scale(self, c):
        return Word([(c * a, f) for a, f in self.terms])

    def reversed(self):
        return Word([(c, list(reversed(f))) for c, f in self.terms])

    def apply(self, T, m):
        out = []
        for c, factors in self.terms:
            v = m
            for i, x in reversed(factors):
                v = T.dot(i, x, v)
                if not v:
                    break
            out.append((c, v))
        return vcomb(out)

    def map_factors(self, func):
        return Word([(c, [func(i, x) for i, x in f]) for c, f in self.terms])


# ---------------------------------------------------------------------------
# triangulated systems

class TriangulatedSystem:
    """A triple J with a triangle (u; e1, e2) such that J = J1 + M + J2."""

    def __init__(self, J, u, e1, e2=None, check=True, radius=1):
        self.J = J
        self.field = J.field
        self.group = J.group
        self.u = dict(u)
        self.e1 = dict(e1)
        self.e2 = dict(J.P(u, e1) if e2 is None else e2)
        self.e = vadd(self.e1, self.e2)
        self.radius = radius
        if check:
            fails = triangle_failures(J, self.u, self.e1, self.e2)
            if fails:
                raise JordanError("not a triangle: %s" % "; ".join(fails), (u, e1, e2))
            ok, w = is_triangulated(J, self.e1, self.e2, None if J.finite else radius)
            if not ok:
                raise JordanError("J is not triangulated: J2(e) misses an element", w)
        self.peirce1 = Peirce(J, self.e1)
        self.peirce2 = Peirce(J, self.e2)
        F = J.field
        self.spaces = {
            1: self.peirce1.spaces[2],
            2: self.peirce2.spaces[2],
            "m": GradedSubspace(F, J.degree_of, J.keys_of_degree,
                                rule=lambda d: [self.project_m(b) for b in J.basis_of_degree(d)]),
        }
        if J.finite:
            for s in self.spaces.values():
                s.materialize(J.all_degrees())

    # components ---------------------------------------------------------

    def e_(self, i):
        return self.e1 if i == 1 else self.e2

    def project(self, i, x):
        if i == "m":
            return self.project_m(x)
        return (self.peirce1 if i == 1 else self.peirce2).E2(x)

    def project_m(self, x):
        return vsub(x, vadd(self.peirce1.E2(x), self.peirce2.E2(x)))

    def components(self, x):
        return self.project(1, x), self.project_m(x), self.project(2, x)

    def basis_of(self, part, deg):
        return self.spaces[part].component(deg)

    def degrees_of(self, part, radius=None):
        return [d for d in self.J.degrees(radius if radius is not None else self.radius)
                if self.basis_of(part, d)]

    def random_in(self, part, rng, radius=None, deg=None):
        radius = self.radius if radius is None else radius
        return self.J.random_homogeneous(rng, deg=deg, radius=radius,
                                         basis_fn=lambda d: self.basis_of(part, d))

    def require(self, part, x, what):
        if self.project(part, x) != {k: c for k, c in x.items() if c}:
            raise JordanError("%s must lie in the Peirce space %s" % (what, part), x)

    def component_label(self, key):
        """Peirce label of an ambient key (keys aligned with the Peirce decomposition)."""
        cache = self.__dict__.setdefault("_labels", {})
        lab = cache.get(key)
        if lab is None:
            x = {key: self.field.one}
            for part in (1, "m", 2):
                if self.project(part, x) == x:
                    lab = part
                    break
            else:
                raise JordanError("key is not Peirce-homogeneous", key)
            cache[key] = lab
        return lab

    # derived operations -------------------------------------------------

    def bar(self, x):
        return self.J.P(self.e, x)

    def star(self, x):
        return self.J.P(self.e, self.J.P(self.u, x))

    def Q(self, i, m, n=None):
        ej = self.e_(3 - i)
        if n is None:
            return self.J.P(m, ej)
        return self.J.triple(m, ej, n)

    def dot(self, i, x, m):
        """x_i . m = {x_i, e_i, m}."""
        return self.J.triple(x, self.e_(i), m)

    def T(self, i, m):
        return self.Q(i, self.u, m)

    def square(self, i, x):
        return self.J.P(x, self.e_(i))

    def Gamma(self, i, x, m):
        """Gamma_i(x; m) = L(T_i(x . m)) - L(T_i(m)) L(x) as an envelope word."""
        return Word.L(self.T(i, self.dot(i, x, m)), i, self.field.one) - \
            Word([(self.field.one, [(i, self.T(i, m)), (i, x)])])

    def Delta(self, i, x, m):
        """Delta_i(x; m) = L(P(m)P(u)x) - L(Q_i(m)) L(x)."""
        J = self.J
        return Word.L(J.P(m, J.P(self.u, x)), i, self.field.one) - \
            Word([(self.field.one, [(i, self.Q(i, m)), (i, x)])])

    def Delta_lin(self, i, x, m, n):
        """Linearization in m: Delta_i(x; m + n) - Delta_i(x; m) - Delta_i(x; n)."""
        return self.Delta(i, x, vadd(m, n)) - self.Delta(i, x, m) - self.Delta(i, x, n)

    def pi_word(self, c):
        """c^pi from c + c^pi = L(T_1(cu)) (a word c over L(J_1))."""
        return Word.L(self.T(1, c.apply(self, self.u)), 1, self.field.one) - c

    def derived(self, selector, *args):
        """Named access to the derived operations with Peirce-space checks."""
        s = selector
        if s in ("Q_1", "Q_2"):
            i = int(s[-1])
            for a in args:
                self.require("m", a, "argument of Q_i")
            return self.Q(i, *args)
        if s == "bar":
            return self.bar(args[0])
        if s == "star":
            return self.star(args[0])
        if s == "L":
            i, x, m = args
            self.require(i, x, "x_i")
            self.require("m", m, "m")
            return self.dot(i, x, m)
        if s in ("T_1", "T_2"):
            self.require("m", args[0], "argument of T_i")
            return self.T(int(s[-1]), args[0])
        if s == "square":
            i, x = args
            self.require(i, x, "x_i")
            return self.square(i, x)
        if s in ("Gamma_1", "Gamma_2", "Delta_1", "Delta_2"):
            i = int(s[-1])
            x, m = args[:2]
            self.require(i, x, "x_i")
            self.require("m", m, "m")
            w = self.Gamma(i, x, m) if s.startswith("Gamma") else self.Delta(i, x, m)
            if len(args) > 2:
                return w.apply(self, args[2])
            return w
        raise JordanError("unknown derived operation %r" % (selector,))


# ---------------------------------------------------------------------------
# identity battery

def identity_battery(T, trials=100, seed=0, word_length=3):
    """Evaluate the multiplication formulas of a triangulated system on random tuples.

    Returns {formula: {"checked": n, "failures": [...]}} and an overall flag.
    """
    rng = random.Random(seed)
    J = T.J
    F = T.field
    one = F.one
    results = {}

    def record(tag, ok, witness):
        r = results.setdefault(tag, {"checked": 0, "failures": []})
        r["checked"] += 1
        if not ok and len(r["failures"]) < 3:
            r["failures"].append(witness)

    def rand(part):
        return T.random_in(part, rng)

    def rand_word():
        n = rng.randint(1, word_length)
        return Word([(one, [(1, rand(1)) for _ in range(n)])])

    for _ in range(trials):
        m, n = rand("m"), rand("m")
        for i in (1, 2):
            j = 3 - i
            xi, yi, yj = rand(i), rand(i), rand(j)
            # (01)
            lhs = J.P(m, n)
            rhs = vsub(T.dot(i, T.Q(i, m, T.bar(n)), m), T.dot(j, T.Q(j, m), T.bar(n)))
            record("01", lhs == rhs, {"i": i, "m": m, "n": n})
            # (02)
            a = J.triple(m, n, xi)
            b = T.Q(i, m, T.dot(i, xi, T.bar(n)))
            c = J.triple(m, T.dot(i, T.bar(xi), n), T.e_(i))
            record("02", a == b == c, {"i": i, "m": m, "n": n, "x": xi})
            # (03)
            a = J.triple(m, xi, n)
            b = T.Q(j, m, T.dot(i, T.bar(xi), n))
            c = T.Q(j, n, T.dot(i, T.bar(xi), m))
            record("03", a == b == c, {"i": i, "m": m, "n": n, "x": xi})
            # (04)
            record("04", J.triple(xi, yi, m) == T.dot(i, xi, T.dot(i, T.bar(yi), m)),
                   {"i": i, "x": xi, "y": yi, "m": m})
            # (05)
            a = J.triple(xi, m, yj)
            b = T.dot(i, xi, T.dot(j, yj, T.bar(m)))
            c = T.dot(j, yj, T.dot(i, xi, T.bar(m)))
            record("05", a == b == c, {"i": i, "x": xi, "y": yj, "m": m})
            # (1)
            ok = T.dot(i, T.e_(i), m) == m
            ok = ok and T.dot(i, J.P(xi, yi), m) == T.dot(i, xi, T.dot(i, T.bar(yi), T.dot(i, xi, m)))
            record("1", ok, {"i": i, "x": xi, "y": yi, "m": m})
            # (4)
            ok = T.star(T.T(i, m)) == T.T(j, T.star(m)) == T.T(j, m)
            ok = ok and T.star(T.Q(i, m)) == T.Q(j, T.star(m))
            record("4", ok, {"i": i, "m": m})
            # (5)
            record("5", T.star(m) == vsub(T.dot(i, T.T(i, m), T.u), m), {"i": i, "m": m})
            # (7)
            lhs = vsub(T.dot(j, T.star(xi), m), T.dot(i, xi, m))
            mid = vsub(T.dot(i, T.T(i, m), T.dot(i, xi, T.u)), T.dot(i, T.T(i, T.dot(i, xi, m)), T.u))
            rhs = vneg(T.Gamma(i, xi, m).apply(T, T.u))
            record("7", lhs == mid == rhs, {"i": i, "x": xi, "m": m})
        # envelope formulas
        c, d = rand_word(), rand_word()
        x1 = rand(1)
        cpi = c.reversed()
        cu = c.apply(T, T.u)
        # (pi): the formula-(3) involution reverses products
        lhs = T.pi_word(c * d).apply(T, m)
        rhs = (T.pi_word(d) * T.pi_word(c)).apply(T, m)
        record("pi", lhs == rhs and T.pi_word(c).apply(T, m) == cpi.apply(T, m), {"m": m})
        # (pi2)
        record("pi2", T.Q(2, c.apply(T, m), n) == T.Q(2, m, cpi.apply(T, n)), {"m": m, "n": n})
        # (2)
        lhs = (c * Word.L(x1, 1, one) * cpi).apply(T, m)
        rhs = T.dot(1, J.P(cu, J.P(T.u, x1)), m)
        record("2", lhs == rhs, {"x": x1, "m": m})
        # (3)
        lhs = vadd(c.apply(T, m), cpi.apply(T, m))
        rhs = T.dot(1, T.T(1, cu), m)
        record("3", lhs == rhs, {"m": m})
        # (3.5)
        record("3.5", T.Q(2, cu, m) == T.T(2, cpi.apply(T, m)), {"m": m})
        # (6)
        cstar_u = J.P(T.u, c.apply(T, J.P(T.u, T.u)))
        ok = T.star(cu) == cstar_u == cpi.apply(T, T.u)
        cs = c.map_factors(lambda i, x: (3 - i, T.star(x)))
        ok = ok and c.apply(T, cs.apply(T, T.u)) == cs.apply(T, cu)
        record("6", ok, {"m": m})
        # (8)
        G = T.Gamma(1, x1, m)
        lhs = (G * G.reversed()).apply(T, m)
        t1 = T.dot(2, T.Q(2, m), (Word.L(x1, 1, one) * G - G * Word.L(x1, 1, one)).apply(T, T.u))
        Lq1 = Word.L(T.Q(1, m), 1, one)
        Lx = Word.L(x1, 1, one)
        t2 = T.dot(1, x1, (Lq1 * Lx - Lx * Lq1).apply(T, m))
        Lp = Word.L(J.P(m, J.P(T.u, x1)), 1, one)
        t3 = (Lx * Lp - Lp * Lx).apply(T, m)
        record("8", lhs == vadd(vadd(t1, t2), t3), {"x": x1, "m": m})
    passed = all(not r["failures"] for r in results.values())
    return {"passed": passed, "formulas": results, "trials": trials, "seed": seed}


# ---------------------------------------------------------------------------
# ideals, simplicity, degeneracy

def _require_finite(J):
    if not J.finite:
        raise JordanError("this computation needs a finite-dimensional system")


def _has_nonzero_product(J):
    B = J.basis()
    for x in B:
        for y in B:
            if J.P(x, y):
                return True
    for i in range(len(B)):
        for k in range(i + 1, len(B)):
            for y in B:
                if J.triple(B[i], y, B[k]):
                    return True
    return False


def ideal_operators(J):
    B = J.basis()
    ops = []
    for i, b in enumerate(B):
        ops.append(GradedMap(lambda y, b=b: J.P(b, y), name="P(b)"))
        for c in B[i + 1:]:
            ops.append(GradedMap(lambda y, b=b, c=c: J.triple(b, y, c), name="P(b,c)"))
    for b in B:
        for c in B:
            ops.append(GradedMap(lambda z, b=b, c=c: J.triple(b, c, z), name="L(b,c)"))
    return ops


def ideal_closure(J, generators):
    """Smallest graded ideal containing ``generators``: P(I)J + P(J)I + {J,J,I} in I."""
    _require_finite(J)
    B = J.basis()
    seed = GradedSubspace(J.field, J.degree_of, J.keys_of_degree, generators)
    hook = None
    if J.field.char == 2:
        hook = lambda v: [J.P(v, b) for b in B]
    return closure(seed, ideal_operators(J), add=hook)


def _operator_matrices(J):
    B = J.basis()
    coords = BasisCoordinates(J.field, B)
    n = len(B)

    def mat(func):
        cols = []
        for b in B:
            c = coords(func(b))
            if c is None:
                raise JordanError("operator leaves the carrier")
            cols.append(c)
        return [[cols[j][i] for j in range(n)] for i in range(n)]

    mats = [mat(op) for op in ideal_operators(J)]
    degs = J.all_degrees()
    if len(degs) > 1:
        for d in degs:
            mats.append(mat(lambda x, d=d: {k: c for k, c in x.items() if J.degree_of(k) == d}))
    return B, mats


def is_graded_simple(J, budget=400, seed=0):
    """(True | False | "unknown", witness ideal basis or None, method)."""
    _require_finite(J)
    if not _has_nonzero_product(J):
        raise NotCandidate("P(J)J = 0: not a candidate for simplicity")
    F = J.field
    total = J.dim()
    degs = J.all_degrees()
    dims = [len(J.basis_of_degree(d)) for d in degs]
    if F.is_finite:
        count = sum(projective_count(F, n) for n in dims)
    else:
        count = None if any(n > 1 for n in dims) else sum(dims)
    if count is not None and count <= budget:
        for d in degs:
            B = J.basis_of_degree(d)
            points = projective_points(F, len(B)) if F.is_finite else [[F.one]]
            for v in points:
                x = vcomb(zip(v, B))
                I = ideal_closure(J, [x])
                if I.dim < total:
                    return False, I.basis(), "enumeration"
        return True, None, "enumeration"
    B, mats = _operator_matrices(J)
    verdict, basis = norton_irreducible(F, mats, random.Random(seed))
    if verdict is None:
        return "unknown", None, "norton"
    if verdict:
        return True, None, "norton"
    gens = [vcomb((c, B[i]) for i, c in v.items()) for v in basis]
    I = ideal_closure(J, gens)
    if I.dim < total:
        return False, I.basis(), "norton"
    return "unknown", None, "norton"


def _trivial_in_degree(J, basis_d, test_basis, budget):
    """Projective points x in span(basis_d) with P(x)b = 0 for all b in test_basis.

    Returns a list of elements or None when the search is not exact.
    """
    F = J.field
    r = len(basis_d)
    if r == 0:
        return []
    if r == 1 and not F.is_finite:
        x = basis_d[0]
        return [x] if all(not J.P(x, b) for b in test_basis) else []
    if not F.is_finite or projective_count(F, r) > budget:
        return None
    # P(x)b = sum x_a^2 P(v_a)b + sum_{a<c} x_a x_c P(v_a, v_c)b
    outkeys = {}
    columns = []
    monos = [(a, a) for a in range(r)] + [(a, c) for a in range(r) for c in range(a + 1, r)]
    for a, c in monos:
        col = {}
        for j, b in enumerate(test_basis):
            img = J.P(basis_d[a], b) if a == c else J.triple(basis_d[a], b, basis_d[c])
            for k, v in img.items():
                idx = outkeys.setdefault((j, k), len(outkeys))
                col[idx] = int(v)
        columns.append(col)
    p = F.p
    Cm = np.zeros((len(monos), max(1, len(outkeys))), dtype=np.int64)
    for mi, col in enumerate(columns):
        for idx, v in col.items():
            Cm[mi, idx] = v % p
    pts = np.array([[int(c) for c in v] for v in projective_points(F, r)], dtype=np.int64)
    found = []
    chunk = 20000
    for s in range(0, len(pts), chunk):
        X = pts[s:s + chunk]
        mono = np.stack([X[:, a] * X[:, c] % p for a, c in monos], axis=1)
        vals = mono.dot(Cm) % p
        for row in np.nonzero(~vals.any(axis=1))[0]:
            found.append(vcomb((F(int(c)), basis_d[a]) for a, c in enumerate(X[row])))
    return found


def trivial_elements(J, budget=200000, T=None):
    """Homogeneous trivial elements (P(x)J = 0) up to scalars, per degree.

    Returns (elements, exact).  Exact by enumeration over finite fields
    within the budget.  When a triangulated structure T is supplied and
    direct enumeration is too large, candidates are restricted to
    z1 + m + z2 with z_i trivial in J_i and m in the radicals of Q_1, Q_2,
    which contain every trivial element.
    """
    _require_finite(J)
    B = J.basis()
    out = []
    exact = True
    for d in J.all_degrees():
        Bd = J.basis_of_degree(d)
        found = _trivial_in_degree(J, Bd, B, budget)
        if found is None and T is not None:
            found = _trivial_via_peirce(T, d, budget)
        if found is None:
            exact = False
            continue
        out.extend(found)
    return out, exact


def _trivial_via_peirce(T, d, budget):
    J = T.J
    F = J.field
    parts = {}
    for i in (1, 2):
        Bi = T.basis_of(i, d)
        sub_basis = []
        for dd in J.all_degrees():
            sub_basis.extend(T.basis_of(i, dd))
        found = _trivial_in_degree(J, Bi, sub_basis, budget)
        if found is None:
            return None
        parts[i] = found
    R = q_radical(T, d)
    # the cone of trivial elements in J_i is closed under scalars: include multiples
    cands = []
    scal = F.elements() if F.is_finite else [F.one]

    def cone(points):
        out = [{}]
        for x in points:
            for c in scal:
                if c:
                    out.append(vscale(c, x))
        return out

    c1, c2 = cone(parts[1]), cone(parts[2])
    if F.is_finite:
        rvecs = [vcomb(zip(v, R)) for v in product(F.elements(), repeat=len(R))]
    else:
        if R:
            return None
        rvecs = [{}]
    if len(c1) * len(c2) * len(rvecs) > budget:
        return None
    B = J.basis()
    for z1 in c1:
        for z2 in c2:
            for m in rvecs:
                z = vadd(vadd(z1, m), z2)
                if z and all(not J.P(z, b) for b in B):
                    cands.append(z)
    # normalize to projective representatives
    out = []
    for z in cands:
        lead = min(z, key=key_order)
        zn = vscale(1 / z[lead], z)
        if zn not in out:
            out.append(zn)
    return out


def q_radical(T, d):
    """Basis of {m in M^d : Q_i(m, M) = 0 = Q_i(m), i = 1, 2}."""
    J = T.J
    F = J.field
    Md = T.basis_of("m", d)
    if not Md:
        return []
    Mall = []
    for dd in J.all_degrees() if J.finite else J.degrees(T.radius):
        Mall.extend(T.basis_of("m", dd))
    rows = {}
    for a, m in enumerate(Md):
        for i in (1, 2):
            for j, n in enumerate(Mall):
                for k, c in T.Q(i, m, n).items():
                    rows.setdefault((i, j, k), [F.zero] * len(Md))[a] = c
    mat = [rows[k] for k in sorted(rows, key=key_order)]
    ker = nullspace(mat, len(Md), F) if mat else [[F.one if i == j else F.zero for i in range(len(Md))]
                                                  for j in range(len(Md))]
    vecs = [vcomb(zip(v, Md)) for v in ker]
    if F.char == 2 and vecs:
        vals = [vadd(T.Q(1, v), T.Q(2, v)) for v in vecs]
        keys = sorted({k for v in vals for k in v}, key=key_order)
        mat = [[v.get(k, F.zero) for v in vals] for k in keys]
        if mat:
            vecs = [vcomb(zip(w, vecs)) for w in nullspace(mat, len(vecs), F)]
    return vecs


def quotient_triple(J, I):
    """J / I for a graded ideal I; keys are non-pivot keys of I degree by degree."""
    _require_finite(J)
    keys, degrees = [], {}
    for d in J.all_degrees():
        blk = I.block(d)
        Bd = J.basis_of_degree(d)
        if all(len(b) == 1 and next(iter(b.values())) == J.field.one for b in Bd):
            comp = [k for k in blk.complement_keys() if {k: J.field.one} in Bd]
        else:
            raise JordanError("quotients need key-aligned carriers (take a snapshot first)")
        for k in comp:
            keys.append(k)
            degrees[k] = d
    kset = set(keys)
    Pq, T = {}, {}
    one = J.field.one
    for a in keys:
        for b in keys:
            Pq[(a, b)] = {k: c for k, c in I.reduce(J.P({a: one}, {b: one})).items() if k in kset}
    for i, a in enumerate(keys):
        for c in keys[i + 1:]:
            for b in keys:
                T[(a, c, b)] = {k: v for k, v in I.reduce(J.triple({a: one}, {b: one}, {c: one})).items()
                                if k in kset}
    return StructureTriple(J.field, J.group, keys, degrees, Pq, T, name="quotient")


def degeneracy(J, budget=200000, T=None):
    """Trivial elements and the graded McCrimmon radical GM(J).

    Iterates: ideal generated by homogeneous trivial elements, quotient,
    repeat, until the quotient has none.  Returns a dict with the first
    trivial witness, the radical (graded subspace of J), the final
    quotient and an exactness flag.
    """
    _require_finite(J)
    if isinstance(J, StructureTriple):
        S, snap = J, None
    else:
        snap = snapshot(J)
        S = snap.triple
    F = J.field
    radical = GradedSubspace(F, S.degree_of, S.keys_of_degree)
    witness = None
    exact = True
    cur = S
    first = True
    for _ in range(len(S.keys) + 1):
        Tcur = None
        if first and T is not None and snap is not None:
            Tcur = _transport_triangle(T, snap)
        elif first and T is not None:
            Tcur = T
        triv, ex = trivial_elements(cur, budget, Tcur)
        exact = exact and ex
        first = False
        if not triv:
            break
        if witness is None:
            witness = triv[0]
        I = ideal_closure(cur, triv)
        for v in I.basis():
            radical.add(v)
        radical = ideal_closure(S, radical.basis())
        cur = quotient_triple(S, radical)
    else:
        raise JordanError("radical iteration did not stabilize")
    if snap is not None:
        witness = snap.from_snapshot(witness) if witness else None
        rad_out = GradedSubspace(F, J.degree_of, J.keys_of_degree,
                                 [snap.from_snapshot(v) for v in radical.basis()])
    else:
        rad_out = radical
    return {"trivial_witness": witness, "radical": rad_out, "quotient": cur, "exact": exact,
            "snapshot": snap}


def _transport_triangle(T, snap):
    S = snap.triple
    try:
        return TriangulatedSystem(S, snap.to_snapshot(T.u), snap.to_snapshot(T.e1), snap.to_snapshot(T.e2))
    except JordanError:
        return None


def is_graded_nondegenerate(J, budget=200000, T=None):
    triv, exact = trivial_elements(J, budget, T)
    if triv:
        return False, triv[0]
    return (True if exact else "unknown"), None


# ---------------------------------------------------------------------------
# invertibility and isotopes

def _operator_block(J, func, src, dst):
    """Matrix of func: span(src) -> span(dst), or None if the image leaves span(dst)."""
    F = J.field
    if not dst:
        return [] if all(not func(b) for b in src) else None
    coords = BasisCoordinates(F, dst)
    cols = []
    for b in src:
        c = coords(func(b))
        if c is None:
            return None
        cols.append(c)
    return [[cols[j][i] for j in range(len(src))] for i in range(len(dst))]


def invertible(J, x, radius=1, basis_fn=None):
    """(True, inverse) | (False, None) for homogeneous x, inside the subsystem given by basis_fn.

    x is invertible when P(x) is bijective; then x^{-1} = P(x)^{-1} x.
    Infinite systems are checked on the degree window (labelled by the caller).
    """
    if not x:
        return False, None
    basis_fn = basis_fn or J.basis_of_degree
    g = J.group
    if len({J.degree_of(k) for k in x}) > 1:
        return _invertible_inhomogeneous(J, x, basis_fn)
    lam = J.element_degree(x)
    degs = J.degrees(None if J.finite else radius)
    if J.finite:
        degs = [d for d in degs if basis_fn(d)]
    for mu in degs:
        src = basis_fn(mu)
        dst = basis_fn(g.add(g.scale(2, lam), mu))
        if len(src) != len(dst):
            return False, None
        if not src:
            continue
        M = _operator_block(J, lambda y: J.P(x, y), src, dst)
        if M is None or inverse_matrix(M, J.field) is None:
            return False, None
    dst = basis_fn(g.neg(lam))
    src_img = [J.P(x, b) for b in dst]
    if not dst:
        return False, None
    coords = BasisCoordinates(J.field, basis_fn(lam))
    A = [coords(v) for v in src_img]
    if any(a is None for a in A):
        return False, None
    rhs = coords(x)
    sol = solve([[A[j][i] for j in range(len(dst))] for i in range(len(rhs))], rhs, J.field)
    if sol is None:
        return False, None
    return True, vcomb(zip(sol.particular, dst))


def _invertible_inhomogeneous(J, x, basis_fn):
    if not J.finite:
        raise JordanError("invertibility of inhomogeneous elements needs a finite system", x)
    B = []
    for d in J.all_degrees():
        B.extend(basis_fn(d))
    M = _operator_block(J, lambda y: J.P(x, y), B, B)
    if M is None or inverse_matrix(M, J.field) is None:
        return False, None
    coords = BasisCoordinates(J.field, B)
    sol = solve(M, coords(x), J.field)
    return True, vcomb(zip(sol.particular, B))


class IsotopeTriple(JordanTriple):
    """J^(v): P^(v)(x)y = P(x)P(v)y, optionally regraded.

    ``shift`` maps a Peirce label (1, "m", 2) to the degree offset d such
    that new degree = old degree - d; it needs a triangulated structure
    ``T`` whose keys are Peirce-aligned.
    """

    def __init__(self, J, v, T=None, shift=None):
        self.base = J
        self.v = dict(v)
        self.field = J.field
        self.group = J.group
        self.finite = J.finite
        self.T = T
        self.shift = shift
        self.name = "isotope(%s)" % J.name

    def _off(self, part):
        return self.shift.get(part, self.group.zero) if self.shift else self.group.zero

    def degree_of(self, key):
        d = self.base.degree_of(key)
        if not self.shift:
            return d
        return self.group.sub(d, self._off(self.T.component_label(key)))

    def keys_of_degree(self, deg):
        if not self.shift:
            return self.base.keys_of_degree(deg)
        out = []
        for part in (1, "m", 2):
            for k in self.base.keys_of_degree(self.group.add(deg, self._off(part))):
                if self.T.component_label(k) == part and k not in out:
                    out.append(k)
        return out

    def basis_of_degree(self, deg):
        if not self.shift:
            return self.base.basis_of_degree(deg)
        out = []
        for part in (1, "m", 2):
            out.extend(self.T.basis_of(part, self.group.add(deg, self._off(part))))
        return out

    def all_degrees(self):
        if not self.shift:
            return self.base.all_degrees()
        degs = set()
        for d in self.base.all_degrees():
            for part in (1, "m", 2):
                if self.T.basis_of(part, d):
                    degs.add(self.group.sub(d, self._off(part)))
        return sorted(degs, key=key_order)

    def P(self, x, y):
        return self.base.P(x, self.base.P(self.v, y))

    def triple(self, x, y, z):
        return self.base.triple(x, self.base.P(self.v, y), z)


def isotope(J, v, radius=1):
    ok, _ = invertible(J, v, radius)
    if not ok:
        raise JordanError("isotope needs an invertible element", v)
    return IsotopeTriple(J, v)


def special_isotope(T, m, radius=1):
    """J^(v) for v = e1 + Q_2(m)^{-1}, triangulated by (m; e1, Q_2(m)) and regraded.

    With m in M^lam the new components are J1^mu, M^(mu + lam), J2^(mu + 2 lam).
    """
    J = T.J
    g = J.group
    lam = J.element_degree(m)
    q2 = T.Q(2, m)
    ok, q2inv = invertible(J, q2, radius, basis_fn=lambda d: T.basis_of(2, d))
    if not ok:
        raise JordanError("Q_2(m) is not invertible in J_2", m)
    # e1 and Q_2(m)^-1 are invertible in the Peirce spaces J_1 and J_2, hence v is invertible
    v = vadd(T.e1, q2inv)
    shift = {1: g.zero, "m": lam, 2: g.scale(2, lam)}
    Jt = IsotopeTriple(J, v, T=T, shift=shift)
    Tt = TriangulatedSystem(Jt, m, T.e1, q2, radius=radius)
    return Jt, Tt


# ---------------------------------------------------------------------------
# Jordan algebras and pairs

class JordanAlgebra(JordanTriple):
    """Unital quadratic Jordan algebra viewed through U_x y = P(x)y."""

    def __init__(self, triple, unit, check=True, radius=1):
        self.base = triple
        self.unit = dict(unit)
        self.field = triple.field
        self.group = triple.group
        self.finite = triple.finite
        self.name = "algebra(%s)" % triple.name
        if check:
            for b in triple.basis(None if triple.finite else radius):
                if triple.P(self.unit, b) != b:
                    raise JordanError("U_1 is not the identity", b)
            if self.unit and triple.element_degree(self.unit) != triple.group.zero:
                raise JordanError("unit is not of degree 0", self.unit)

    def degree_of(self, key):
        return self.base.degree_of(key)

    def keys_of_degree(self, deg):
        return self.base.keys_of_degree(deg)

    def basis_of_degree(self, deg):
        return self.base.basis_of_degree(deg)

    def all_degrees(self):
        return self.base.all_degrees()

    def U(self, x, y):
        return self.base.P(x, y)

    P = U

    def triple(self, x, y, z):
        return self.base.triple(x, y, z)

    def square(self, x):
        return self.U(x, self.unit)


def algebra_to_triple(A):
    """The underlying triple system T(A): same module, P = U."""
    return A.base


class JordanPair:
    """Graded Jordan pair (V+, V-) with quadratic maps Q^sigma: V^sigma x V^-sigma -> V^sigma."""

    def __init__(self, plus, minus, Qplus, Qminus, name="pair"):
        self.spaces = {"+": plus, "-": minus}
        self.Qmaps = {"+": Qplus, "-": Qminus}
        self.field = plus.field
        self.group = plus.group
        self.finite = plus.finite
        self.name = name

    @staticmethod
    def from_triple(T):
        """(T, T) with Q^+ = Q^- = P."""
        return JordanPair(T, T, T.P, T.P, name="pair(%s)" % T.name)

    def Q(self, sigma, x, y):
        return self.Qmaps[sigma](x, y)

    def triple(self, sigma, x, y, z):
        Q = self.Qmaps[sigma]
        return vsub(Q(vadd(x, z), y), vadd(Q(x, y), Q(z, y)))


class PolarizedTriple(JordanTriple):
    """T(V) = V+ + V- with P(x)y = Q(x+)y- + Q(x-)y+; keys ("+", k), ("-", k)."""

    def __init__(self, V):
        self.V = V
        self.field = V.field
        self.group = V.group
        self.finite = V.finite
        self.name = "polarized(%s)" % V.name

    def degree_of(self, key):
        return self.V.spaces[key[0]].degree_of(key[1])

    def keys_of_degree(self, deg):
        return [(s, k) for s in "+-" for k in self.V.spaces[s].keys_of_degree(deg)]

    def basis_of_degree(self, deg):
        return [self.embed(s, b) for s in "+-" for b in self.V.spaces[s].basis_of_degree(deg)]

    def all_degrees(self):
        degs = set(self.V.spaces["+"].all_degrees()) | set(self.V.spaces["-"].all_degrees())
        return sorted(degs, key=key_order)

    @staticmethod
    def embed(sigma, x):
        return {(sigma, k): c for k, c in x.items()}

    @staticmethod
    def part(sigma, x):
        return {k[1]: c for k, c in x.items() if k[0] == sigma}

    def double(self, x):
        return vadd(self.embed("+", x), self.embed("-", x))

    def P(self, x, y):
        xp, xm = self.part("+", x), self.part("-", x)
        yp, ym = self.part("+", y), self.part("-", y)
        out = {}
        if xp and ym:
            out.update(self.embed("+", self.V.Q("+", xp, ym)))
        if xm and yp:
            out.update(self.embed("-", self.V.Q("-", xm, yp)))
        return out

    def triple(self, x, y, z):
        xp, xm = self.part("+", x), self.part("-", x)
        zp, zm = self.part("+", z), self.part("-", z)
        yp, ym = self.part("+", y), self.part("-", y)
        out = {}
        if xp and zp and ym:
            out.update(self.embed("+", self.V.triple("+", xp, ym, zp)))
        if xm and zm and yp:
            out.update(self.embed("-", self.V.triple("-", xm, yp, zm)))
        return out


def pair_to_triple(V):
    return PolarizedTriple(V)


def polarized_double(T):
    """T + T, the polarized triple of the pair (T, T)."""
    return PolarizedTriple(JordanPair.from_triple(T))


def algebra_from_pair(V, e_minus, radius=1):
    """Homotope J = V^{+(e-)}: U_x y = Q(x)Q(e-)y on V+, unit the inverse of e-."""
    plus = V.spaces["+"]
    minus = V.spaces["-"]
    # e- invertible: Q(e-): V+ -> V- bijective; unit e+ solves Q(e-)e+ = e-
    g = V.group
    lam = minus.element_degree(e_minus) if e_minus else None
    if lam is None:
        raise JordanError("homotope needs an invertible element", e_minus)
    degs = plus.degrees(None if V.finite else radius)
    for mu in degs:
        src = plus.basis_of_degree(mu)
        dst = minus.basis_of_degree(g.add(g.scale(2, lam), mu))
        if len(src) != len(dst):
            raise JordanError("homotope needs an invertible element", e_minus)
        if src:
            M = _operator_block(plus, lambda y: V.Q("-", e_minus, y), src, dst)
            if M is None or inverse_matrix(M, V.field) is None:
                raise JordanError("homotope needs an invertible element", e_minus)
    src = plus.basis_of_degree(g.neg(lam))
    coords = BasisCoordinates(V.field, minus.basis_of_degree(lam))
    A = [coords(V.Q("-", e_minus, b)) for b in src]
    rhs = coords(e_minus)
    sol = solve([[A[j][i] for j in range(len(src))] for i in range(len(rhs))], rhs, V.field)
    if sol is None:
        raise JordanError("homotope needs an invertible element", e_minus)
    e_plus = vcomb(zip(sol.particular, src))

    class _Homotope(JordanTriple):
        def __init__(self):
            self.field = V.field
            self.group = V.group
            self.finite = V.finite
            self.name = "homotope(%s)" % V.name

        def degree_of(self, key):
            return plus.degree_of(key)

        def keys_of_degree(self, deg):
            return plus.keys_of_degree(deg)

        def basis_of_degree(self, deg):
            return plus.basis_of_degree(deg)

        def all_degrees(self):
            return plus.all_degrees()

        def P(self, x, y):
            return V.Q("+", x, V.Q("-", e_minus, y))

    return JordanAlgebra(_Homotope(), e_plus, radius=radius)


# ---------------------------------------------------------------------------
# predicates of triangulated systems

def _division_slices(J, part_fn, degs, budget, radius):
    """All nonzero homogeneous elements in the slices invertible?  (verdict, witness)."""
    F = J.field
    unknown = False
    for d in degs:
        B = part_fn(d)
        if not B:
            continue
        if len(B) == 1:
            cands = [B[0]]
        elif F.is_finite and projective_count(F, len(B)) <= budget:
            cands = [vcomb(zip(v, B)) for v in projective_points(F, len(B))]
        else:
            cands = list(B)
            unknown = True
        for x in cands:
            ok, _ = invertible(J, x, radius, basis_fn=part_fn)
            if not ok:
                return False, x
    return ("unknown" if unknown else True), None


def _m_invertible(T, degs, budget, radius):
    J = T.J
    F = J.field
    unknown = False
    for d in degs:
        B = T.basis_of("m", d)
        if not B:
            continue
        if len(B) == 1:
            cands = [B[0]]
        elif F.is_finite and projective_count(F, len(B)) <= budget:
            cands = [vcomb(zip(v, B)) for v in projective_points(F, len(B))]
        else:
            cands = list(B)
            unknown = True
        for m in cands:
            for i in (1, 2):
                ok, _ = invertible(J, T.Q(i, m), radius, basis_fn=lambda dd, i=i: T.basis_of(i, dd))
                if not ok:
                    return False, m
    return ("unknown" if unknown else True), None


def triple_predicates(T, radius=None, budget=2000):
    """Faithfulness, division-triangulation, torus property and supports.

    Infinite systems are evaluated on the degree window (reported).
    """
    J = T.J
    F = J.field
    radius = T.radius if radius is None else radius
    degs = J.degrees(None if J.finite else radius)
    # faithful: x1 . u = 0 forces x1 = 0
    faithful = True
    for d in degs:
        B = T.basis_of(1, d)
        if not B:
            continue
        imgs = [T.dot(1, b, T.u) for b in B]
        keys = sorted_keys({k for v in imgs for k in v})
        mat = [[v.get(k, F.zero) for v in imgs] for k in keys]
        if not keys or nullspace(mat, len(B), F):
            faithful = False
            break
    div1, w1 = _division_slices(J, lambda d: T.basis_of(1, d), degs, budget, radius)
    div2, w2 = _division_slices(J, lambda d: T.basis_of(2, d), degs, budget, radius)
    divm, wm = _m_invertible(T, degs, budget, radius)
    verdicts = [div1, div2, divm]
    if False in verdicts:
        division = False
    elif "unknown" in verdicts:
        division = "unknown"
    else:
        division = True
    small = all(len(T.basis_of(p, d)) <= 1 for d in degs for p in (1, 2, "m"))
    if division is True:
        torus = small
    elif division is False:
        torus = False
    else:
        torus = "unknown" if small else False
    L = [d for d in degs if T.basis_of(1, d)]
    S = [d for d in degs if T.basis_of("m", d)]
    g = J.group
    if J.finite:
        Ls, Ss = SupportSet.finite(g, L), SupportSet.finite(g, S)
    else:
        win = g.window(radius)
        Ls, Ss = _window_support(g, L, win), _window_support(g, S, win)
    return {
        "faithful": faithful,
        "division_triangulated": division,
        "division_witness": w1 or w2 or wm,
        "torus": torus,
        "supports": {"L": Ls, "S": Ss},
        "support_lists": {"L": L, "S": S},
        "window": None if J.finite else radius,
    }


def _window_support(g, support, win):
    for sub in ([d for d in support], None):
        try:
            return SupportSet.from_window(g, support, win, sub)
        except ValueError:
            continue
    return None


def triple_from_json(obj):
    if obj.get("kind") != "structure_triple":
        raise JordanError("unknown triple kind %r" % (obj.get("kind"),))
    return StructureTriple.from_json(obj)
