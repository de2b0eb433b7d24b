"""Graded associative coordinate algebras.

Two backends share one interface:

* structure constants: a finite basis of keys with degrees and a
  multiplication table key x key -> sparse vector;
* monomial: keys are degrees themselves (quantum tori, group algebras),
  every product of monomials is a scalar times a monomial.  These are
  infinite dimensional when the grading group has free rank and are
  only inspected through degree windows.

Matrix algebras and exchange doubles are built on top of any backend.
An algebra element is a sparse dict key -> scalar.
"""

import random
from itertools import product

from .exactlin import (GradedSubspace, GradedMap, closure, key_order, norton_irreducible,
                       sorted_keys, vadd, vcomb, vsub)
from .grading import GradingGroup


class InvalidPresentation(ValueError):
    """Presentation data violating an algebra axiom; carries a witness."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class GradedAlgebra:
    """Common interface for unital graded associative algebras."""

    field = None
    group = None
    finite = True
    name = "algebra"

    def mul_keys(self, a, b):
        raise NotImplementedError

    def degree_of(self, key):
        raise NotImplementedError

    def keys_of_degree(self, deg):
        raise NotImplementedError

    def unit(self):
        raise NotImplementedError

    def all_keys(self):
        """Basis keys (finite algebras only)."""
        raise NotImplementedError

    def degrees(self):
        return sorted({self.degree_of(k) for k in self.all_keys()}, key=key_order)

    def generators(self):
        """Elements generating the algebra (used for centre computations)."""
        return [{k: self.field.one} for k in self.all_keys()]

    # element arithmetic -------------------------------------------------

    def mul(self, x, y):
        out = {}
        for a, ca in x.items():
            for b, cb in y.items():
                for k, c in self.mul_keys(a, b).items():
                    s = out.get(k)
                    s = ca * cb * c if s is None else s + ca * cb * c
                    if s:
                        out[k] = s
                    else:
                        out.pop(k, None)
        return out

    def mul_many(self, *xs):
        out = xs[0]
        for x in xs[1:]:
            out = self.mul(out, x)
        return out

    def commutator(self, x, y):
        return vsub(self.mul(x, y), self.mul(y, x))

    def one(self):
        return self.unit()

    def basis_element(self, key):
        return {key: self.field.one}

    def keys_in_window(self, radius):
        if self.finite:
            return self.all_keys()
        out = []
        for d in self.group.window(radius):
            out.extend(self.keys_of_degree(d))
        return out

    def degrees_in_window(self, radius):
        if self.finite:
            return self.degrees()
        return [d for d in self.group.window(radius) if self.keys_of_degree(d)]

    def subspace(self, vectors=(), rule=None):
        return GradedSubspace(self.field, self.degree_of, self.keys_of_degree, vectors, rule=rule)

    def full_subspace(self):
        return self.subspace([{k: self.field.one} for k in self.all_keys()])

    @property
    def dim(self):
        return len(self.all_keys()) if self.finite else None

    def random_homogeneous(self, rng, deg=None, radius=2):
        if deg is None:
            degs = self.degrees_in_window(radius)
            deg = rng.choice(degs)
        keys = self.keys_of_degree(deg)
        return {k: c for k in keys for c in [self.field.random(rng)] if c}

    def is_commutative(self, radius=1):
        keys = self.keys_in_window(radius)
        return all(not self.commutator({a: self.field.one}, {b: self.field.one})
                   for a in keys for b in keys)


# ---------------------------------------------------------------------------
# structure-constant backend

class StructureConstantAlgebra(GradedAlgebra):
    """Finite-dimensional algebra given by a multiplication table on basis keys."""

    def __init__(self, field, group, keys, degrees, table, unit, name="structure_constants", check=True):
        self.field = field
        self.group = group
        self.keys = sorted_keys(keys)
        self.degrees_map = {k: group.degree(degrees[k]) for k in self.keys}
        self.table = {}
        for (a, b), v in table.items():
            v = {k: field(c) for k, c in v.items() if field(c)}
            if v:
                self.table[(a, b)] = v
        self._unit = {k: field(c) for k, c in unit.items() if field(c)}
        self.name = name
        self._by_degree = {}
        for k in self.keys:
            self._by_degree.setdefault(self.degrees_map[k], []).append(k)
        if check:
            self.validate()

    def mul_keys(self, a, b):
        return self.table.get((a, b), {})

    def degree_of(self, key):
        return self.degrees_map[key]

    def keys_of_degree(self, deg):
        return self._by_degree.get(deg, [])

    def all_keys(self):
        return list(self.keys)

    def unit(self):
        return dict(self._unit)

    def validate(self):
        g = self.group
        for (a, b), v in self.table.items():
            d = g.add(self.degrees_map[a], self.degrees_map[b])
            for k in v:
                if self.degrees_map[k] != d:
                    raise InvalidPresentation("product %r*%r leaves degree %r" % (a, b, d), (a, b))
        for a, b, c in product(self.keys, repeat=3):
            x, y, z = ({a: self.field.one}, {b: self.field.one}, {c: self.field.one})
            if vsub(self.mul(self.mul(x, y), z), self.mul(x, self.mul(y, z))):
                raise InvalidPresentation("multiplication table is not associative", (a, b, c))
        for k in self.keys:
            x = {k: self.field.one}
            if self.mul(self._unit, x) != x or self.mul(x, self._unit) != x:
                raise InvalidPresentation("unit law fails", (k,))


def truncated_polynomial_algebra(field, n, group=None, x_degree=None):
    """F[x]/(x^n); trivially graded unless a degree for x is given."""
    group = group or GradingGroup(0)
    xd = group.degree(x_degree) if x_degree is not None else group.zero
    keys = list(range(n))
    degrees = {i: group.scale(i, xd) for i in keys}
    table = {}
    for i in keys:
        for j in keys:
            if i + j < n:
                table[(i, j)] = {i + j: 1}
    return StructureConstantAlgebra(field, group, keys, degrees, table, {0: 1}, name="F[x]/(x^%d)" % n)


def field_algebra(field, group=None):
    """The ground field as a one-dimensional algebra concentrated in degree 0."""
    group = group or GradingGroup(0)
    return StructureConstantAlgebra(field, group, [0], {0: group.zero}, {(0, 0): {0: 1}}, {0: 1},
                                    name=field.name)


# ---------------------------------------------------------------------------
# monomial backend

class MonomialAlgebra(GradedAlgebra):
    """Keys are degrees; t^a t^b = c(a, b) t^(a+b)."""

    def cocycle(self, a, b):
        raise NotImplementedError

    def mul_keys(self, a, b):
        c = self.cocycle(a, b)
        if not c:
            return {}
        return {self.group.add(a, b): c}

    def degree_of(self, key):
        return key

    def keys_of_degree(self, deg):
        return [self.group.degree(deg)]

    def unit(self):
        return {self.group.zero: self.field.one}

    def all_keys(self):
        if self.finite:
            return self.group.window(0)
        raise ValueError("infinite-dimensional algebra: use a degree window")

    def monomial(self, deg, coeff=None):
        return {self.group.degree(deg): self.field.one if coeff is None else self.field(coeff)}

    def inverse_monomial(self, deg):
        deg = self.group.degree(deg)
        inv = self.group.neg(deg)
        c = self.cocycle(deg, inv)
        return {inv: 1 / c}


class QuantumTorus(MonomialAlgebra):
    """Quantum torus on t_1..t_n with t_i t_j = q_ij t_j t_i, normal order t_1 first."""

    def __init__(self, field, q, name=None):
        n = len(q)
        self.field = field
        self.q = [[field(x) for x in row] for row in q]
        for i in range(n):
            if len(self.q[i]) != n:
                raise InvalidPresentation("q-matrix is not square")
            if self.q[i][i] != 1:
                raise InvalidPresentation("q_ii must be 1", (i, i))
            for j in range(n):
                if self.q[i][j] * self.q[j][i] != 1:
                    raise InvalidPresentation("q_ij q_ji must be 1", (i, j))
        self.n = n
        self.group = GradingGroup(n)
        self.finite = n == 0
        self.name = name or "quantum_torus"

    def cocycle(self, a, b):
        # t^a t^b: move t_j^{b_j} left past t_i^{a_i} for i > j
        c = self.field.one
        for i in range(self.n):
            for j in range(i):
                e = a[i] * b[j]
                if e:
                    c = c * self.q[i][j] ** e
        return c

    def commutation_scalar(self, a, b):
        """beta with t^a t^b = beta t^b t^a."""
        return self.cocycle(a, b) / self.cocycle(b, a)

    def generators(self):
        out = []
        for i in range(self.n):
            e = tuple(1 if j == i else 0 for j in range(self.n))
            out.append(self.monomial(e))
            out.append(self.monomial(tuple(-x for x in e)))
        return out


class GroupAlgebra(MonomialAlgebra):
    """Group algebra k[Lambda] of a finitely generated abelian group."""

    def __init__(self, field, group, name=None):
        self.field = field
        self.group = group
        self.finite = group.free_rank == 0
        self.name = name or "k[%r]" % (group,)

    def cocycle(self, a, b):
        return self.field.one

    def generators(self):
        out = []
        n = self.group.length
        for i in range(n):
            e = tuple(1 if j == i else 0 for j in range(n))
            out.append(self.monomial(e))
            out.append(self.monomial(self.group.neg(e)))
        return out


class SubgroupAlgebra(MonomialAlgebra):
    """Group algebra of a subgroup Gamma of Lambda, graded inside Lambda.

    Used for Laurent coefficient rings such as Q[s, s^-1] with s of degree 2
    in Lambda = Z.  ``basis`` lists generators of Gamma (free, independent).
    """

    def __init__(self, field, group, basis, name=None):
        from .grading import Subgroup
        self.field = field
        self.group = group
        self.basis = [group.degree(b) for b in basis]
        self.sub = Subgroup(group, self.basis)
        self.finite = group.free_rank == 0
        self.name = name or "k[Gamma]"

    def cocycle(self, a, b):
        return self.field.one

    def keys_of_degree(self, deg):
        deg = self.group.degree(deg)
        return [deg] if self.sub.contains(deg) else []

    def all_keys(self):
        if self.finite:
            return [d for d in self.group.window(0) if self.sub.contains(d)]
        raise ValueError("infinite-dimensional algebra: use a degree window")

    def generators(self):
        out = []
        for b in self.basis:
            out.append(self.monomial(b))
            out.append(self.monomial(self.group.neg(b)))
        return out


# ---------------------------------------------------------------------------
# matrix algebras and exchange doubles

class MatrixAlgebra(GradedAlgebra):
    """Mat_n(B); keys (i, j, b) with b a key of B, degree of b."""

    def __init__(self, base, n, name=None):
        self.base = base
        self.n = n
        self.field = base.field
        self.group = base.group
        self.finite = base.finite
        self.name = name or "Mat_%d(%s)" % (n, base.name)

    def mul_keys(self, a, b):
        i, j, x = a
        k, l, y = b
        if j != k:
            return {}
        return {(i, l, z): c for z, c in self.base.mul_keys(x, y).items()}

    def degree_of(self, key):
        return self.base.degree_of(key[2])

    def keys_of_degree(self, deg):
        bk = self.base.keys_of_degree(deg)
        return [(i, j, x) for i in range(self.n) for j in range(self.n) for x in bk]

    def all_keys(self):
        return [(i, j, x) for i in range(self.n) for j in range(self.n) for x in self.base.all_keys()]

    def unit(self):
        u = self.base.unit()
        return {(i, i, x): c for i in range(self.n) for x, c in u.items()}

    def entry(self, x, i, j):
        return {k[2]: c for k, c in x.items() if k[0] == i and k[1] == j}

    def from_entries(self, entries):
        """Element from a dict (i, j) -> B-element."""
        out = {}
        for (i, j), b in entries.items():
            for x, c in b.items():
                if c:
                    out[(i, j, x)] = c
        return out

    def generators(self):
        if self.finite:
            return super().generators()
        out = []
        one = self.base.unit()
        for i in range(self.n):
            for j in range(self.n):
                out.append(self.from_entries({(i, j): one}))
        for g in self.base.generators():
            out.append(self.from_entries({(i, i): g for i in range(self.n)}))
        return out


EXCHANGE_MODES = {
    # mode: (number of slots, which slots use the opposite product)
    "pi_exchange": (2, (False, True)),
    "pi_exchange_involutive": (2, (False, True)),
    "bar_exchange": (2, (False, False)),
    "quadruple": (4, (False, True, False, True)),
}


class ExchangeDouble(GradedAlgebra):
    """Direct sums B + B^op (+ B + B^op) realizing the exchange constructions.

    Keys are (slot, b).  Slots flagged as opposite multiply in reverse.
    """

    def __init__(self, base, mode):
        if mode not in EXCHANGE_MODES:
            raise InvalidPresentation("unknown exchange mode %r" % (mode,))
        self.base = base
        self.mode = mode
        self.slots, self.opposite = EXCHANGE_MODES[mode]
        self.field = base.field
        self.group = base.group
        self.finite = base.finite
        self.name = "%s(%s)" % (mode, base.name)

    def mul_keys(self, a, b):
        s, x = a
        t, y = b
        if s != t:
            return {}
        prod = self.base.mul_keys(y, x) if self.opposite[s] else self.base.mul_keys(x, y)
        return {(s, z): c for z, c in prod.items()}

    def degree_of(self, key):
        return self.base.degree_of(key[1])

    def keys_of_degree(self, deg):
        bk = self.base.keys_of_degree(deg)
        return [(s, x) for s in range(self.slots) for x in bk]

    def all_keys(self):
        return [(s, x) for s in range(self.slots) for x in self.base.all_keys()]

    def unit(self):
        u = self.base.unit()
        return {(s, x): c for s in range(self.slots) for x, c in u.items()}

    def embed(self, slot, b):
        return {(slot, x): c for x, c in b.items()}

    def component(self, x, slot):
        return {k[1]: c for k, c in x.items() if k[0] == slot}

    def tuple_element(self, parts):
        out = {}
        for s, b in enumerate(parts):
            out.update(self.embed(s, b))
        return out

    def generators(self):
        if self.finite:
            return super().generators()
        out = []
        for s in range(self.slots):
            for g in self.base.generators():
                out.append(self.embed(s, g))
        return out


# ---------------------------------------------------------------------------
# morphisms

class Morphism:
    """Linear map of an algebra given on basis keys; ``anti`` for antiautomorphisms."""

    def __init__(self, algebra, on_key, anti=False, name="morphism"):
        self.algebra = algebra
        self.on_key = on_key
        self.anti = anti
        self.name = name

    def __call__(self, x):
        return vcomb((c, self.on_key(k)) for k, c in x.items())

    apply = __call__

    def as_map(self):
        return GradedMap(self, self.algebra.group.zero, self.name)

    def is_identity(self, keys):
        return all(self.on_key(k) == {k: self.algebra.field.one} for k in keys)


def identity_morphism(A, anti=False):
    one = A.field.one
    return Morphism(A, lambda k: {k: one}, anti=anti, name="id")


def reversal_involution(A):
    """pi_rev(t_1^l1 ... t_n^ln) = t_n^ln ... t_1^l1 on a quantum torus."""
    n = A.n
    for i in range(n):
        for j in range(n):
            if A.q[i][j] ** 2 != 1:
                raise InvalidPresentation("reversal needs q_ij = +-1", (i, j))

    def on_key(lam):
        out = A.unit()
        for i in reversed(range(n)):
            e = tuple(lam[i] if j == i else 0 for j in range(n))
            out = A.mul(out, {e: A.field.one})
        return out

    return Morphism(A, on_key, anti=True, name="reversal")


def transpose_involution(M, base_pi=None):
    """(X^{pi t})_{ij} = pi(X_{ji}) on Mat_n(B)."""
    base_pi = base_pi or identity_morphism(M.base, anti=True)

    def on_key(key):
        i, j, x = key
        return {(j, i, y): c for y, c in base_pi.on_key(x).items()}

    return Morphism(M, on_key, anti=True, name="transpose")


def exchange_morphisms(E, base_pi=None, base_bar=None):
    """The (pi, bar) pair attached to an exchange double.

    pi_exchange:            pi(b1,b2) = (b2,b1),          bar componentwise
    pi_exchange_involutive: pi(b1,b2) = (b2,b1),          bar(b1,b2) = (b2^i, b1^i)
    bar_exchange:           pi componentwise,             bar(b1,b2) = (b2,b1)
    quadruple:              pi(a1..a4) = (a2,a1,a4,a3),   bar(a1..a4) = (a3,a4,a1,a2)
    """
    B = E.base
    base_bar = base_bar or identity_morphism(B)
    base_pi = base_pi or identity_morphism(B, anti=True)
    mode = E.mode

    def embed(slot, v):
        return {(slot, x): c for x, c in v.items()}

    if mode == "pi_exchange":
        def pi(key):
            s, x = key
            return {(1 - s, x): E.field.one}

        def bar(key):
            s, x = key
            return embed(s, base_bar.on_key(x))
    elif mode == "pi_exchange_involutive":
        def pi(key):
            s, x = key
            return {(1 - s, x): E.field.one}

        def bar(key):
            # base_pi plays the involution iota of B
            s, x = key
            return embed(1 - s, base_pi.on_key(x))
    elif mode == "bar_exchange":
        def pi(key):
            s, x = key
            return embed(s, base_pi.on_key(x))

        def bar(key):
            s, x = key
            return {(1 - s, x): E.field.one}
    else:
        def pi(key):
            s, x = key
            return {(s ^ 1, x): E.field.one}

        def bar(key):
            s, x = key
            return {((s + 2) % 4, x): E.field.one}
    return Morphism(E, pi, anti=True, name="exchange_pi"), Morphism(E, bar, anti=False, name="exchange_bar")


def table_morphism(A, table, anti, name="table"):
    """Morphism from an explicit key -> element table (missing keys map to 0)."""
    tab = {k: {kk: A.field(c) for kk, c in v.items()} for k, v in table.items()}
    return Morphism(A, lambda k: tab.get(k, {}), anti=anti, name=name)


class MorphismPair:
    """The involution pi and the period-two automorphism bar of a coordinate algebra."""

    def __init__(self, pi, bar):
        self.pi = pi
        self.bar = bar

    def verify(self, keys):
        """Check the pair axioms on basis keys; returns a list of (law, witness)."""
        A = self.pi.algebra
        one = A.field.one
        fails = []
        pi, bar = self.pi, self.bar
        for k in keys:
            x = {k: one}
            d = A.degree_of(k)
            for name, m in (("pi", pi), ("bar", bar)):
                if any(A.degree_of(kk) != d for kk in m(x)):
                    fails.append(("%s has degree 0" % name, [k]))
            if pi(pi(x)) != x:
                fails.append(("pi^2 = id", [k]))
            if bar(bar(x)) != x:
                fails.append(("bar^2 = id", [k]))
            if pi(bar(x)) != bar(pi(x)):
                fails.append(("pi bar = bar pi", [k]))
        for a in keys:
            for b in keys:
                x, y = {a: one}, {b: one}
                xy = A.mul(x, y)
                if pi(xy) != A.mul(pi(y), pi(x)):
                    fails.append(("pi(xy) = pi(y)pi(x)", [a, b]))
                if bar(xy) != A.mul(bar(x), bar(y)):
                    fails.append(("bar(xy) = bar(x)bar(y)", [a, b]))
        if pi(A.unit()) != A.unit() or bar(A.unit()) != A.unit():
            fails.append(("morphisms fix 1", []))
        return fails


# ---------------------------------------------------------------------------
# coordinate systems

def hermitian_part(A, pi):
    """Lazy graded subspace H(A, pi) (fixed vectors of pi, degreewise)."""
    from .exactlin import nullspace

    def rule(deg):
        keys = A.keys_of_degree(deg)
        if not keys:
            return []
        idx = {k: i for i, k in enumerate(keys)}
        n = len(keys)
        cols = []
        for k in keys:
            col = [A.field.zero] * n
            for kk, c in pi.on_key(k).items():
                col[idx[kk]] = col[idx[kk]] + c
            col[idx[k]] = col[idx[k]] - A.field.one
            cols.append(col)
        rows = [list(r) for r in zip(*cols)]
        return [{keys[i]: c for i, c in enumerate(v) if c} for v in nullspace(rows, n, A.field)]

    return A.subspace(rule=rule)


class CoordinateSystem:
    """(A, A0, pi, bar) with A0 ample; see ``make_coordinate_system``."""

    def __init__(self, A, pi, bar, A0, diagonal, window=None, report=None):
        self.A = A
        self.pi = pi
        self.bar = bar
        self.A0 = A0
        self.diagonal = diagonal
        self.window = window
        self.report = report or {}

    @property
    def field(self):
        return self.A.field

    @property
    def group(self):
        return self.A.group

    def a0_basis(self, deg):
        return self.A0.component(deg)


class CoordinateSystemError(ValueError):
    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


def make_coordinate_system(A, pi, bar, A0="hermitian", window=1, check_radius=None):
    """Build and verify a coordinate system.

    ``A0`` is "hermitian" (the full hermitian part H(A, pi)) or an explicit
    GradedSubspace (or list of vectors).  For infinite algebras the checks
    run on keys of degrees within ``window`` and are labelled windowed.
    Ampleness a A0 a^pi in A0 is verified on the spanning family
    b a0 b^pi, (b + b') a0 (b + b')^pi, which suffices because the
    condition is quadratic in a.
    """
    F = A.field
    one = F.one
    if isinstance(A0, str):
        if A0 != "hermitian":
            raise ValueError("unknown A0 choice %r" % (A0,))
        A0 = hermitian_part(A, pi)
    elif not isinstance(A0, GradedSubspace):
        A0 = A.subspace(list(A0))
    radius = window if check_radius is None else check_radius
    keys = A.keys_in_window(radius)
    degs = sorted({A.degree_of(k) for k in keys}, key=key_order)
    A0.materialize(degs)
    pair = MorphismPair(pi, bar)
    fails = pair.verify(keys)
    if fails:
        raise CoordinateSystemError("morphism pair invalid: %s" % fails[0][0], fails[0][1])
    if not A0.contains(A.unit()):
        raise CoordinateSystemError("1 is not in A0", A.unit())
    a0_basis = []
    for d in degs:
        a0_basis.extend(A0.component(d))
    for v in a0_basis:
        if pi(v) != v:
            raise CoordinateSystemError("A0 is not inside H(A, pi)", v)
        if not A0.contains(bar(v)):
            raise CoordinateSystemError("A0 is not bar-stable", v)
    for i, a in enumerate(keys):
        xa = {a: one}
        for b in keys[i:]:
            xb = {b: one}
            s = vadd(xa, xb)
            for a0 in a0_basis:
                for y in ((xa,) if a == b else (xa, s)):
                    w = A.mul(A.mul(y, a0), pi(y))
                    if not A0.contains(w):
                        raise CoordinateSystemError("A0 is not ample", {"a": y, "a0": a0})
    diagonal = diagonal_flag(A, A0, radius)
    report = {"window": None if A.finite else radius, "checked_keys": len(keys)}
    return CoordinateSystem(A, pi, bar, A0, diagonal, None if A.finite else radius, report)


def subalgebra_generated(A, vectors, radius=None):
    """Subalgebra generated by ``vectors`` (and 1).

    For infinite algebras, products are explored only inside the window of
    the given radius; the result is then a subspace of the true
    subalgebra restricted to the window.
    """
    gens = [v for v in vectors if v]
    sub = A.subspace([A.unit()] + gens)
    if A.finite:
        ops = [GradedMap(lambda x, g=g: A.mul(x, g)) for g in gens]
        return closure(sub, ops)
    g = A.group

    def clip(x):
        return {k: c for k, c in x.items() if g.in_window(A.degree_of(k), radius)}

    ops = [GradedMap(lambda x, gg=gg: clip(A.mul(x, gg))) for gg in gens]
    return closure(sub, ops)


def diagonal_flag(A, A0, radius=1):
    """Does A0 generate A?  True/False for finite algebras; windowed otherwise."""
    if A.finite:
        basis = A0.basis()
        sub = subalgebra_generated(A, basis)
        return sub.dim == A.dim
    basis = []
    for d in A.group.window(radius):
        basis.extend(A0.component(d))
    sub = subalgebra_generated(A, basis, radius)
    if all(sub.contains(gen) for gen in A.generators() if all(A.group.in_window(A.degree_of(k), radius) for k in gen)):
        return True
    return "unknown"


# ---------------------------------------------------------------------------
# structural invariants

def inverse(A, x):
    """Two-sided inverse of a homogeneous element, or None."""
    from .exactlin import solve
    if not x:
        return None
    degs = {A.degree_of(k) for k in x}
    if len(degs) != 1:
        raise ValueError("inverse() expects a homogeneous element")
    d = degs.pop()
    keys = A.keys_of_degree(A.group.neg(d))
    one = A.unit()
    rows_keys = sorted_keys(set(A.keys_of_degree(A.group.zero)))
    idx = {k: i for i, k in enumerate(rows_keys)}
    cols = []
    for k in keys:
        p = A.mul(x, {k: A.field.one})
        col = [A.field.zero] * len(rows_keys)
        for kk, c in p.items():
            col[idx[kk]] = c
        cols.append(col)
    if not cols:
        return None
    M = [list(r) for r in zip(*cols)]
    rhs = [one.get(k, A.field.zero) for k in rows_keys]
    sol = solve(M, rhs, A.field)
    if sol is None:
        return None
    y = {k: c for k, c in zip(keys, sol.particular) if c}
    if A.mul(y, x) != one:
        return None
    return y


def projective_points(field, n):
    """Nonzero vectors of F^n with first nonzero coordinate 1 (finite fields)."""
    els = field.elements()
    for lead in range(n):
        for rest in product(els, repeat=n - lead - 1):
            v = [field.zero] * lead + [field.one] + list(rest)
            yield v


def projective_count(field, n):
    p = field.p
    return (p ** n - 1) // (p - 1)


def centre(A, degs):
    """Z(A) restricted to the given degrees (commutation with the generators)."""
    from .exactlin import nullspace
    Z = A.subspace()
    gens = A.generators()
    for d in degs:
        keys = A.keys_of_degree(d)
        if not keys:
            continue
        cols = []
        out_keys = {}
        for k in keys:
            img = {}
            for gi, gen in enumerate(gens):
                for kk, c in A.commutator({k: A.field.one}, gen).items():
                    img[(gi, kk)] = c
            cols.append(img)
            for kk in img:
                out_keys.setdefault(kk, len(out_keys))
        rows = [[col.get(kk, A.field.zero) for col in cols] for kk in sorted(out_keys, key=key_order)]
        if not rows:
            for k in keys:
                Z.add({k: A.field.one})
            continue
        for v in nullspace(rows, len(keys), A.field):
            Z.add({keys[i]: c for i, c in enumerate(v) if c})
    return Z


def commutator_span(A, degs, radius=None):
    """[A, A] restricted to the given degrees."""
    C = A.subspace()
    if A.finite:
        keys = A.all_keys()
        for a in keys:
            for b in keys:
                w = A.commutator({a: A.field.one}, {b: A.field.one})
                if w and A.degree_of(next(iter(w))) in degs:
                    C.add(w)
        return C
    g = A.group
    window = A.keys_in_window(radius)
    for d in degs:
        for a in window:
            rest = g.sub(d, A.degree_of(a))
            for b in A.keys_of_degree(rest):
                w = A.commutator({a: A.field.one}, {b: A.field.one})
                if w:
                    C.add(w)
    return C


def division_graded(A, degs, budget=20000):
    """Every nonzero homogeneous element invertible?  (True/False/"unknown", witness)."""
    F = A.field
    unknown = False
    for d in degs:
        keys = A.keys_of_degree(d)
        if not keys:
            continue
        if len(keys) == 1:
            x = {keys[0]: F.one}
            if inverse(A, x) is None:
                return False, x
            continue
        if F.is_finite and projective_count(F, len(keys)) <= budget:
            for v in projective_points(F, len(keys)):
                x = {k: c for k, c in zip(keys, v) if c}
                if inverse(A, x) is None:
                    return False, x
            continue
        for k in keys:
            if inverse(A, {k: F.one}) is None:
                return False, {k: F.one}
        unknown = True
    return ("unknown" if unknown else True), None


def structure_invariants(A, window=2, budget=20000):
    """Centre, commutator span, the decomposition A = Z + [A,A], division flag."""
    degs = A.degrees() if A.finite else A.degrees_in_window(window)
    Z = centre(A, degs)
    C = commutator_span(A, degs, window)
    decomposition = True
    for d in degs:
        zd = Z.block(d)
        cd = C.block(d)
        n = len(A.keys_of_degree(d))
        if zd.dim + cd.dim != n or zd.intersect(cd).dim:
            decomposition = False
            break
    div, witness = division_graded(A, degs, budget)
    return {
        "centre": Z,
        "commutators": C,
        "decomposition": decomposition,
        "division_graded": div,
        "non_invertible_witness": witness,
        "window": None if A.finite else window,
        "degrees": degs,
    }


# ---------------------------------------------------------------------------
# graded ideals, simplicity, semiprimeness

def _ideal_operators(A, morphs):
    ops = []
    for k in A.all_keys():
        b = {k: A.field.one}
        ops.append(GradedMap(lambda x, b=b: A.mul(b, x), A.degree_of(k), "left"))
        ops.append(GradedMap(lambda x, b=b: A.mul(x, b), A.degree_of(k), "right"))
    for m in morphs:
        ops.append(GradedMap(m, A.group.zero, m.name))
    return ops


def graded_ideal_closure(A, morphs, generators):
    """Smallest graded ideal stable under ``morphs`` containing the generators."""
    if not A.finite:
        raise ValueError("ideal closure needs a finite-dimensional algebra")
    seed = A.subspace(generators)
    return closure(seed, _ideal_operators(A, morphs), group=A.group)


def _operator_matrices(A, morphs):
    """Matrices (column convention) of multiplications, morphisms and degree projections."""
    keys = A.all_keys()
    idx = {k: i for i, k in enumerate(keys)}
    n = len(keys)
    F = A.field

    def mat(func):
        M = [[F.zero] * n for _ in range(n)]
        for j, k in enumerate(keys):
            for kk, c in func({k: F.one}).items():
                M[idx[kk]][j] = c
        return M

    mats = []
    for k in keys:
        b = {k: F.one}
        mats.append(mat(lambda x, b=b: A.mul(b, x)))
        mats.append(mat(lambda x, b=b: A.mul(x, b)))
    for m in morphs:
        mats.append(mat(m))
    degs = A.degrees()
    if len(degs) > 1:
        for d in degs:
            mats.append(mat(lambda x, d=d: {k: c for k, c in x.items() if A.degree_of(k) == d}))
    return keys, mats


def is_graded_simple(A, morphs=(), budget=3000, seed=0):
    """Tri-state graded simplicity of (A, morphs).

    Returns (True | False | "unknown", witness ideal basis or None, method).
    """
    if not A.finite:
        raise ValueError("graded simplicity is decided for finite-dimensional algebras")
    F = A.field
    degs = A.degrees()
    div, _ = division_graded(A, degs, budget=0)
    if div is True:
        return True, None, "division-graded"
    total = A.dim
    dims = [len(A.keys_of_degree(d)) for d in degs]
    if F.is_finite:
        count = sum(projective_count(F, n) for n in dims)
    else:
        count = None if any(n > 1 for n in dims) else sum(dims)
    if count is not None and count <= budget:
        for d in degs:
            keys = A.keys_of_degree(d)
            if F.is_finite:
                points = projective_points(F, len(keys))
            else:
                points = [[F.one]]
            for v in points:
                x = {k: c for k, c in zip(keys, v) if c}
                I = graded_ideal_closure(A, morphs, [x])
                if I.dim < total:
                    return False, I.basis(), "enumeration"
        return True, None, "enumeration"
    keys, mats = _operator_matrices(A, morphs)
    rng = random.Random(seed)
    verdict, basis = norton_irreducible(F, mats, rng)
    if verdict is None:
        return "unknown", None, "norton"
    if verdict:
        return True, None, "norton"
    witness = [{keys[i]: c for i, c in v.items()} for v in basis]
    return False, witness, "norton"


def ideal_product(A, I, J):
    """Span of products I J for graded subspaces."""
    P = A.subspace()
    for x in I.basis():
        for y in J.basis():
            w = A.mul(x, y)
            if w:
                P.add(w)
    return P


def is_graded_semiprime(A, morphs=(), budget=20000):
    """False iff some nonzero graded ideal squares to zero.

    Exact by enumeration of homogeneous generators over finite fields; over
    Q via the trace-form radical (the largest nilpotent ideal in
    characteristic 0), which is graded and stable under all
    (anti)automorphisms.
    """
    if not A.finite:
        raise ValueError("semiprimeness is decided for finite-dimensional algebras")
    F = A.field
    degs = A.degrees()
    dims = [len(A.keys_of_degree(d)) for d in degs]
    if F.is_finite:
        if sum(projective_count(F, n) for n in dims) > budget:
            return "unknown", None, "budget"
        for d in degs:
            keys = A.keys_of_degree(d)
            for v in projective_points(F, len(keys)):
                x = {k: c for k, c in zip(keys, v) if c}
                I = graded_ideal_closure(A, morphs, [x])
                if ideal_product(A, I, I).dim == 0:
                    return False, I.basis(), "enumeration"
        return True, None, "enumeration"
    rad = trace_radical(A)
    if rad.dim == 0:
        return True, None, "trace radical"
    N = graded_ideal_closure(A, morphs, rad.basis())
    power = N
    while True:
        nxt = ideal_product(A, power, N)
        if nxt.dim == 0:
            return False, power.basis(), "trace radical"
        power = nxt


def trace_radical(A):
    """{x : tr L(xy) = 0 for all y} (the Jacobson radical in characteristic 0)."""
    from .exactlin import nullspace
    keys = A.all_keys()
    F = A.field

    def trace_left(z):
        t = F.zero
        for k in keys:
            t += A.mul(z, {k: F.one}).get(k, F.zero)
        return t

    T = [[trace_left(A.mul({a: F.one}, {b: F.one})) for b in keys] for a in keys]
    # x T = 0  <=>  T^t x = 0
    Tt = [list(r) for r in zip(*T)]
    return A.subspace([{keys[i]: c for i, c in enumerate(v) if c} for v in nullspace(Tt, len(keys), F)])


# ---------------------------------------------------------------------------
# JSON presentations

def algebra_from_json(obj, field):
    """Build an algebra from a presentation dictionary (see README)."""
    kind = obj.get("kind")
    if kind == "quantum_torus":
        return QuantumTorus(field, obj["q"])
    if kind == "group_algebra":
        return GroupAlgebra(field, GradingGroup.from_json(obj["group"]))
    if kind == "laurent":
        group = GradingGroup.from_json(obj["group"])
        return SubgroupAlgebra(field, group, [tuple(b) for b in obj["basis"]])
    if kind == "field":
        return field_algebra(field, GradingGroup.from_json(obj.get("group", {})))
    if kind == "truncated_polynomial":
        return truncated_polynomial_algebra(field, int(obj["n"]))
    if kind == "matrix":
        return MatrixAlgebra(algebra_from_json(obj["base"], field), int(obj["n"]))
    if kind == "exchange_double":
        return ExchangeDouble(algebra_from_json(obj["base"], field), obj["mode"])
    if kind == "structure_constants":
        group = GradingGroup.from_json(obj.get("group", {}))
        keys = list(range(len(obj["degrees"])))
        degrees = {i: tuple(d) for i, d in enumerate(obj["degrees"])}
        table = {}
        for entry in obj["table"]:
            i, j, vec = entry
            table[(i, j)] = {int(k): field(c) for k, c in vec}
        unit = {int(k): field(c) for k, c in obj["unit"]}
        return StructureConstantAlgebra(field, group, keys, degrees, table, unit)
    raise InvalidPresentation("unknown algebra kind %r" % (kind,))


def involution_from_json(A, spec):
    """pi from "reversal" | "transpose" | "exchange" | "id" | {"table": ...}."""
    if isinstance(spec, dict) and "table" in spec:
        table = {int(k): {int(kk): c for kk, c in v} for k, v in spec["table"]}
        return table_morphism(A, table, anti=True, name="table")
    if spec == "reversal":
        return reversal_involution(A)
    if spec == "transpose":
        base_pi = involution_from_json(A.base, "id") if not isinstance(A.base, MatrixAlgebra) else None
        return transpose_involution(A, base_pi)
    if spec == "exchange":
        return exchange_morphisms(A)[0]
    if spec in ("id", None):
        return identity_morphism(A, anti=True)
    raise InvalidPresentation("unknown involution %r" % (spec,))


def automorphism_from_json(A, spec):
    if isinstance(spec, dict) and "table" in spec:
        table = {int(k): {int(kk): c for kk, c in v} for k, v in spec["table"]}
        return table_morphism(A, table, anti=False, name="table")
    if spec == "exchange":
        return exchange_morphisms(A)[1]
    if spec in ("id", None):
        return identity_morphism(A)
    raise InvalidPresentation("unknown automorphism %r" % (spec,))
