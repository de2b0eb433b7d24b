"""Graded quadratic forms over commutative graded algebras.

A module M is free over D on homogeneous basis vectors with labels;
its k-basis keys are (label, dkey) for dkey a key of D, of degree
deg(label) + deg(dkey).  The form is stored by Gram data: q(u_i) and
q(u_i, u_j) for i != j, evaluated by bilinear expansion.  A hermitian
isometry S is stored by its values on the basis and extended
semilinearly, S(d m) = bar(d) S(m).
"""

from .exactlin import key_order, nullspace, vadd, vcomb, vneg, vscale
from .assoc import identity_morphism, projective_count, projective_points


class QuadFormError(ValueError):
    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class GradedQuadForm:
    """q: M -> D on a free graded D-module with basis ``labels``.

    ``degrees``: label -> degree; ``values``: label -> q(u_label) in D;
    ``bilinear``: {(a, b): q(u_a, u_b)} for a != b (symmetric, missing = 0);
    ``S``: label -> module element (default: identity); ``bar``: morphism of D.
    """

    def __init__(self, D, labels, degrees, values, bilinear=None, S=None, bar=None, check=True):
        self.D = D
        self.field = D.field
        self.group = D.group
        self.labels = list(labels)
        if len(set(self.labels)) != len(self.labels):
            raise QuadFormError("duplicate basis labels")
        self.deg = {a: self.group.degree(degrees[a]) for a in self.labels}
        self.values = {a: dict(values.get(a, {})) for a in self.labels}
        self.gram = {}
        for (a, b), v in (bilinear or {}).items():
            if a == b:
                raise QuadFormError("diagonal bilinear entries are fixed by q(m, m) = 2 q(m)", (a, b))
            v = {k: c for k, c in v.items() if c}
            if v:
                if (b, a) in self.gram and self.gram[(b, a)] != v:
                    raise QuadFormError("bilinear data is not symmetric", (a, b))
                self.gram[(a, b)] = v
                self.gram[(b, a)] = v
        self.bar = bar or identity_morphism(D)
        self.S_table = {a: (S[a] if S and a in S else {(a, k): c for k, c in D.unit().items()})
                        for a in self.labels}
        self.finite = D.finite
        if check:
            self.validate()

    # module plumbing ----------------------------------------------------

    def degree_of(self, key):
        a, dk = key
        return self.group.add(self.deg[a], self.D.degree_of(dk))

    def keys_of_degree(self, deg):
        out = []
        for a in self.labels:
            rest = self.group.sub(deg, self.deg[a])
            out.extend((a, dk) for dk in self.D.keys_of_degree(rest))
        return out

    def all_keys(self):
        return [(a, dk) for a in self.labels for dk in self.D.all_keys()]

    def degrees(self):
        return sorted({self.degree_of(k) for k in self.all_keys()}, key=key_order)

    def keys_in_window(self, radius):
        if self.finite:
            return self.all_keys()
        out = []
        for d in self.group.window(radius):
            out.extend(self.keys_of_degree(d))
        return out

    def basis_vector(self, label, d=None):
        """u_label, or d u_label."""
        d = self.D.unit() if d is None else d
        return {(label, k): c for k, c in d.items() if c}

    def coords(self, m):
        """D-coordinates of a module element: label -> D-element."""
        out = {}
        for (a, dk), c in m.items():
            out.setdefault(a, {})[dk] = c
        return out

    def from_coords(self, coords):
        out = {}
        for a, d in coords.items():
            for k, c in d.items():
                if c:
                    out[(a, k)] = c
        return out

    def act(self, d, m):
        """d . m for d in D."""
        return self.from_coords({a: self.D.mul(d, x) for a, x in self.coords(m).items()})

    def S(self, m):
        return vcomb((self.field.one, self.act(self.bar(x), self.S_table[a]))
                     for a, x in self.coords(m).items())

    # evaluation -----------------------------------------------------------

    def q(self, m):
        D = self.D
        co = self.coords(m)
        labs = sorted(co, key=key_order)
        out = {}
        for i, a in enumerate(labs):
            xa = co[a]
            out = vadd(out, D.mul(D.mul(xa, xa), self.values[a]))
            for b in labs[i + 1:]:
                g = self.gram.get((a, b))
                if g:
                    out = vadd(out, D.mul(D.mul(xa, co[b]), g))
        return out

    def bilinear(self, m, n):
        D = self.D
        cm, cn = self.coords(m), self.coords(n)
        out = {}
        for a, xa in cm.items():
            for b, yb in cn.items():
                if a == b:
                    g = vscale(self.field(2), self.values[a])
                else:
                    g = self.gram.get((a, b))
                if g:
                    out = vadd(out, D.mul(D.mul(xa, yb), g))
        return out

    def gram_matrix(self):
        """D-valued Gram matrix q(u_a, u_b) in label order."""
        return [[self.bilinear(self.basis_vector(a), self.basis_vector(b)) for b in self.labels]
                for a in self.labels]

    # validation -------------------------------------------------------------

    def validate(self):
        g = self.group
        D = self.D
        if not D.is_commutative(1):
            raise QuadFormError("coefficient algebra must be commutative")
        for a in self.labels:
            for k in self.values[a]:
                if D.degree_of(k) != g.scale(2, self.deg[a]):
                    raise QuadFormError("q(u_%s) is not of degree 2 deg(u)" % (a,), a)
        for (a, b), v in self.gram.items():
            for k in v:
                if D.degree_of(k) != g.add(self.deg[a], self.deg[b]):
                    raise QuadFormError("q(u_%s, u_%s) has the wrong degree" % (a, b), (a, b))
        for a in self.labels:
            u = self.basis_vector(a)
            s = self.S(u)
            for k in s:
                if self.degree_of(k) != self.deg[a]:
                    raise QuadFormError("S does not have degree 0", a)
            if self.S(s) != u:
                raise QuadFormError("S^2 is not the identity", a)
            if self.q(s) != self.bar(self.q(u)):
                raise QuadFormError("S is not a hermitian isometry", a)
        for i, a in enumerate(self.labels):
            for b in self.labels[i + 1:]:
                ua, ub = self.basis_vector(a), self.basis_vector(b)
                if self.bilinear(self.S(ua), self.S(ub)) != self.bar(self.bilinear(ua, ub)):
                    raise QuadFormError("S does not preserve the bilinear form", (a, b))

    def random_element(self, rng, radius=1, homogeneous=True):
        if homogeneous:
            if self.finite:
                deg = rng.choice(self.degrees())
            else:
                degs = [d for d in self.group.window(radius) if self.keys_of_degree(d)]
                deg = rng.choice(degs)
            keys = self.keys_of_degree(deg)
        else:
            keys = self.keys_in_window(radius)
        return {k: c for k in keys for c in [self.field.random(rng)] if c}

    # derived forms ----------------------------------------------------------

    def negated(self, negate_S=False):
        """-q on the same module (optionally with -S)."""
        S = None
        if negate_S:
            S = {a: vneg(self.S_table[a]) for a in self.labels}
        else:
            S = dict(self.S_table)
        return GradedQuadForm(self.D, self.labels, self.deg,
                              {a: vneg(v) for a, v in self.values.items()},
                              {k: vneg(v) for k, v in self.gram.items()}, S, self.bar, check=False)

    def with_hyperbolic_plane(self, pos, neg):
        """Orthogonal sum D pos + (this) + D neg with q(pos, neg) = 1, q(pos) = q(neg) = 0.

        The isometry swaps pos and neg: S(d pos + d' neg) = bar(d') pos + bar(d) neg.
        """
        if pos in self.labels or neg in self.labels:
            raise QuadFormError("label clash in hyperbolic extension", (pos, neg))
        D = self.D
        one = D.unit()
        labels = [pos] + self.labels + [neg]
        deg = dict(self.deg)
        deg[pos] = deg[neg] = self.group.zero
        values = dict(self.values)
        values[pos] = {}
        values[neg] = {}
        gram = dict(self.gram)
        gram[(pos, neg)] = one
        S = dict(self.S_table)
        S[pos] = {(neg, k): c for k, c in one.items()}
        S[neg] = {(pos, k): c for k, c in one.items()}
        return GradedQuadForm(D, labels, deg, values, gram, S, self.bar, check=False)


def clifford_form(qf, e1="e1", e2="e2"):
    """(q~, S~) on D e1 + M + D e2: q~(d1 e1 + m + d2 e2) = d1 d2 - q(m), S~ = swap with -S on M."""
    return qf.negated(negate_S=True).with_hyperbolic_plane(e1, e2)


def hyperbolic_extension(qf, base_point):
    """q_infinity on D h2 + D h1 + M + D h-1 + D h-2.

    Two hyperbolic planes orthogonal to M with q_inf | M = -q.  The isometry
    extends the Clifford pattern: S(h_i) = h_-i and -S on M.  Requires a
    base point u in M of degree 0 with q(u) = 1 and S(u) = u.
    """
    check_base_point(qf, base_point)
    inner = qf.negated(negate_S=True).with_hyperbolic_plane("h1", "h-1")
    return inner.with_hyperbolic_plane("h2", "h-2")


def check_base_point(qf, u):
    if not u:
        raise QuadFormError("missing base point")
    for k in u:
        if qf.degree_of(k) != qf.group.zero:
            raise QuadFormError("base point is not of degree 0", u)
    if qf.q(u) != qf.D.unit():
        raise QuadFormError("base point does not satisfy q(u) = 1", u)
    if qf.S(u) != u:
        raise QuadFormError("base point is not fixed by S", u)


# ---------------------------------------------------------------------------
# radical and predicates

def _radical_block(qf, deg):
    """Basis of {m in M^deg : q(m, M) = 0 = q(m)}."""
    F = qf.field
    keys = qf.keys_of_degree(deg)
    if not keys:
        return []
    # q(m, u_b) = 0 for every basis label b (q is D-bilinear)
    rows_by = {}
    for j, k in enumerate(keys):
        m = {k: F.one}
        for b in qf.labels:
            for dk, c in qf.bilinear(m, qf.basis_vector(b)).items():
                rows_by.setdefault((b, dk), [F.zero] * len(keys))[j] = c
    rows = [rows_by[r] for r in sorted(rows_by, key=key_order)]
    R = nullspace(rows, len(keys), F) if rows else [[F.one if i == j else F.zero for i in range(len(keys))]
                                                      for j in range(len(keys))]
    vecs = [{keys[i]: c for i, c in enumerate(v) if c} for v in R]
    if F.char != 2 or not vecs:
        return vecs
    # characteristic 2 over the prime field: q is additive on R and q(c r) = c q(r)
    qv = [qf.q(v) for v in vecs]
    dks = sorted({k for x in qv for k in x}, key=key_order)
    rows = [[x.get(k, F.zero) for x in qv] for k in dks]
    if not rows:
        return vecs
    out = []
    for w in nullspace(rows, len(vecs), F):
        out.append(vcomb((c, v) for c, v in zip(w, vecs) if c))
    return out


def graded_radical(qf):
    """GR q as a (lazy) graded subspace of M."""
    from .exactlin import GradedSubspace
    G = GradedSubspace(qf.field, qf.degree_of, qf.keys_of_degree, rule=lambda d: _radical_block(qf, d))
    if qf.finite:
        G.materialize(qf.degrees())
    return G


def radical(qf):
    """R q = {m : q(m) = 0 = q(m, M)} (finite modules); returns a basis.

    Differs from the graded radical only in characteristic 2 when the
    grading group has 2-torsion.
    """
    from .exactlin import Subspace
    if not qf.finite:
        raise ValueError("radical of an infinite module")
    F = qf.field
    keys = qf.all_keys()
    rows_by = {}
    for j, k in enumerate(keys):
        m = {k: F.one}
        for b in qf.labels:
            for dk, c in qf.bilinear(m, qf.basis_vector(b)).items():
                rows_by.setdefault((b, dk), [F.zero] * len(keys))[j] = c
    rows = [rows_by[r] for r in sorted(rows_by, key=key_order)]
    if rows:
        R = nullspace(rows, len(keys), F)
    else:
        R = [[F.one if i == j else F.zero for i in range(len(keys))] for j in range(len(keys))]
    vecs = [{keys[i]: c for i, c in enumerate(v) if c} for v in R]
    if F.char != 2:
        return Subspace(F, keys, vecs)
    qv = [qf.q(v) for v in vecs]
    dks = sorted({k for x in qv for k in x}, key=key_order)
    rows = [[x.get(k, F.zero) for x in qv] for k in dks]
    if not rows:
        return Subspace(F, keys, vecs)
    return Subspace(F, keys, [vcomb((c, v) for c, v in zip(w, vecs) if c)
                              for w in nullspace(rows, len(vecs), F)])


def anisotropy(qf, window=2, budget=50000):
    """True / False / "unknown": q(m) != 0 for all nonzero homogeneous m."""
    F = qf.field
    degs = qf.degrees() if qf.finite else [d for d in qf.group.window(window) if qf.keys_of_degree(d)]
    unknown = False
    for d in degs:
        keys = qf.keys_of_degree(d)
        if len(keys) == 1:
            m = {keys[0]: F.one}
            if not qf.q(m):
                return False, m
            continue
        if F.is_finite and projective_count(F, len(keys)) <= budget:
            for v in projective_points(F, len(keys)):
                m = {k: c for k, c in zip(keys, v) if c}
                if not qf.q(m):
                    return False, m
            continue
        for k in keys:
            if not qf.q({k: F.one}):
                return False, {k: F.one}
        unknown = True
    return ("unknown" if unknown else True), None


def predicates(qf, window=2, budget=50000):
    """Graded nondegeneracy and anisotropy; windowed for infinite modules."""
    GR = graded_radical(qf)
    if qf.finite:
        nondeg = GR.dim == 0
    else:
        GR.materialize(qf.group.window(window))
        nondeg = GR.dim == 0
    aniso, witness = anisotropy(qf, window, budget)
    return {
        "graded_nondegenerate": nondeg,
        "radical_witness": GR.basis()[0] if GR.dim else None,
        "graded_anisotropic": aniso,
        "isotropic_witness": witness,
        "window": None if qf.finite else window,
    }


# ---------------------------------------------------------------------------
# Clifford-ample subspaces

def check_clifford_ample(qf, D0, window=1):
    """Verify D0 = bar(D0), 1 in D0 and D0 q(M) in D0; returns a list of (law, witness).

    q(M) lies in the span of q(b) and q(b + b') for k-basis vectors b, b',
    so checking those values suffices.
    """
    D = qf.D
    fails = []
    degs = D.degrees() if D.finite else D.degrees_in_window(window)
    D0.materialize(degs)
    if not D0.contains(D.unit()):
        fails.append(("1 in D0", D.unit()))
    basis = []
    for d in degs:
        basis.extend(D0.component(d))
    for d0 in basis:
        if not D0.contains(qf.bar(d0)):
            fails.append(("D0 bar-stable", d0))
    keys = qf.keys_in_window(window)
    values = []
    for i, a in enumerate(keys):
        values.append(qf.q({a: qf.field.one}))
        for b in keys[i + 1:]:
            values.append(qf.q({a: qf.field.one, b: qf.field.one}))
    for d0 in basis:
        for v in values:
            w = D.mul(d0, v)
            if not D0.contains(w):
                fails.append(("D0 q(M) in D0", {"d0": d0, "q": v}))
                return fails
    return fails


# ---------------------------------------------------------------------------
# JSON

def element_from_json(D, obj):
    """D-element from a scalar (multiple of 1) or a list of [key, coefficient] pairs."""
    F = D.field
    if isinstance(obj, (int, str)):
        return vscale(F(obj), D.unit())
    out = {}
    for key, c in obj:
        key = tuple(key) if isinstance(key, list) else key
        c = F(c)
        if c:
            out[key] = c
    return out


def quadform_from_json(obj, D, bar=None):
    """{"basis": [{"label":..., "degree":[...], "q": ...}], "bilinear": [[a, b, value]], "S": {...}}."""
    labels, degrees, values = [], {}, {}
    for i, b in enumerate(obj["basis"]):
        lab = b.get("label", "u%d" % i)
        labels.append(lab)
        degrees[lab] = tuple(b.get("degree", D.group.zero))
        values[lab] = element_from_json(D, b.get("q", 0))
    bil = {}
    for a, b, v in obj.get("bilinear", []):
        bil[(a, b)] = element_from_json(D, v)
    S = None
    if "S" in obj:
        S = {}
        for lab, pairs in obj["S"].items():
            S[lab] = {}
            for b, v in pairs:
                for k, c in element_from_json(D, v).items():
                    S[lab][(b, k)] = c
    return GradedQuadForm(D, labels, degrees, values, bil, S, bar)


def quadform_to_json(qf):
    F = qf.field

    def el(v):
        return [[list(k) if isinstance(k, tuple) else k, F.format(c)] for k, c in sorted(v.items(), key=lambda t: key_order(t[0]))]

    out = {"basis": [{"label": a, "degree": list(qf.deg[a]), "q": el(qf.values[a])} for a in qf.labels]}
    seen = []
    for (a, b), v in sorted(qf.gram.items(), key=lambda t: key_order(t[0])):
        if key_order(a) < key_order(b):
            seen.append([a, b, el(v)])
    out["bilinear"] = seen
    return out
