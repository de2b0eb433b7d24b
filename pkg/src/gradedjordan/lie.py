"""B2-graded Lie algebras with a compatible Lambda-grading.

Every algebra here lives inside an ambient space whose keys carry a
weight (alpha, lambda); the algebra is described by slot bases
L_alpha^lambda.  Infinite algebras are inspected on a degree window, but
brackets are always computed exactly in the ambient space, so membership
of a bracket in a slot never depends on the window.
"""

import random
from functools import lru_cache

from .assoc import commutator_span, hermitian_part
from .exactlin import (BasisCoordinates, Subspace, key_order, nullspace, vadd, vcomb, vneg, vscale, vsub)
from .grading import SupportSet, is_pointed_reflection_subspace, span_subgroup, support_relations_check


class LieError(ValueError):
    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


ZERO = (0, 0)
R1 = [(2, 0), (1, 1), (0, 2)]
ROOTS = R1 + [(-a, -b) for a, b in R1] + [(1, -1), (-1, 1)]
B2 = [ZERO] + ROOTS


def radd(a, b):
    return tuple(x + y for x, y in zip(a, b))


def rneg(a):
    return tuple(-x for x in a)


def cartan_integer(beta, alpha):
    """<beta, alpha^vee> = 2 (beta, alpha) / (alpha, alpha) for orthonormal epsilons."""
    den = sum(x * x for x in alpha)
    if den == 0:
        raise LieError("Cartan integer against the zero root")
    num = 2 * sum(x * y for x, y in zip(beta, alpha))
    if num % den:
        raise LieError("non-integral Cartan integer", (beta, alpha))
    return num // den


def require_char(field):
    if field.char in (2, 3):
        raise LieError("Lie constructions need 2 and 3 invertible in the scalar field")


# ---------------------------------------------------------------------------
# common core

class LieAlgebra:
    """Root- and Lambda-weighted Lie algebra given by slot bases.

    Subclasses supply ``_slot(alpha, lam)`` (a list of ambient vectors),
    ``bracket(x, y)`` and ``weight_of_key(key)``.
    """

    field = None
    group = None
    roots = B2
    finite = True
    radius = None
    name = "lie"

    def __init__(self):
        self._slots = {}
        self._coords = {}

    def slot(self, alpha, lam):
        key = (tuple(alpha), self.group.degree(lam))
        if key not in self._slots:
            self._slots[key] = self._slot(*key) if key[0] in self.roots else []
        return self._slots[key]

    def slot_coords(self, alpha, lam):
        key = (tuple(alpha), self.group.degree(lam))
        if key not in self._coords:
            self._coords[key] = BasisCoordinates(self.field, self.slot(alpha, lam))
        return self._coords[key]

    def in_slot(self, x, alpha, lam):
        if not x:
            return True
        if alpha not in self.roots:
            return False
        return self.slot_coords(alpha, lam)(x) is not None

    def degrees(self):
        """Lambda-degrees inspected: all of them (finite) or the window."""
        if self.finite:
            return self._finite_degrees()
        return [self.group.degree(d) for d in self.group.window(self.radius)]

    def _finite_degrees(self):
        raise NotImplementedError

    def slots(self):
        return [(a, l) for a in self.roots for l in self.degrees() if self.slot(a, l)]

    def basis(self):
        out = []
        for a, l in self.slots():
            out.extend(self.slot(a, l))
        return out

    def dim(self):
        if not self.finite:
            return None
        return len(self.basis())

    def slot_dims(self):
        return {(a, l): len(self.slot(a, l)) for a, l in self.slots()}

    def weight_of(self, x):
        ws = {self.weight_of_key(k) for k in x}
        if len(ws) != 1:
            raise LieError("element is not weight-homogeneous", x)
        return ws.pop()

    def bracket(self, x, y):
        raise NotImplementedError

    def weight_of_key(self, key):
        raise NotImplementedError

    def root_dims(self):
        """alpha -> total dimension over the inspected degrees."""
        out = {}
        for (a, l), n in self.slot_dims().items():
            out[a] = out.get(a, 0) + n
        return out


def _span(field, vectors):
    keys = sorted({k for v in vectors for k in v}, key=key_order)
    sub = Subspace(field, keys)
    out = []
    for v in vectors:
        if v and sub.add(v) is not None:
            out.append(v)
    return out


def _kernel(field, src, images):
    """Combinations of ``src`` whose images vanish (images are sparse dicts)."""
    if not src:
        return []
    keys = sorted({k for v in images for k in v}, key=key_order)
    if not keys:
        return list(src)
    rows = [[v.get(k, field.zero) for v in images] for k in keys]
    return [vcomb(zip(c, src)) for c in nullspace(rows, len(src), field)]


# ---------------------------------------------------------------------------
# matrix Lie algebras over a graded associative algebra

class MatrixLie(LieAlgebra):
    """Lie subalgebra of gl_n(A); entry (i, j, a) has weight (w_i - w_j, deg a + d_i - d_j)."""

    def __init__(self, A, n, row_weights, row_degrees=None, radius=None):
        super().__init__()
        self.A = A
        self.field = A.field
        self.group = A.group
        self.n = n
        self.w = [tuple(w) for w in row_weights]
        g = A.group
        self.d = [g.degree(x) for x in (row_degrees or [g.zero] * n)]
        self.finite = A.finite
        self.radius = radius
        self._mul = lru_cache(maxsize=None)(A.mul_keys)

    def weight_of_key(self, key):
        i, j, a = key
        g = self.group
        return (tuple(x - y for x, y in zip(self.w[i], self.w[j])),
                g.add(self.A.degree_of(a), g.sub(self.d[i], self.d[j])))

    def _finite_degrees(self):
        g = self.group
        out = set()
        for i in range(self.n):
            for j in range(self.n):
                for d in self.A.degrees():
                    out.add(g.add(d, g.sub(self.d[i], self.d[j])))
        return sorted(out, key=key_order)

    def matmul(self, X, Y):
        rows = {}
        for (l, j, b), c in Y.items():
            rows.setdefault(l, []).append((j, b, c))
        out = {}
        for (i, l, a), c1 in X.items():
            for j, b, c2 in rows.get(l, ()):
                for k, c3 in self._mul(a, b).items():
                    key = (i, j, k)
                    s = out.get(key)
                    s = c1 * c2 * c3 if s is None else s + c1 * c2 * c3
                    if s:
                        out[key] = s
                    else:
                        del out[key]
        return out

    def bracket(self, x, y):
        return vsub(self.matmul(x, y), self.matmul(y, x))

    def entry(self, i, j, a):
        """Matrix with A-element a at (i, j)."""
        return {(i, j, k): c for k, c in a.items() if c}


SU2_WEIGHTS = [(1, 0), (0, 1), (-1, 0), (0, -1)]


class SU2(MatrixLie):
    """su_2(A, pi) inside p_2(A, pi) = {[[a, b], [c, -a^{pi t}]] : b, c hermitian}."""

    def __init__(self, A, pi, radius=None, which="su2"):
        require_char(A.field)
        super().__init__(A, 4, SU2_WEIGHTS, radius=radius)
        self.pi = pi
        self.which = which
        self.name = "%s(%s)" % (which, getattr(A, "name", "A"))
        self.H = hermitian_part(A, pi)
        self._comm = {}

    def a_basis(self, lam):
        return [{k: self.field.one} for k in self.A.keys_of_degree(lam)]

    def commutators(self, lam):
        """[A, A]^lam (exact for finite A; from a window of factors otherwise)."""
        lam = self.group.degree(lam)
        if lam not in self._comm:
            if self.A.finite:
                sub = commutator_span(self.A, [lam])
            else:
                sub = commutator_span(self.A, [lam], radius=self.radius + 1)
            sub.materialize([lam])
            self._comm[lam] = sub.component(lam)
        return self._comm[lam]

    def _slot(self, alpha, lam):
        pi = self.pi
        neg = lambda a: vneg(pi(a))
        E = self.entry
        if alpha == (2, 0):
            return [E(0, 2, h) for h in self.H.component(lam)]
        if alpha == (0, 2):
            return [E(1, 3, h) for h in self.H.component(lam)]
        if alpha == (-2, 0):
            return [E(2, 0, h) for h in self.H.component(lam)]
        if alpha == (0, -2):
            return [E(3, 1, h) for h in self.H.component(lam)]
        if alpha == (1, 1):
            return [vadd(E(0, 3, a), E(1, 2, pi(a))) for a in self.a_basis(lam)]
        if alpha == (-1, -1):
            return [vadd(E(2, 1, a), E(3, 0, pi(a))) for a in self.a_basis(lam)]
        if alpha == (1, -1):
            return [vadd(E(0, 1, a), E(3, 2, neg(a))) for a in self.a_basis(lam)]
        if alpha == (-1, 1):
            return [vadd(E(1, 0, a), E(2, 3, neg(a))) for a in self.a_basis(lam)]
        if alpha == ZERO:
            diag = []
            for a in self.a_basis(lam):
                diag.append(vadd(E(0, 0, a), E(2, 2, neg(a))))
                diag.append(vadd(E(1, 1, a), E(3, 3, neg(a))))
            if self.which == "p2":
                return _span(self.field, diag)
            return self._trace_condition(diag, lam)
        return []

    def trace(self, X):
        out = {}
        for (i, j, k), c in X.items():
            if i == j:
                out = vadd(out, {k: c})
        return out

    def _trace_condition(self, diag, lam):
        comm = self.commutators(lam)
        src = list(diag) + [None] * len(comm)
        images = [self.trace(X) for X in diag] + list(comm)
        F = self.field
        keys = sorted({k for v in images for k in v}, key=key_order)
        if not keys:
            return _span(F, diag)
        rows = [[v.get(k, F.zero) for v in images] for k in keys]
        out = []
        for c in nullspace(rows, len(src), F):
            x = vcomb(zip(c[:len(diag)], diag))
            if x:
                out.append(x)
        return _span(F, out)


def build_su2(A, pi, radius=None):
    """{p2, su2, su2/Z} with a certificate comparing su2 = [p2, p2] with the trace description."""
    p2 = SU2(A, pi, radius, "p2")
    su2 = SU2(A, pi, radius, "su2")
    report = su2_certificate(p2, su2)
    Z = centre(su2)
    quotient = su2 if not any(Z.values()) else CentralQuotient(su2, Z)
    return {"p2": p2, "su2": su2, "quotient": quotient, "centre": Z, "certificate": report}


def su2_certificate(p2, su2):
    """Slotwise comparison of [p2(1), p2(-1)] (degree-0 part) with the trace-defined su2 slots."""
    out = {}
    degs = su2.degrees()
    for alpha in (ZERO, (1, -1), (-1, 1)):
        for lam in degs:
            target = su2.slot(alpha, lam)
            found = []
            for beta in R1:
                gamma = radd(alpha, rneg(beta))
                if rneg(gamma) not in R1:
                    continue
                for mu in degs:
                    nu = su2.group.sub(lam, mu)
                    if not su2.finite and not su2.group.in_window(nu, su2.radius):
                        continue
                    for x in p2.slot(beta, mu):
                        for y in p2.slot(gamma, nu):
                            found.append(p2.bracket(x, y))
            found = _span(su2.field, found)
            inside = all(su2.in_slot(v, alpha, lam) for v in found)
            if not inside:
                status = "fail"
            elif len(found) == len(target):
                status = "equal"
            else:
                status = "fail" if su2.finite else "not evaluated"
            if target or found:
                out[(alpha, lam)] = status
    passed = all(v == "equal" for v in out.values())
    return {"passed": passed, "slots": out}


def centre_decomposition(A, radius):
    """A = Z(A) + [A, A] checked degreewise on a window: {lam: (ok, dimZ, dim[A,A], dimA)}."""
    from .assoc import centre as assoc_centre
    g = A.group
    degs = A.degrees() if A.finite else [g.degree(d) for d in g.window(radius)]
    Z = assoc_centre(A, degs)
    out = {}
    for lam in degs:
        keys = A.keys_of_degree(lam)
        z = Z.component(lam)
        if A.finite:
            C = commutator_span(A, [lam])
        else:
            C = commutator_span(A, [lam], radius=radius + 1)
        C.materialize([lam])
        c = C.component(lam)
        both = _span(A.field, list(z) + list(c))
        ok = len(both) == len(keys) and len(z) + len(c) == len(keys)
        out[lam] = (ok, len(z), len(c), len(keys))
    return out


# ---------------------------------------------------------------------------
# eso(q_infinity)

def _psi(w):
    """B2 realisation with 1-part {e2, e2 +- e1} -> C2 labels with 1-part {2e1, e1+e2, 2e2}."""
    a, b = w
    return (a + b, b - a)


class EsoQinf(MatrixLie):
    """eso(q_inf) on J_inf = D h2 + D h1 + M + D h_-1 + D h_-2 (matrices over D)."""

    def __init__(self, qf, radius=None):
        require_char(qf.field)
        D = qf.D
        if not D.is_commutative():
            raise LieError("eso(q_inf) needs a commutative coefficient algebra")
        self.qf = qf
        self.labels = list(qf.labels)
        r = len(self.labels)
        b2 = [(0, 1), (1, 0)] + [(0, 0)] * r + [(-1, 0), (0, -1)]
        degs = [D.group.zero] * 2 + [qf.deg[a] for a in self.labels] + [D.group.zero] * 2
        super().__init__(D, r + 4, [_psi(w) for w in b2], degs, radius)
        self.name = "eso(q_inf)"
        self.b2_weights = b2
        F = self.field
        one = D.unit()
        self.dual = {0: r + 3, 1: r + 2, r + 2: 1, r + 3: 0}
        B = {}
        B[(0, r + 3)] = B[(r + 3, 0)] = one
        B[(1, r + 2)] = B[(r + 2, 1)] = one
        for i, a in enumerate(self.labels):
            for j, b in enumerate(self.labels):
                if a == b:
                    v = vscale(F(2), qf.values[a])
                else:
                    v = qf.gram.get((a, b), {})
                if v:
                    B[(i + 2, j + 2)] = vneg(v)
        self.B = B
        self._row_B = {}
        for (i, j), v in B.items():
            self._row_B.setdefault(i, []).append((j, v))

    def E(self, a, b, d):
        """d (n_a n_b^* - n_b n_a^*) with n^*(n') = q_inf(n, n')."""
        D = self.A
        out = {}
        for j, v in self._row_B.get(b, ()):
            out = vadd(out, self.entry(a, j, D.mul(d, v)))
        for j, v in self._row_B.get(a, ()):
            out = vsub(out, self.entry(b, j, D.mul(d, v)))
        return out

    def _slot(self, alpha, lam):
        g = self.group
        D = self.A
        out = []
        n = self.n
        for a in range(n):
            for b in range(a + 1, n):
                w = radd(self.w[a], self.w[b])
                if w != alpha:
                    continue
                rest = g.sub(lam, g.add(self.d[a], self.d[b]))
                for k in D.keys_of_degree(rest):
                    x = self.E(a, b, {k: self.field.one})
                    if x:
                        out.append(x)
        return _span(self.field, out)

    def orthogonality_failures(self, X):
        """q_inf(Xn, n) = 0 for basis n, i.e. B(X n_i, n_j) + B(n_i, X n_j) = 0."""
        D = self.A
        cols = {}
        for (i, j, k), c in X.items():
            cols.setdefault(j, []).append((i, k, c))
        fails = []
        n = self.n

        def B_X(i, j):
            out = {}
            for k, dk, c in cols.get(i, ()):
                v = self.B.get((k, j))
                if v:
                    out = vadd(out, vscale(c, D.mul({dk: self.field.one}, v)))
            return out

        for i in range(n):
            for j in range(i, n):
                if vadd(B_X(i, j), B_X(j, i)):
                    fails.append((i, j))
        return fails


def build_eso_qinf(qf, radius=None):
    if qf.bar is not None and not qf.bar.is_identity(qf.D.all_keys() if qf.D.finite else
                                                        qf.D.keys_in_window(radius or 1)):
        raise LieError("eso(q_inf) is built for Clifford algebras (bar = id)")
    return EsoQinf(qf, radius)


def build_eso(qf):
    """eso(q_N) on the module of ``qf`` itself: D-span of n1 n2^* - n2 n1^* (finite D)."""
    require_char(qf.field)
    D = qf.D
    labels = list(qf.labels)
    F = qf.field
    mats = []
    for i, a in enumerate(labels):
        for j, b in enumerate(labels):
            if j <= i:
                continue
            for k in D.all_keys():
                d = {k: F.one}
                X = {}
                for t, c in enumerate(labels):
                    vb = qf.bilinear(qf.basis_vector(b), qf.basis_vector(c))
                    va = qf.bilinear(qf.basis_vector(a), qf.basis_vector(c))
                    for kk, x in D.mul(d, vb).items():
                        X[(i, t, kk)] = X.get((i, t, kk), F.zero) + x
                    for kk, x in D.mul(d, va).items():
                        X[(j, t, kk)] = X.get((j, t, kk), F.zero) - x
                mats.append({k2: v for k2, v in X.items() if v})
    return _span(F, mats)


# ---------------------------------------------------------------------------
# TKK

class TKK(LieAlgebra):
    """K(V) = V^- + delta(V^+, V^-) + V^+ for V = (J, J); derivations act on V^+ + V^-.

    With a triangulated system the basis is Peirce-adapted and B2 weights
    are attached; otherwise only the 3-grading (+1, 0, -1) is recorded.
    """

    def __init__(self, J, T=None, name=None):
        if not J.finite:
            raise LieError("TKK is built for finite-dimensional systems")
        require_char(J.field)
        super().__init__()
        self.J = J
        self.T = T
        self.field = J.field
        self.group = J.group
        self.name = name or "TKK(%s)" % getattr(J, "name", "J")
        if T is not None:
            parts = ((1, (2, 0)), ("m", (1, 1)), (2, (0, 2)))
            basis, roots = [], []
            for part, root in parts:
                for d in J.all_degrees():
                    for b in T.basis_of(part, d):
                        basis.append(b)
                        roots.append(root)
            self.roots = B2
        else:
            basis = J.basis()
            roots = [(1,)] * len(basis)
            self.roots = [(0,), (1,), (-1,)]
        self.vb = basis
        self.n = len(basis)
        self.coords = BasisCoordinates(J.field, basis)
        g = self.group
        self.rw = roots
        self.deg = [J.element_degree(b) for b in basis]
        n = self.n
        self.W = [(r, d) for r, d in zip(roots, self.deg)] + [(rneg(r), g.neg(d)) for r, d in zip(roots, self.deg)]
        self.delta_table = {}
        self.outside_R = []
        for a in range(n):
            for b in range(n):
                D = self._delta(basis[a], basis[b])
                self.delta_table[(a, b)] = D
                if D and self._dweight(a, b)[0] not in self.roots:
                    self.outside_R.append((a, b))
        self._dslots = {}
        for (a, b), D in self.delta_table.items():
            if D:
                self._dslots.setdefault(self._dweight(a, b), []).append(D)

    def _dweight(self, a, b):
        return (radd(self.rw[a], rneg(self.rw[b])), self.group.sub(self.deg[a], self.deg[b]))

    def _vec(self, v):
        c = self.coords(v)
        if c is None:
            raise LieError("product leaves the Jordan system", v)
        return c

    def _delta(self, x, y):
        """Action matrix of delta(x, y) = (D(x, y), -D(y, x)) on V^+ + V^-."""
        J, n = self.J, self.n
        out = {}
        for k, b in enumerate(self.vb):
            for r, c in enumerate(self._vec(J.triple(x, y, b))):
                if c:
                    out[("d", r, k)] = c
            for r, c in enumerate(self._vec(J.triple(y, x, b))):
                if c:
                    out[("d", n + r, n + k)] = -c
        return out

    def weight_of_key(self, key):
        if key[0] == "+":
            return self.W[key[1]]
        if key[0] == "-":
            return self.W[self.n + key[1]]
        _, r, c = key
        return (radd(self.W[r][0], rneg(self.W[c][0])), self.group.sub(self.W[r][1], self.W[c][1]))

    def _finite_degrees(self):
        out = set()
        for w in self.W:
            out.add(w[1])
        for (a, b) in self.delta_table:
            out.add(self._dweight(a, b)[1])
        return sorted(out, key=key_order)

    def _slot(self, alpha, lam):
        out = []
        for i in range(self.n):
            if self.W[i] == (alpha, lam):
                out.append({("+", i): self.field.one})
            if self.W[self.n + i] == (alpha, lam):
                out.append({("-", i): self.field.one})
        out.extend(_span(self.field, self._dslots.get((alpha, lam), [])))
        return out

    def plus(self, x):
        return {("+", i): c for i, c in enumerate(self._vec(x)) if c}

    def minus(self, y):
        return {("-", i): c for i, c in enumerate(self._vec(y)) if c}

    def delta(self, x, y):
        return self._delta(x, y)

    def bracket(self, x, y):
        xp, xm, xd = _split(x)
        yp, ym, yd = _split(y)
        out = {}
        for i, c in xp.items():
            for j, c2 in ym.items():
                out = vadd(out, vscale(c * c2, self.delta_table[(i, j)]))
        for j, c in xm.items():
            for i, c2 in yp.items():
                out = vsub(out, vscale(c * c2, self.delta_table[(i, j)]))
        out = vadd(out, self._act(xd, yp, ym))
        out = vsub(out, self._act(yd, xp, xm))
        if xd and yd:
            out = vadd(out, _dcomm(xd, yd))
        return out

    def _act(self, d, vp, vm):
        if not d:
            return {}
        n = self.n
        out = {}
        for (r, c), a in d.items():
            if c < n:
                v = vp.get(c)
                if v:
                    k = ("+", r)
                    out[k] = out.get(k, self.field.zero) + a * v
            else:
                v = vm.get(c - n)
                if v:
                    k = ("-", r - n)
                    out[k] = out.get(k, self.field.zero) + a * v
        return {k: c for k, c in out.items() if c}

    def closure_failures(self):
        """[delta, delta'] must lie in delta(V+, V-)."""
        fails = []
        spans = {s: _span(self.field, v) for s, v in self._dslots.items()}
        for s, xs in spans.items():
            for t, ys in spans.items():
                for x in xs:
                    for y in ys:
                        z = self.bracket(x, y)
                        if not z:
                            continue
                        w = self.weight_of(z)
                        if not self.in_slot(z, *w):
                            fails.append((s, t))
        return fails

    def dictionary_check(self):
        """Root-space dimensions against the Peirce pieces of V."""
        if self.T is None:
            return {"passed": True, "checked": 0}
        T = self.T
        fails = []
        checked = 0
        for lam in self.degrees():
            for part, root in ((1, (2, 0)), ("m", (1, 1)), (2, (0, 2))):
                plus = len(T.basis_of(part, lam))
                minus = len(T.basis_of(part, self.group.neg(lam)))
                checked += 2
                if len(self.slot(root, lam)) != plus:
                    fails.append((root, lam))
                if len(self.slot(rneg(root), lam)) != minus:
                    fails.append((rneg(root), lam))
        return {"passed": not fails, "checked": checked, "failures": fails}


def _split(x):
    p, m, d = {}, {}, {}
    for k, c in x.items():
        if k[0] == "+":
            p[k[1]] = c
        elif k[0] == "-":
            m[k[1]] = c
        else:
            d[(k[1], k[2])] = c
    return p, m, d


def _dcomm(A, B):
    def mul(X, Y):
        rows = {}
        for (l, j), c in Y.items():
            rows.setdefault(l, []).append((j, c))
        out = {}
        for (i, l), a in X.items():
            for j, b in rows.get(l, ()):
                k = ("d", i, j)
                s = out.get(k)
                out[k] = a * b if s is None else s + a * b
        return out
    return {k: c for k, c in vsub(mul(A, B), mul(B, A)).items() if c}


def tkk(J, T=None):
    return TKK(J, T)


# ---------------------------------------------------------------------------
# wrappers

class CentralQuotient(LieAlgebra):
    """L / Z for a central subspace Z inside L_0 (given per degree)."""

    def __init__(self, L, Z):
        super().__init__()
        self.base = L
        self.field, self.group, self.roots = L.field, L.group, L.roots
        self.finite, self.radius = L.finite, L.radius
        self.name = L.name + "/Z"
        self.Z = {}
        for lam, vecs in Z.items():
            if vecs:
                keys = sorted({k for v in vecs for k in v} | {k for b in L.slot(ZERO, lam) for k in b},
                              key=key_order)
                sub = Subspace(L.field, keys)
                for v in vecs:
                    sub.add(v)
                self.Z[lam] = sub

    def reduce(self, x):
        if not x:
            return x
        alpha, lam = self.base.weight_of(x)
        if alpha == ZERO and lam in self.Z:
            return self.Z[lam].reduce(x)
        return x

    def weight_of_key(self, key):
        return self.base.weight_of_key(key)

    def _finite_degrees(self):
        return self.base.degrees()

    def _slot(self, alpha, lam):
        vecs = self.base.slot(alpha, lam)
        if alpha == ZERO and lam in self.Z:
            return _span(self.field, [self.reduce(v) for v in vecs])
        return vecs

    def bracket(self, x, y):
        z = self.base.bracket(x, y)
        parts = {}
        for k, c in z.items():
            parts.setdefault(self.base.weight_of_key(k), {})[k] = c
        out = {}
        for v in parts.values():
            out = vadd(out, self.reduce(v))
        return out


class SlotMutant(LieAlgebra):
    """L with some root slots removed and/or ``extra`` central basis vectors added to L_0^0."""

    def __init__(self, L, deleted=(), extra=0):
        super().__init__()
        self.base = L
        self.field, self.group, self.roots = L.field, L.group, L.roots
        self.finite, self.radius = L.finite, L.radius
        self.deleted = set(deleted)
        self.extra = extra
        self.name = L.name + "-mutant"

    def weight_of_key(self, key):
        if isinstance(key, tuple) and key and key[0] == "z*":
            return (ZERO, self.group.zero)
        return self.base.weight_of_key(key)

    def _finite_degrees(self):
        return self.base.degrees()

    def _slot(self, alpha, lam):
        if alpha in self.deleted:
            return []
        out = list(self.base.slot(alpha, lam))
        if alpha == ZERO and lam == self.group.zero:
            out += [{("z*", i): self.field.one} for i in range(self.extra)]
        return out

    def bracket(self, x, y):
        strip = lambda v: {k: c for k, c in v.items() if not (isinstance(k, tuple) and k and k[0] == "z*")}
        return self.base.bracket(strip(x), strip(y))


# ---------------------------------------------------------------------------
# verification

def jacobi_check(L, budget=20000, seed=0):
    """Antisymmetry and Jacobi on basis triples (all when within budget, else seeded samples)."""
    basis = L.basis()
    n = len(basis)
    fails = []
    for i in range(n):
        for j in range(i, n):
            if vadd(L.bracket(basis[i], basis[j]), L.bracket(basis[j], basis[i])):
                fails.append(("antisymmetry", (i, j)))
    triples = [(i, j, k) for i in range(n) for j in range(i + 1, n) for k in range(j + 1, n)]
    mode = "exhaustive"
    if len(triples) > budget:
        rng = random.Random(seed)
        triples = rng.sample(triples, budget)
        mode = "sampled"
    cache = {}

    def br(a, b):
        if (a, b) not in cache:
            cache[(a, b)] = L.bracket(basis[a], basis[b])
        return cache[(a, b)]

    for i, j, k in triples:
        x, y, z = basis[i], basis[j], basis[k]
        s = vadd(vadd(L.bracket(x, br(j, k)), L.bracket(y, br(k, i))), L.bracket(z, br(i, j)))
        if s:
            fails.append(("jacobi", (i, j, k)))
            if len(fails) > 5:
                break
    return {"passed": not fails, "mode": mode, "checked": len(triples), "failures": fails[:5]}


def rg1_check(L):
    """[L_a^l, L_b^m] inside L_{a+b}^{l+m} (zero when a + b is not a root)."""
    fails = []
    checked = 0
    slots = L.slots()
    g = L.group
    for a, l in slots:
        for b, m in slots:
            target = (radd(a, b), g.add(l, m))
            for x in L.slot(a, l):
                for y in L.slot(b, m):
                    z = L.bracket(x, y)
                    checked += 1
                    if not z:
                        continue
                    ok = all(L.weight_of_key(k) == target for k in z) and L.in_slot(z, *target)
                    if not ok:
                        fails.append((a, l, b, m))
    return {"passed": not fails, "checked": checked, "failures": fails[:5]}


def support_check(L):
    """Weights of the ambient keys used by the algebra lie in R; TKK also reports delta's outside R."""
    bad = []
    for a, l in L.slots():
        if a not in L.roots:
            bad.append((a, l))
    extra = getattr(L, "outside_R", [])
    return {"passed": not bad and not extra, "failures": (bad + extra)[:5]}


def rg2_check(L):
    """L_0^lam against the sum of [L_a^mu, L_-a^{lam-mu}], a != 0."""
    g = L.group
    degs = L.degrees()
    out = {}
    for lam in degs:
        target = L.slot(ZERO, lam)
        if not target:
            continue
        found = []
        for a in L.roots:
            if a == ZERO or a == (0,):
                continue
            for mu in degs:
                nu = g.sub(lam, mu)
                if not L.finite and not g.in_window(nu, L.radius):
                    continue
                for x in L.slot(a, mu):
                    for y in L.slot(rneg(a), nu):
                        found.append(L.bracket(x, y))
        found = _span(L.field, found)
        if len(found) == len(target):
            out[lam] = "equal"
        else:
            out[lam] = "fail" if L.finite else "not evaluated"
    fails = [l for l, v in out.items() if v == "fail"]
    return {"passed": not fails and all(v == "equal" for v in out.values()),
            "slots": out, "failures": fails[:5]}


def _test_basis(L):
    out = []
    for a, l in L.slots():
        for x in L.slot(a, l):
            out.append((a, x))
    return out


def find_inverse(L, e, alpha, lam, test=None):
    """f in L_{-alpha}^{-lam} with h = [e, f] acting on every L_beta by <beta, alpha^vee>.

    Returns (f, h) or None; the action is checked on the inspected basis.
    """
    g = L.group
    cands = L.slot(rneg(alpha), g.neg(lam))
    if not cands:
        return None
    test = test if test is not None else _test_basis(L)
    F = L.field
    hs = [L.bracket(e, f) for f in cands]
    rows_img = []
    for h in hs:
        col = {}
        for t, (beta, x) in enumerate(test):
            for k, c in L.bracket(h, x).items():
                col[(t, k)] = c
        rows_img.append(col)
    rhs = {}
    for t, (beta, x) in enumerate(test):
        c = cartan_integer(beta, alpha) if beta != ZERO else 0
        if c:
            for k, v in x.items():
                rhs[(t, k)] = F(c) * v
    keys = sorted(set(rhs) | {k for col in rows_img for k in col}, key=key_order)
    from .exactlin import solve
    A = [[col.get(k, F.zero) for col in rows_img] for k in keys]
    b = [rhs.get(k, F.zero) for k in keys]
    sol = solve(A, b, F)
    if sol is None:
        return None
    f = vcomb(zip(sol.particular, cands))
    h = L.bracket(e, f)
    return f, h


def sl2_ok(L, e, f, h):
    two = L.field(2)
    return L.bracket(h, e) == vscale(two, e) and L.bracket(h, f) == vscale(-two, f)


def invertible_in_slot(L, alpha, lam=None, seed=0, tries=5, test=None):
    """Seek an invertible element of L_alpha^lam: basis elements first, then seeded combinations."""
    lam = L.group.zero if lam is None else lam
    basis = L.slot(alpha, lam)
    if not basis:
        return None
    test = test if test is not None else _test_basis(L)
    rng = random.Random(seed)
    cands = list(basis)
    for _ in range(tries if len(basis) > 1 else 0):
        cands.append(vcomb((L.field.random(rng), b) for b in basis))
    for e in cands:
        if not e:
            continue
        r = find_inverse(L, e, alpha, lam, test)
        if r is not None:
            f, h = r
            return {"e": e, "f": f, "h": h, "sl2": sl2_ok(L, e, f, h)}
    return None


def root_grading_check(L, seed=0):
    """RG1, RG2, support in R, and an sl2 certificate in L_alpha^0 for each nonzero root."""
    test = _test_basis(L)
    inv = {}
    for a in L.roots:
        if a == ZERO:
            continue
        cert = invertible_in_slot(L, a, seed=seed, test=test)
        inv[a] = cert if cert is not None else "failure"
    rg1 = rg1_check(L)
    rg2 = rg2_check(L)
    sup = support_check(L)
    ok_inv = all(v != "failure" and v["sl2"] for v in inv.values())
    return {"RG1": rg1, "RG2": rg2, "support_in_R": sup, "invertibles": inv,
            "passed": rg1["passed"] and rg2["passed"] and sup["passed"] and ok_inv}


def centre(L):
    """Z(L) = {x in L_0 : [x, L_alpha] = 0 for alpha in +-R1}, per degree.

    Exact for finite algebras; on a window the conditions come from the
    window, so a zero answer is exact and a nonzero one is an upper bound.
    """
    F = L.field
    ones = [a for a in L.roots if a in R1 or rneg(a) in R1]
    test = [x for a in ones for l in L.degrees() for x in L.slot(a, l)]
    out = {}
    for lam in L.degrees():
        src = L.slot(ZERO, lam)
        if not src:
            continue
        images = []
        for x in src:
            img = {}
            for t, y in enumerate(test):
                for k, c in L.bracket(x, y).items():
                    img[(t, k)] = c
            images.append(img)
        out[lam] = _kernel(F, src, images)
    return out


def slot_division(L, alpha, lam, test, budget=2000):
    """Every nonzero element of L_alpha^lam invertible: True / False / "unknown"."""
    basis = L.slot(alpha, lam)
    if not basis:
        return True
    F = L.field
    if len(basis) == 1:
        return find_inverse(L, basis[0], alpha, lam, test) is not None
    if not F.is_finite:
        return "unknown"
    from .assoc import projective_count, projective_points
    if projective_count(F, len(basis)) > budget:
        return "unknown"
    for v in projective_points(F, len(basis)):
        e = vcomb(zip(v, basis))
        if find_inverse(L, e, alpha, lam, test) is None:
            return False
    return True


def lie_predicates(L, budget=2000):
    test = _test_basis(L)
    Z = centre(L)
    division = True
    torus = True
    slots = {}
    for a, l in L.slots():
        if a == ZERO:
            continue
        n = len(L.slot(a, l))
        d = slot_division(L, a, l, test, budget)
        slots[(a, l)] = {"dim": n, "division": d}
        if d is False:
            division = False
        elif d == "unknown" and division is True:
            division = "unknown"
        if n > 1:
            torus = False
    if torus and division is not True:
        torus = division
    g = L.group
    support = sorted({l for a, l in L.slots()}, key=key_order)
    spanned = span_subgroup(SupportSet.finite(g, support)).index == 1 if support else g.length == 0
    return {"centre": {l: v for l, v in Z.items() if v}, "centre_zero": not any(Z.values()),
            "is_division_graded": division, "is_lie_torus": torus, "support": support,
            "spans_lambda": spanned, "slots": slots, "windowed": not L.finite}


def lie_supports(L):
    """(script L, script S) = supports of the 2e1 and e1+e2 root spaces, with the pointed-reflection relations."""
    g = L.group
    degs = L.degrees()
    Ls = [l for l in degs if L.slot((2, 0), l)]
    Ss = [l for l in degs if L.slot((1, 1), l)]
    if L.finite:
        Lset = SupportSet.finite(g, Ls)
        Sset = SupportSet.finite(g, Ss)
    else:
        window = degs
        Sset = _window_coset(g, Ss, window)
        Lset = _window_coset(g, Ls, window, Sset)
    return {"L": Lset, "S": Sset, "L_list": Ls, "S_list": Ss,
            "S_pointed_reflection": is_pointed_reflection_subspace(Sset),
            "L_pointed_reflection": is_pointed_reflection_subspace(Lset),
            "relations": support_relations_check(Lset, Sset)}


def _window_coset(g, support, window, other=None):
    from .grading import Subgroup
    trials = []
    if other is not None and other.subgroup is not None:
        trials.append(Subgroup(g, [g.scale(2, b) for b in other.subgroup.basis()]))
    trials.append(Subgroup(g, list(support)))
    trials.append(None)
    for sub in trials:
        try:
            return SupportSet.from_window(g, support, window, sub)
        except ValueError:
            continue
    raise LieError("windowed support is not a union of cosets", support)


def graded_comparison(L1, L2, seed=0, spots=20):
    """Degreewise slot dimensions and bracket spot checks (dimension of [L_a^l, L_b^m] per slot pair)."""
    d1, d2 = L1.slot_dims(), L2.slot_dims()
    dims_ok = d1 == d2
    rng = random.Random(seed)
    pairs = sorted(d1, key=key_order)
    fails = []
    checked = 0
    if pairs:
        for _ in range(spots):
            (a, l), (b, m) = rng.choice(pairs), rng.choice(pairs)
            r1 = _span(L1.field, [L1.bracket(x, y) for x in L1.slot(a, l) for y in L1.slot(b, m)])
            r2 = _span(L2.field, [L2.bracket(x, y) for x in L2.slot(a, l) for y in L2.slot(b, m)])
            checked += 1
            if len(r1) != len(r2):
                fails.append(((a, l), (b, m)))
    return {"passed": dims_ok and not fails, "dims_equal": dims_ok, "spot_checks": checked,
            "failures": fails[:5]}


def sl2_certificates(L, seed=0):
    """For every nonzero slot (alpha != 0) in view: dimension and a solved inverse of its basis element(s)."""
    test = _test_basis(L)
    out = {}
    for a, l in L.slots():
        if a == ZERO:
            continue
        basis = L.slot(a, l)
        certs = []
        for e in basis:
            r = find_inverse(L, e, a, l, test)
            certs.append(None if r is None else {"f": r[0], "h": r[1], "sl2": sl2_ok(L, e, r[0], r[1])})
        out[(a, l)] = {"dim": len(basis), "certificates": certs}
    return out
