"""Concrete triangulated systems: hermitian matrix systems and Clifford systems.

Hermitian elements a0[11] + a[12] + b0[22] are stored on keys
("11", a), ("12", a), ("22", a) for a basis key a of A; the diagonal
carrier is A0, so the carrier basis is not key-aligned on the diagonal.
Clifford elements c1 e1 + m + c2 e2 use keys ("e1", d), ("m", k), ("e2", d).
"""

from .assoc import (ExchangeDouble, MatrixAlgebra, QuantumTorus, SubgroupAlgebra,
                    algebra_from_json, automorphism_from_json, exchange_morphisms, field_algebra,
                    identity_morphism, inverse, involution_from_json,
                    make_coordinate_system, reversal_involution, transpose_involution,
                    truncated_polynomial_algebra)
from .exactlin import GF, QQ, Field, GradedSubspace, key_order, vadd, vcomb, vneg, vsub
from .grading import GradingGroup
from .jordan import JordanAlgebra, JordanError, JordanTriple, TriangulatedSystem
from .quadform import (GradedQuadForm, QuadFormError, check_base_point, check_clifford_ample,
                       clifford_form, element_from_json, quadform_from_json)


# ---------------------------------------------------------------------------
# hermitian matrix systems

class HermitianMatrixSystem(JordanTriple):
    """H2(A, A0, pi, bar) with P(X)Y = X bar(Y) X."""

    def __init__(self, cs, name=None):
        self.cs = cs
        self.A = cs.A
        self.pi = cs.pi
        self.barA = cs.bar
        self.field = cs.A.field
        self.group = cs.A.group
        self.finite = cs.A.finite
        self.name = name or "H2(%s)" % self.A.name
        one = self.A.unit()
        self.u = self.element(a=one)
        self.e1 = self.element(a0=one)
        self.e2 = self.element(b0=one)

    def degree_of(self, key):
        return self.A.degree_of(key[1])

    def keys_of_degree(self, deg):
        ks = self.A.keys_of_degree(deg)
        return [(p, a) for p in ("11", "12", "22") for a in ks]

    def basis_of_degree(self, deg):
        a0 = self.cs.a0_basis(deg)
        out = [self.element(a0=v) for v in a0]
        out += [self.element(a={k: self.field.one}) for k in self.A.keys_of_degree(deg)]
        out += [self.element(b0=v) for v in a0]
        return out

    def all_degrees(self):
        return [d for d in self.A.degrees() if self.basis_of_degree(d)]

    # coordinates ----------------------------------------------------------

    @staticmethod
    def element(a0=None, a=None, b0=None):
        out = {}
        for p, v in (("11", a0), ("12", a), ("22", b0)):
            for k, c in (v or {}).items():
                if c:
                    out[(p, k)] = c
        return out

    @staticmethod
    def parts(x):
        out = {"11": {}, "12": {}, "22": {}}
        for (p, k), c in x.items():
            out[p][k] = c
        return out["11"], out["12"], out["22"]

    def matrix(self, x):
        """2x2 matrix over A: [[a0, a], [a^pi, b0]]."""
        a0, a, b0 = self.parts(x)
        return [[a0, a], [self.pi(a), b0]]

    def _from_matrix(self, X):
        return self.element(X[0][0], X[0][1], X[1][1])

    def _mat_mul(self, X, Y):
        A = self.A
        return [[vadd(A.mul(X[i][0], Y[0][j]), A.mul(X[i][1], Y[1][j])) for j in range(2)] for i in range(2)]

    def _bar_matrix(self, Y):
        return [[self.barA(e) for e in row] for row in Y]

    def P(self, x, y):
        X = self.matrix(x)
        return self._from_matrix(self._mat_mul(self._mat_mul(X, self._bar_matrix(self.matrix(y))), X))

    def triple(self, x, y, z):
        X, Z = self.matrix(x), self.matrix(z)
        Yb = self._bar_matrix(self.matrix(y))
        a = self._mat_mul(self._mat_mul(X, Yb), Z)
        b = self._mat_mul(self._mat_mul(Z, Yb), X)
        return self._from_matrix([[vadd(a[i][j], b[i][j]) for j in range(2)] for i in range(2)])

    # closed forms of the derived automorphisms
    def bar_formula(self, x):
        a0, a, b0 = self.parts(x)
        return self.element(self.barA(a0), self.barA(a), self.barA(b0))

    def star_formula(self, x):
        a0, a, b0 = self.parts(x)
        return self.element(b0, self.pi(a), a0)

    def triangulated(self, radius=1):
        return TriangulatedSystem(self, self.u, self.e1, self.e2, radius=radius)

    def algebra(self, radius=1):
        if not self.barA.is_identity(self.A.keys_in_window(radius)):
            raise JordanError("the algebra variant needs bar = id")
        return JordanAlgebra(self, vadd(self.e1, self.e2), radius=radius)

    def exchange_view(self, x):
        """For A = B + B^op with the exchange involution: the matching 2x2 matrix over B."""
        A = self.A
        if not isinstance(A, ExchangeDouble) or A.slots != 2:
            raise JordanError("exchange view needs an exchange double B + B^op")
        a0, a, b0 = self.parts(x)
        return [[A.component(a0, 0), A.component(a, 0)], [A.component(a, 1), A.component(b0, 0)]]


def build_h2(cs, name=None, radius=1):
    """H2(A, A0, pi, bar) with its standard triangle (1[12]; 1[11], 1[22])."""
    J = HermitianMatrixSystem(cs, name)
    return J, J.triangulated(radius)


# ---------------------------------------------------------------------------
# quadratic form triples and Clifford systems

class QuadFormTriple(JordanTriple):
    """J(q, S): P(x)y = q(x, S y) x - q(x) S y on the module of a GradedQuadForm."""

    def __init__(self, qf, name="J(q,S)"):
        self.qf = qf
        self.field = qf.field
        self.group = qf.group
        self.finite = qf.finite
        self.name = name

    def degree_of(self, key):
        return self.qf.degree_of(key)

    def keys_of_degree(self, deg):
        return self.qf.keys_of_degree(deg)

    def all_degrees(self):
        return self.qf.degrees()

    def P(self, x, y):
        qf = self.qf
        sy = qf.S(y)
        return vsub(qf.act(qf.bilinear(x, sy), x), qf.act(qf.q(x), sy))

    def invertible_element(self, x):
        """(flag, inverse) from q(x) invertible in D, inverse q(x)^-1 S(x)."""
        qx = self.qf.q(x)
        if not qx:
            return False, None
        inv = inverse(self.qf.D, qx)
        if inv is None:
            return False, None
        return True, self.qf.act(inv, self.qf.S(x))


class CliffordSystem(JordanTriple):
    """AC(q, S, D0) (or FC(q, S) when D0 = D) with the explicit product formulas."""

    def __init__(self, qf, base_point=None, D0=None, name=None, window=1, check=True):
        self.qf = qf
        self.D = qf.D
        self.field = qf.field
        self.group = qf.group
        self.finite = qf.finite
        self.full = D0 is None
        if D0 is None:
            D = self.D
            D0 = GradedSubspace(D.field, D.degree_of, D.keys_of_degree,
                                rule=lambda d: [{k: D.field.one} for k in D.keys_of_degree(d)])
        elif not isinstance(D0, GradedSubspace):
            D0 = self.D.subspace(list(D0))
        self.D0 = D0
        self.name = name or ("FC(q,S)" if self.full else "AC(q,S,D0)")
        if check and not self.full:
            fails = check_clifford_ample(qf, D0, window)
            if fails:
                raise QuadFormError("D0 is not Clifford-ample: %s" % fails[0][0], fails[0][1])
        one = self.D.unit()
        self.e1 = self.element(c1=one)
        self.e2 = self.element(c2=one)
        self.u = None
        if base_point is not None:
            check_base_point(qf, base_point)
            self.u = self.element(m=base_point)

    def degree_of(self, key):
        if key[0] == "m":
            return self.qf.degree_of(key[1])
        return self.D.degree_of(key[1])

    def keys_of_degree(self, deg):
        dk = self.D.keys_of_degree(deg)
        return [("e1", k) for k in dk] + [("m", k) for k in self.qf.keys_of_degree(deg)] + [("e2", k) for k in dk]

    def basis_of_degree(self, deg):
        d0 = self.D0.component(deg)
        one = self.field.one
        return ([self.element(c1=v) for v in d0] + [{("m", k): one} for k in self.qf.keys_of_degree(deg)]
                + [self.element(c2=v) for v in d0])

    def all_degrees(self):
        degs = set(self.D.degrees()) | set(self.qf.degrees())
        return [d for d in sorted(degs, key=key_order) if self.basis_of_degree(d)]

    @staticmethod
    def element(c1=None, m=None, c2=None):
        out = {}
        for p, v in (("e1", c1), ("m", m), ("e2", c2)):
            for k, c in (v or {}).items():
                if c:
                    out[(p, k)] = c
        return out

    @staticmethod
    def parts(x):
        out = {"e1": {}, "m": {}, "e2": {}}
        for (p, k), c in x.items():
            out[p][k] = c
        return out["e1"], out["m"], out["e2"]

    def P(self, x, y):
        D, qf = self.D, self.qf
        mul, bar = D.mul, qf.bar
        c1, m, c2 = self.parts(x)
        b1, n, b2 = self.parts(y)
        Sn = qf.S(n)
        qmSn = qf.bilinear(m, Sn)
        qm = qf.q(m)
        bb1, bb2 = bar(b1), bar(b2)
        d1 = vcomb([(1, mul(mul(c1, c1), bb1)), (1, mul(c1, qmSn)), (1, mul(bb2, qm))])
        d2 = vcomb([(1, mul(mul(c2, c2), bb2)), (1, mul(c2, qmSn)), (1, mul(bb1, qm))])
        coef_m = vcomb([(1, mul(c1, bb1)), (1, mul(c2, bb2)), (1, qmSn)])
        coef_s = vsub(mul(c1, c2), qm)
        p = vadd(qf.act(coef_m, m), qf.act(coef_s, Sn))
        return self.element(d1, p, d2)

    def triple(self, x, y, z):
        D, qf = self.D, self.qf
        mul, bar = D.mul, qf.bar
        c1, m, c2 = self.parts(x)
        b1, n, b2 = self.parts(y)
        k1, mm, k2 = self.parts(z)
        Sn = qf.S(n)
        bb1, bb2 = bar(b1), bar(b2)
        qmm = qf.bilinear(m, mm)
        two = self.field(2)

        def d(ci, ki, bbi, bbj):
            return vcomb([(1, qf.bilinear(vadd(qf.act(ci, mm), qf.act(ki, m)), Sn)),
                          (1, mul(bbj, qmm)),
                          (two, mul(mul(ci, ki), bbi))])

        d1 = d(c1, k1, bb1, bb2)
        d2 = d(c2, k2, bb2, bb1)
        a = vcomb([(1, mul(c1, bb1)), (1, mul(c2, bb2)), (1, qf.bilinear(m, Sn))])
        b = vcomb([(1, mul(k1, bb1)), (1, mul(k2, bb2)), (1, qf.bilinear(mm, Sn))])
        s = vcomb([(1, mul(c1, k2)), (1, mul(k1, c2)), (-1, qmm)])
        p = vcomb([(1, qf.act(a, mm)), (1, qf.act(b, m)), (1, qf.act(s, Sn))])
        return self.element(d1, p, d2)

    # derived data ---------------------------------------------------------

    def clifford_form(self):
        """(q~, S~) on D e1 + M + D e2 with keys matching this system."""
        if "e1" in self.qf.labels or "e2" in self.qf.labels:
            raise QuadFormError("module labels clash with e1/e2")
        return clifford_form(self.qf)

    def to_form_key(self, key):
        p, k = key
        return (p, k) if p != "m" else k

    def from_form_key(self, key):
        a, k = key
        return key if a in ("e1", "e2") else ("m", key)

    def to_form(self, x):
        return {self.to_form_key(k): c for k, c in x.items()}

    def from_form(self, v):
        return {self.from_form_key(k): c for k, c in v.items()}

    def generic(self):
        """The full quadratic form triple J(q~, S~), same keys."""
        return _RekeyedTriple(QuadFormTriple(self.clifford_form(), "J(q~,S~)"), self)

    def q_tilde(self, x):
        c1, m, c2 = self.parts(x)
        return vsub(self.D.mul(c1, c2), self.qf.q(m))

    def S_tilde(self, x):
        c1, m, c2 = self.parts(x)
        return self.element(self.qf.bar(c2), vneg(self.qf.S(m)), self.qf.bar(c1))

    def bar_formula(self, x):
        """bar(d0 e1 + m + c0 e2) = bar(d0) e1 + S(m) + bar(c0) e2 in the full system."""
        c1, m, c2 = self.parts(x)
        return self.element(self.qf.bar(c1), self.qf.S(m), self.qf.bar(c2))

    def star_formula(self, x):
        """(d0 e1 + m + c0 e2)* = c0 e1 + (q(u, m) u - m) + d0 e2."""
        c1, m, c2 = self.parts(x)
        u = self.parts(self.u)[1]
        qum = self.qf.bilinear(u, m)
        return self.element(c2, vsub(self.qf.act(qum, u), m), c1)

    def invertible_element(self, x):
        """q~(x) invertible in D; inverse q~(x)^-1 S~(x)."""
        qx = self.q_tilde(x)
        if not qx:
            return False, None
        try:
            inv = inverse(self.D, qx)
        except ValueError:
            return False, None
        if inv is None:
            return False, None
        s = self.S_tilde(x)
        c1, m, c2 = self.parts(s)
        return True, self.element(self.D.mul(inv, c1), self.qf.act(inv, m), self.D.mul(inv, c2))

    def triangulated(self, radius=1):
        if self.u is None:
            raise JordanError("no base point: the system has no standard triangle")
        return TriangulatedSystem(self, self.u, self.e1, self.e2, radius=radius)

    def algebra(self, radius=1):
        qf = self.qf
        keys = qf.keys_in_window(radius)
        if not qf.bar.is_identity(self.D.keys_in_window(radius)):
            raise JordanError("the algebra variant needs bar = id")
        for k in keys:
            if qf.S({k: self.field.one}) != {k: self.field.one}:
                raise JordanError("the algebra variant needs S = id on M")
        return JordanAlgebra(self, vadd(self.e1, self.e2), radius=radius)


class _RekeyedTriple(JordanTriple):
    """A quadratic form triple presented on the keys of a Clifford system."""

    def __init__(self, inner, C):
        self.inner = inner
        self.C = C
        self.field = C.field
        self.group = C.group
        self.finite = C.finite
        self.name = inner.name

    def degree_of(self, key):
        return self.C.degree_of(key)

    def keys_of_degree(self, deg):
        return self.C.keys_of_degree(deg)

    def basis_of_degree(self, deg):
        return self.C.basis_of_degree(deg)

    def all_degrees(self):
        return self.C.all_degrees()

    def P(self, x, y):
        return self.C.from_form(self.inner.P(self.C.to_form(x), self.C.to_form(y)))


def build_clifford(qf, base_point, D0=None, window=1, name=None):
    """AC(q, S, D0) (full when D0 is None) with its standard triangle (u; e1, e2)."""
    C = CliffordSystem(qf, base_point, D0, name=name, window=window)
    return C, C.triangulated(window)


def cross_check_formula(C, radius=1, budget=None):
    """Compare the explicit Clifford formulas with J(q~, S~) on basis triples.

    Returns {"passed", "checked", "failures"}; P(b_i)b_j, the triple
    products {b_i, b_j, b_k} and their symmetric counterparts are compared.
    """
    G = C.generic()
    basis = C.basis(None if C.finite else radius)
    fails = []
    checked = 0
    for x in basis:
        for y in basis:
            checked += 1
            if C.P(x, y) != G.P(x, y):
                fails.append({"product": "P", "x": x, "y": y})
            for z in basis:
                checked += 1
                if C.triple(x, y, z) != G.triple(x, y, z):
                    fails.append({"product": "triple", "x": x, "y": y, "z": z})
                if budget and checked > budget:
                    return {"passed": not fails, "checked": checked, "failures": fails[:5], "complete": False}
    return {"passed": not fails, "checked": checked, "failures": fails[:5], "complete": True}


# ---------------------------------------------------------------------------
# example factories

def laurent_clifford_example(n, gamma_basis, label_degrees, values, field=None, name=None):
    """Ample Clifford system over a Laurent ring D = k[Gamma] with Lambda = Z^n.

    ``label_degrees``: label -> degree in Z^n; ``values``: label -> degree
    in Gamma of q(u_label) (coefficient 1) or a {degree: coefficient} dict.
    The first label of degree 0 with value 1 is the base point.  S = id.
    """
    field = field or QQ
    group = GradingGroup(n)
    D = SubgroupAlgebra(field, group, gamma_basis)
    labels = list(label_degrees)
    vals = {}
    for a in labels:
        v = values[a]
        if isinstance(v, dict):
            vals[a] = {group.degree(k): field(c) for k, c in v.items()}
        else:
            vals[a] = {group.degree(v): field.one}
    qf = GradedQuadForm(D, labels, {a: group.degree(d) for a, d in label_degrees.items()}, vals)
    base = None
    for a in labels:
        if qf.deg[a] == group.zero and vals[a] == D.unit():
            base = qf.basis_vector(a)
            break
    return CliffordSystem(qf, base, name=name or "AC(Laurent)")


def _model(name, family, J, T, algebra=None, window=None, coords=None, notes=""):
    return {"name": name, "family": family, "triple": J, "triangulated": T, "algebra": algebra,
            "window": window, "coords": coords, "notes": notes}


def h2_quantum_minus1(window=2):
    """H2 over the quantum torus t1 t2 = -t2 t1 with reversal involution, A0 = H(A, pi)."""
    A = QuantumTorus(QQ, [[1, -1], [-1, 1]], name="Q_q(-1)")
    cs = make_coordinate_system(A, reversal_involution(A), identity_morphism(A), "hermitian", window=window)
    J, T = build_h2(cs, "h2_quantum_minus1", radius=window)
    return _model("h2_quantum_minus1", "hermitian", J, T, None, window, cs,
                  "diagonal, division-triangulated torus; windowed")


def mat2_f7():
    """H2(Mat2(F7), Sym2, transpose, id)."""
    F = GF(7)
    B = field_algebra(F)
    A = MatrixAlgebra(B, 2, name="Mat2(F7)")
    cs = make_coordinate_system(A, transpose_involution(A), identity_morphism(A), "hermitian")
    J, T = build_h2(cs, "mat2_f7")
    return _model("mat2_f7", "hermitian", J, T, J.algebra(), None, cs, "graded-simple, dim 10")


def mat2_exchange_f7():
    """H2(F7 + F7^op, diag, exchange, id), canonically Mat2(F7)."""
    F = GF(7)
    E = ExchangeDouble(field_algebra(F), "pi_exchange")
    pi, bar = exchange_morphisms(E)
    cs = make_coordinate_system(E, pi, bar, "hermitian")
    J, T = build_h2(cs, "mat2_exchange_f7")
    return _model("mat2_exchange_f7", "hermitian", J, T, J.algebra(), None, cs, "Mat2(F7) via exchange")


def mat2_mat2_f7():
    """H2(Mat2(F7) + Mat2(F7)^op, diag, exchange, id), canonically Mat2(Mat2(F7))."""
    F = GF(7)
    E = ExchangeDouble(MatrixAlgebra(field_algebra(F), 2), "pi_exchange")
    pi, bar = exchange_morphisms(E)
    cs = make_coordinate_system(E, pi, bar, "hermitian")
    J, T = build_h2(cs, "mat2_mat2_f7")
    return _model("mat2_mat2_f7", "hermitian", J, T, J.algebra(), None, cs, "noncommutative exchange double")


def h2_nilpotent_f7():
    """H2(F7[x]/(x^2), A, id, id): degenerate, x[12] is trivial."""
    F = GF(7)
    A = truncated_polynomial_algebra(F, 2)
    cs = make_coordinate_system(A, identity_morphism(A, anti=True), identity_morphism(A), "hermitian")
    J, T = build_h2(cs, "h2_nilpotent_f7")
    return _model("h2_nilpotent_f7", "hermitian", J, T, J.algebra(), None, cs, "degenerate")


def h2_rational():
    """H2(Q, Q, id, id): 3-dimensional."""
    A = field_algebra(QQ)
    cs = make_coordinate_system(A, identity_morphism(A, anti=True), identity_morphism(A), "hermitian")
    J, T = build_h2(cs, "h2_rational")
    return _model("h2_rational", "hermitian", J, T, J.algebra(), None, cs, "")


def _field_form(F, values, bilinear=None):
    D = field_algebra(F)
    labels = list(values)
    qf = GradedQuadForm(D, labels, {a: () for a in labels}, {a: {0: F(v)} for a, v in values.items()},
                        {k: {0: F(v)} for k, v in (bilinear or {}).items()})
    return D, qf


def ac_rank2_f7_aniso():
    """ACalg over F7 with q = x^2 + y^2 on M = F7 u + F7 v (anisotropic: -1 is not a square)."""
    F = GF(7)
    D, qf = _field_form(F, {"u": 1, "v": 1})
    C = CliffordSystem(qf, qf.basis_vector("u"), name="ac_rank2_f7_aniso")
    return _model("ac_rank2_f7_aniso", "clifford", C, C.triangulated(), C.algebra(), None, qf,
                  "division-triangulated")


def ac_degenerate_f7():
    """AC over F7 with q(u) = 1, q(v) = 0, q(u, v) = 0: v spans the radical of q."""
    F = GF(7)
    D, qf = _field_form(F, {"u": 1, "v": 0})
    C = CliffordSystem(qf, qf.basis_vector("u"), name="ac_degenerate_f7")
    return _model("ac_degenerate_f7", "clifford", C, C.triangulated(), C.algebra(), None, qf, "degenerate")


def ac_rank1_q():
    """ACalg(Q, rank-1 M): M = Q u, q(u) = 1."""
    D, qf = _field_form(QQ, {"u": 1})
    C = CliffordSystem(qf, qf.basis_vector("u"), name="ac_rank1_q")
    return _model("ac_rank1_q", "clifford", C, C.triangulated(), C.algebra(), None, qf, "")


def ac_rank3_q():
    """FC over Q with q = x^2 - 2y^2 + 3z^2 + xy (rank 3)."""
    D, qf = _field_form(QQ, {"u": 1, "v": -2, "w": 3}, {("u", "v"): 1})
    C = CliffordSystem(qf, qf.basis_vector("u"), name="ac_rank3_q")
    return _model("ac_rank3_q", "clifford", C, C.triangulated(), C.algebra(), None, qf, "")


def ac_rank3_f7():
    """FC over F7 with q = x^2 + 3y^2 + 4z^2 + 2yz (rank 3, nondegenerate)."""
    F = GF(7)
    D, qf = _field_form(F, {"u": 1, "v": 3, "w": 4}, {("v", "w"): 2})
    C = CliffordSystem(qf, qf.basis_vector("u"), name="ac_rank3_f7")
    return _model("ac_rank3_f7", "clifford", C, C.triangulated(), C.algebra(), None, qf, "")


def ac_z_torus(window=2):
    """Lambda = Z, D = Q[s, 1/s] with s of degree 2, M = D u + D u1, deg u1 = 1, q(u1) = s."""
    C = laurent_clifford_example(1, [(2,)], {"u": (0,), "u1": (1,)}, {"u": (0,), "u1": (2,)},
                                 name="ac_z_torus")
    return _model("ac_z_torus", "clifford", C, C.triangulated(window), C.algebra(window), window, C.qf,
                  "Gamma = 2Z; division-triangulated torus; windowed")


REGISTRY = {
    "h2_quantum_minus1": h2_quantum_minus1,
    "mat2_f7": mat2_f7,
    "ac_rank2_f7_aniso": ac_rank2_f7_aniso,
    "ac_z_torus": ac_z_torus,
    "h2_nilpotent_f7": h2_nilpotent_f7,
    "ac_degenerate_f7": ac_degenerate_f7,
    "ac_rank1_q": ac_rank1_q,
    "ac_rank3_q": ac_rank3_q,
    "ac_rank3_f7": ac_rank3_f7,
    "mat2_exchange_f7": mat2_exchange_f7,
    "mat2_mat2_f7": mat2_mat2_f7,
    "h2_rational": h2_rational,
}

WINDOWED = {"h2_quantum_minus1", "ac_z_torus"}


def registry(name, window=None):
    if name not in REGISTRY:
        raise KeyError("unknown registry model %r" % (name,))
    if name in WINDOWED and window is not None:
        return REGISTRY[name](window)
    return REGISTRY[name]()


# ---------------------------------------------------------------------------
# JSON system specifications

def system_from_json(obj, window=1):
    """Build a model record from a JSON specification.

    {"family": "hermitian", "field": "F7", "algebra": {...}, "pi": ..., "bar": ..., "A0": "hermitian" | [...]}
    {"family": "clifford", "field": "Q", "D": {...}, "form": {...}, "base_point": [[[label, key], c], ...],
     "D0": "full" | [...], "bar": ...}
    {"registry": name}
    """
    if "registry" in obj:
        return registry(obj["registry"], obj.get("window", window))
    field = Field.from_json(obj.get("field", "Q"))
    fam = obj.get("family")
    if fam == "hermitian":
        A = algebra_from_json(obj["algebra"], field)
        pi = involution_from_json(A, obj.get("pi", "id"))
        bar = automorphism_from_json(A, obj.get("bar", "id"))
        A0 = obj.get("A0", "hermitian")
        if not isinstance(A0, str):
            A0 = [element_from_json(A, v) for v in A0]
        cs = make_coordinate_system(A, pi, bar, A0, window=window)
        J, T = build_h2(cs, obj.get("name"), radius=window)
        try:
            alg = J.algebra(window)
        except JordanError:
            alg = None
        return _model(obj.get("name", "hermitian"), "hermitian", J, T, alg,
                      None if A.finite else window, cs)
    if fam == "clifford":
        D = algebra_from_json(obj["D"], field)
        bar = automorphism_from_json(D, obj.get("bar", "id"))
        qf = quadform_from_json(obj["form"], D, bar)
        bp = obj.get("base_point")
        if bp is None:
            base = qf.basis_vector(qf.labels[0])
        else:
            base = {}
            for key, c in bp:
                base[(key[0], tuple(key[1]) if isinstance(key[1], list) else key[1])] = field(c)
        D0 = obj.get("D0", "full")
        D0 = None if D0 == "full" else [element_from_json(D, v) for v in D0]
        C = CliffordSystem(qf, base, D0, name=obj.get("name"), window=window)
        try:
            alg = C.algebra(window)
        except JordanError:
            alg = None
        return _model(obj.get("name", "clifford"), "clifford", C, C.triangulated(window), alg,
                      None if D.finite else window, qf)
    raise JordanError("unknown system family %r" % (fam,))
