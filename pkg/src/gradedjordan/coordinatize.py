"""Coordinatization of triangulated systems.

Operators on M are sparse matrices {(i, j): c} over a homogeneous basis
of M; the entry (i, j) has degree deg(b_i) - deg(b_j), so operator
algebras are graded subspaces of End(M) closed under products.
"""

from .assoc import Morphism, StructureConstantAlgebra, make_coordinate_system
from .assoc import is_graded_semiprime
from .assoc import is_graded_simple as assoc_is_graded_simple
from .exactlin import BasisCoordinates, GradedMap, GradedSubspace, closure, key_order, nullspace, solve, vcomb, vsub
from .jordan import JordanError, invertible, is_graded_nondegenerate, is_graded_simple
from .models import CliffordSystem, HermitianMatrixSystem
from .quadform import GradedQuadForm


class CoordinatizationRefused(JordanError):
    pass


# ---------------------------------------------------------------------------
# operator plumbing

def mat_mul(A, B):
    rows = {}
    for (k, j), c in B.items():
        rows.setdefault(k, []).append((j, c))
    out = {}
    for (i, k), a in A.items():
        for j, b in rows.get(k, ()):
            s = out.get((i, j))
            s = a * b if s is None else s + a * b
            if s:
                out[(i, j)] = s
            else:
                out.pop((i, j), None)
    return out


class Frame:
    """A homogeneous basis of a subspace W of M with coordinates and operator matrices."""

    def __init__(self, J, vectors):
        self.J = J
        self.field = J.field
        self.group = J.group
        self.vectors = list(vectors)
        self.coords = BasisCoordinates(J.field, self.vectors)
        self.deg = [J.element_degree(v) for v in self.vectors]

    @property
    def dim(self):
        return len(self.vectors)

    def key_degree(self, key):
        i, j = key
        return self.group.sub(self.deg[i], self.deg[j])

    def keys_of_degree(self, d):
        n = self.dim
        return [(i, j) for i in range(n) for j in range(n) if self.key_degree((i, j)) == d]

    def coord(self, v):
        c = self.coords(v)
        if c is None:
            raise JordanError("vector leaves the frame", v)
        return c

    def matrix(self, func):
        out = {}
        for j, b in enumerate(self.vectors):
            for i, c in enumerate(self.coord(func(b))):
                if c:
                    out[(i, j)] = c
        return out

    def apply(self, A, v):
        c = self.coord(v)
        out = [self.field.zero] * self.dim
        for (i, j), a in A.items():
            if c[j]:
                out[i] = out[i] + a * c[j]
        return vcomb(zip(out, self.vectors))

    def identity(self):
        return {(i, i): self.field.one for i in range(self.dim)}

    def subspace(self, vectors=()):
        return GradedSubspace(self.field, self.key_degree, self.keys_of_degree, vectors)


class OperatorAlgebra:
    """Unital algebra of operators on a frame generated by ``gens``, as a structure-constant algebra."""

    def __init__(self, frame, gens, name="C"):
        self.frame = frame
        gens = [g for g in gens if g]
        seed = frame.subspace([frame.identity()] + gens)
        ops = [GradedMap(lambda x, g=g: mat_mul(x, g)) for g in gens]
        span = closure(seed, ops)
        self.matrices = span.basis()
        self.span = span
        self.coords = BasisCoordinates(frame.field, self.matrices) if self.matrices else None
        F = frame.field
        n = len(self.matrices)
        degrees = {k: frame.key_degree(next(iter(m))) for k, m in enumerate(self.matrices)}
        table = {}
        for a in range(n):
            for b in range(n):
                table[(a, b)] = self.to_alg(mat_mul(self.matrices[a], self.matrices[b]))
        unit = self.to_alg(frame.identity())
        self.alg = StructureConstantAlgebra(F, frame.group, list(range(n)), degrees, table, unit,
                                            name=name, check=False)

    @property
    def dim(self):
        return len(self.matrices)

    def to_alg(self, A):
        c = self.coords(A)
        if c is None:
            raise JordanError("operator is outside the algebra", A)
        return {k: x for k, x in enumerate(c) if x}

    def to_matrix(self, a):
        return vcomb((c, self.matrices[k]) for k, c in a.items())

    def contains(self, A):
        return self.coords(A) is not None

    def morphism(self, func, anti, name):
        """Algebra (anti)morphism from a matrix -> matrix function."""
        cache = {}

        def on_key(k):
            if k not in cache:
                cache[k] = self.to_alg(func(self.matrices[k]))
            return cache[k]

        return Morphism(self.alg, on_key, anti=anti, name=name)


def _m_basis(T):
    J = T.J
    out = []
    for d in J.all_degrees():
        out.extend(T.basis_of("m", d))
    return out


def _part_basis(T, part):
    out = []
    for d in T.J.all_degrees():
        out.extend(T.basis_of(part, d))
    return out


def _require_finite_T(T):
    if not T.J.finite:
        raise CoordinatizationRefused("coordinatization needs a finite-dimensional system; "
                                      "take a windowed snapshot first")


# ---------------------------------------------------------------------------
# envelope

class Envelope:
    """C = subalgebra of End(M) generated by L(J_1), with pi and bar."""

    def __init__(self, T):
        _require_finite_T(T)
        self.T = T
        J = T.J
        F = J.field
        self.frame = Frame(J, _m_basis(T))
        fr = self.frame
        self.J1 = _part_basis(T, 1)
        self.L = lambda x, i=1: fr.matrix(lambda m: T.dot(i, x, m))
        self.C0 = [self.L(x) for x in self.J1]
        # L injectivity
        ker = _kernel_of_linear(F, self.J1, self.C0)
        self.L_injective = not ker
        self.L_kernel_witness = ker[0] if ker else None
        self.C = OperatorAlgebra(fr, self.C0, "C")
        self.Pe = fr.matrix(T.bar)
        self.u = T.u
        self.pi = self.C.morphism(self.pi_matrix, True, "pi")
        self.bar = self.C.morphism(lambda A: mat_mul(mat_mul(self.Pe, A), self.Pe), False, "bar")
        cu = [fr.apply(A, self.u) for A in self.C.matrices]
        ker = _kernel_of_linear(F, self.C.matrices, cu)
        self.u_faithful = not ker
        self.Cu = _span_basis(J, cu)
        self.M_equals_Cu = len(self.Cu) == fr.dim
        self.pi_failures = self._verify_pi()

    def pi_matrix(self, A):
        """c^pi = L(T_1(cu)) - c."""
        cu = self.frame.apply(A, self.u)
        return vsub(self.L(self.T.T(1, cu)), A)

    def _verify_pi(self):
        C = self.C.alg
        fails = []
        pi = self.pi
        keys = C.all_keys()
        for a in keys:
            x = {a: C.field.one}
            if pi(pi(x)) != x:
                fails.append(("pi^2", a))
            for b in keys:
                y = {b: C.field.one}
                if pi(C.mul(x, y)) != C.mul(pi(y), pi(x)):
                    fails.append(("antihomomorphism", (a, b)))
        for A in self.C0:
            if self.pi_matrix(A) != A:
                fails.append(("C0 fixed", A))
        # reversal on short words L(x)L(y) and L(x)L(y)L(z)
        gens = self.C0[:4]
        for a in gens:
            for b in gens:
                if self.pi_matrix(mat_mul(a, b)) != mat_mul(b, a):
                    fails.append(("word reversal", 2))
                for c in gens[:2]:
                    if self.pi_matrix(mat_mul(mat_mul(a, b), c)) != mat_mul(mat_mul(c, b), a):
                        fails.append(("word reversal", 3))
        return fails

    def flags(self):
        return {"L_injective": self.L_injective, "u_C_faithful": self.u_faithful,
                "M_equals_Cu": self.M_equals_Cu, "pi_verified": not self.pi_failures}

    def report(self):
        out = self.flags()
        out.update({"dim_C": self.C.dim, "dim_M": self.frame.dim, "dim_Cu": len(self.Cu),
                    "dim_C0": len(_span_basis_mats(self.frame, self.C0)),
                    "commutative": self.C.alg.is_commutative(),
                    "pi_is_identity": self.pi.is_identity(self.C.alg.all_keys())})
        return out


def _kernel_of_linear(F, src, images):
    """Kernel (as combinations of src) of src_k -> images_k (sparse dicts)."""
    if not src:
        return []
    keys = sorted({k for v in images for k in v}, key=key_order)
    mat = [[v.get(k, F.zero) for v in images] for k in keys]
    if not mat:
        return [vcomb([(F.one, s)]) for s in src[:1]] if src else []
    return [vcomb(zip(v, src)) for v in nullspace(mat, len(src), F)]


def _span_basis(J, vectors):
    sub = GradedSubspace(J.field, J.degree_of, J.keys_of_degree)
    for v in vectors:
        sub.add(v)
    return sub.basis()


def _span_basis_mats(frame, mats):
    sub = frame.subspace()
    for m in mats:
        sub.add(m)
    return sub.basis()


def envelope(T):
    env = Envelope(T)
    if not env.L_injective:
        raise CoordinatizationRefused("L: J_1 -> End(M) is not injective", env.L_kernel_witness)
    return env


def cbreve_check(env):
    """C' = C[C,C]C maps M into Cu.  Returns (passed, witness)."""
    C = env.C
    fr = env.frame
    mats = C.matrices
    comms = _span_basis_mats(fr, [vsub(mat_mul(a, b), mat_mul(b, a)) for a in mats for b in mats])
    J = env.T.J
    Cu = GradedSubspace(J.field, J.degree_of, J.keys_of_degree, env.Cu)
    for a in mats:
        for c in comms:
            ac = mat_mul(a, c)
            for b in mats:
                op = mat_mul(ac, b)
                for m in fr.vectors:
                    w = fr.apply(op, m)
                    if not Cu.contains(w):
                        return False, {"m": m}
    return True, None


# ---------------------------------------------------------------------------
# homomorphism verification

def _verify_map(src_J, dst_J, basis, phi, inside=None):
    """phi linear on span(basis): check it is an injective triple homomorphism of degree 0."""
    fails = []
    coords = BasisCoordinates(src_J.field, basis)
    images = [phi(b) for b in basis]

    def lin(v):
        c = coords(v)
        if c is None:
            raise JordanError("product leaves the subsystem", v)
        return vcomb(zip(c, images))

    for b, im in zip(basis, images):
        if im and dst_J.element_degree(im) != src_J.element_degree(b):
            fails.append(("degree", b))
    n = len(basis)
    for i in range(n):
        for j in range(n):
            try:
                if lin(src_J.P(basis[i], basis[j])) != dst_J.P(images[i], images[j]):
                    fails.append(("P", (i, j)))
            except JordanError as e:
                fails.append(("closure", e.witness))
            for k in range(i + 1, n):
                try:
                    if lin(src_J.triple(basis[i], basis[j], basis[k])) != \
                            dst_J.triple(images[i], images[j], images[k]):
                        fails.append(("triple", (i, j, k)))
                except JordanError as e:
                    fails.append(("closure", e.witness))
    try:
        BasisCoordinates(dst_J.field, images)
        injective = True
    except ValueError:
        injective = False
        fails.append(("injective", None))
    return {"passed": not fails, "failures": fails[:5], "injective": injective, "checked_basis": n}, lin


# ---------------------------------------------------------------------------
# hermitian coordinatization

class HermitianCoordinates:
    def __init__(self, **kw):
        self.__dict__.update(kw)


def hermitian_coordinatize(T, env=None):
    """(A, A0, pi, bar) on A = C|Cu and the isomorphism J_h -> H2(A, A0, pi, bar)."""
    env = env or envelope(T)
    J = T.J
    F = J.field
    frame_cu = Frame(J, env.Cu)
    gens = [frame_cu.matrix(lambda m, x=x: T.dot(1, x, m)) for x in env.J1]
    A = OperatorAlgebra(frame_cu, gens, "A")
    u = T.u

    def pi_mat(X):
        xu = frame_cu.apply(X, u)
        return vsub(frame_cu.matrix(lambda m: T.dot(1, T.T(1, xu), m)), X)

    Pe = frame_cu.matrix(T.bar)
    pi = A.morphism(pi_mat, True, "pi")
    bar = A.morphism(lambda X: mat_mul(mat_mul(Pe, X), Pe), False, "bar")
    A0 = [A.to_alg(g) for g in gens]
    cs = make_coordinate_system(A.alg, pi, bar, A0)
    H = HermitianMatrixSystem(cs, name="H2(C|Cu)")
    # c with c u = m for m in Cu
    Au = [frame_cu.apply(X, u) for X in A.matrices]
    rows_keys = sorted({k for v in Au for k in v}, key=key_order)
    amat = [[v.get(k, F.zero) for v in Au] for k in rows_keys]

    def c_of(m):
        rhs = [m.get(k, F.zero) for k in rows_keys]
        sol = solve(amat, rhs, F)
        if sol is None:
            raise JordanError("element is not in Cu", m)
        return {k: c for k, c in enumerate(sol.particular) if c}

    def L_alg(x, i):
        return A.to_alg(frame_cu.matrix(lambda m: T.dot(i, x, m)))

    def phi(x):
        x1, m, x2 = T.components(x)
        a0 = L_alg(x1, 1) if x1 else {}
        a = c_of(m) if m else {}
        b0 = L_alg(T.star(x2), 1) if x2 else {}
        return H.element(a0, a, b0)

    basis = _part_basis(T, 1) + list(env.Cu) + _part_basis(T, 2)
    hom, lin = _verify_map(J, H, basis, phi)
    triangle = (phi(T.u) == H.u and phi(T.e1) == H.e1 and phi(T.e2) == H.e2)
    bij = hom["injective"] and H.dim() == len(basis)
    return HermitianCoordinates(
        envelope=env, algebra=A, coordinate_system=cs, target=H, phi=phi, Jh_basis=basis,
        homomorphism=hom, bijective=bij, triangle_preserved=triangle, is_all=env.M_equals_Cu,
        report={"dim_A": A.dim, "dim_A0": len(cs.A0.basis()), "dim_Jh": len(basis), "dim_J": J.dim(),
                "is_all": env.M_equals_Cu, "homomorphism": hom["passed"], "bijective": bij,
                "triangle_preserved": triangle, "diagonal": cs.diagonal,
                "pi_is_identity": pi.is_identity(A.alg.all_keys())})


def hermitian_round_trip(model_cs, Hsrc, result):
    """Compare the recovered coordinates with the original (A, pi, bar).

    psi(a) = the [12]-coordinate of phi(a[12]); checks that psi is a unital
    algebra isomorphism of degree 0 intertwining pi and bar.
    """
    A = model_cs.A
    B = result.coordinate_system.A
    keys = A.all_keys()
    one = A.field.one

    def psi(a):
        x = Hsrc.element(a=a)
        return result.target.parts(result.phi(x))[1]

    imgs = {k: psi({k: one}) for k in keys}

    def psi_lin(a):
        return vcomb((c, imgs[k]) for k, c in a.items())

    fails = []
    if psi_lin(A.unit()) != B.unit():
        fails.append("unit")
    for a in keys:
        for b in keys:
            if psi_lin(A.mul({a: one}, {b: one})) != B.mul(imgs[a], imgs[b]):
                fails.append(("mul", a, b))
                break
        if psi_lin(model_cs.pi({a: one})) != result.coordinate_system.pi(imgs[a]):
            fails.append(("pi", a))
        if psi_lin(model_cs.bar({a: one})) != result.coordinate_system.bar(imgs[a]):
            fails.append(("bar", a))
        if imgs[a] and B.degree_of(next(iter(imgs[a]))) != A.degree_of(a):
            fails.append(("degree", a))
    try:
        BasisCoordinates(A.field, [imgs[k] for k in keys])
        bij = len(keys) == B.dim
    except ValueError:
        bij = False
    if not bij:
        fails.append("bijective")
    return {"passed": not fails, "failures": fails[:5], "dim": len(keys), "psi": imgs}


def hermitian_equivalences(T, budget=400, seed=0):
    """Compare Jordan-side and coordinate-side simplicity and nondegeneracy.

    Needs M = Cu.  The Jordan side uses trivial elements and ideal closure
    of J; the coordinate side uses graded ideals of the recovered
    (A, pi, bar).  Each side is decided without reference to the other.
    """
    res = hermitian_coordinatize(T)
    if not res.is_all:
        raise CoordinatizationRefused("M != Cu; J is not a full hermitian matrix system")
    cs = res.coordinate_system
    morphs = [cs.pi, cs.bar]
    J = T.J
    nondeg, triv = is_graded_nondegenerate(J, T=T)
    semiprime, ideal, _ = is_graded_semiprime(cs.A, morphs)
    try:
        simple_J, _, _ = is_graded_simple(J, budget=budget, seed=seed)
    except JordanError:
        simple_J = False
    simple_A, _, _ = assoc_is_graded_simple(cs.A, morphs, budget=budget, seed=seed)

    def agree(a, b):
        if "unknown" in (a, b):
            return "unknown"
        return bool(a) == bool(b)

    return {"J_nondegenerate": nondeg, "trivial_witness": triv,
            "A_semiprime": semiprime, "square_zero_ideal": ideal,
            "J_graded_simple": simple_J, "A_graded_simple": simple_A,
            "nondegenerate_iff_semiprime": agree(nondeg, semiprime),
            "simple_iff_simple": agree(simple_J, simple_A)}


# ---------------------------------------------------------------------------
# Clifford coordinatization

class CliffordCoordinates:
    def __init__(self, **kw):
        self.__dict__.update(kw)


def _op_words_matrix(T, frame, word):
    return frame.matrix(lambda m: word.apply(T, m))


def clifford_coordinatize(T, env=None):
    """N0, K_i, N^gr, D, D0, q, S and the isomorphism J_q -> AC(q, N^gr, S, D, bar, D0)."""
    env = env or envelope(T)
    J = T.J
    F = J.field
    fr = env.frame
    Mb = fr.vectors
    Jb = {1: _part_basis(T, 1), 2: _part_basis(T, 2)}
    C = {1: env.C, 2: OperatorAlgebra(fr, [fr.matrix(lambda m, x=x: T.dot(2, x, m)) for x in Jb[2]], "C2")}

    def gamma(i, x, m):
        return _op_words_matrix(T, fr, T.Gamma(i, x, m))

    def delta(i, x, m):
        return _op_words_matrix(T, fr, T.Delta(i, x, m))

    def delta_lin(i, x, m, n):
        return _op_words_matrix(T, fr, T.Delta_lin(i, x, m, n))

    def kernel_in(vectors, conditions):
        """Subspace of span(vectors) where all linear conditions (functions to dicts) vanish."""
        if not vectors:
            return []
        imgs = []
        for v in vectors:
            row = {}
            for tag, cond in enumerate(conditions):
                for k, c in cond(v).items():
                    row[(tag, k)] = c
            imgs.append(row)
        keys = sorted({k for r in imgs for k in r}, key=key_order)
        if not keys:
            return list(vectors)
        mat = [[r.get(k, F.zero) for r in imgs] for k in keys]
        return [vcomb(zip(v, vectors)) for v in nullspace(mat, len(vectors), F)]

    def per_degree(vectors, conditions):
        groups = {}
        for v in vectors:
            groups.setdefault(J.element_degree(v), []).append(v)
        out = []
        for d in sorted(groups, key=key_order):
            out.extend(kernel_in(groups[d], conditions))
        return out

    # (iv) N0
    conds = []
    for i in (1, 2):
        for x in Jb[i]:
            conds.append(lambda n, i=i, x=x: gamma(i, x, n))
    N0 = per_degree(Mb, conds)
    # C_i N0
    CN0 = {i: _span_basis(J, [fr.apply(A, n) for A in C[i].matrices for n in N0]) for i in (1, 2)}
    # (v) K_i
    K = {}
    for i in (1, 2):
        conds = [lambda k, i=i, n=n: gamma(i, k, n) for n in CN0[i]]
        K[i] = per_degree(Jb[i], conds)
    # (vi) N: linear conditions on N0; the quadratic condition is additive there
    conds = []
    for i in (1, 2):
        for x in Jb[i]:
            for n0 in N0:
                conds.append(lambda n, i=i, x=x, n0=n0: delta_lin(i, x, n, n0))
            for c in CN0[i]:
                conds.append(lambda n, i=i, c=c: gamma(i, T.T(i, n), c))
    W = per_degree(N0, conds)
    quad = []
    for i in (1, 2):
        for x in Jb[i]:
            quad.append(lambda n, i=i, x=x: delta(i, x, n))
    if F.char == 2:
        N = per_degree(W, quad)
    else:
        N = W
    for n in N:
        for qc in quad:
            if qc(n):
                raise JordanError("quadratic condition fails on the linear solution space", n)
    # the subsystem J_q and its coordinates
    Nframe = Frame(J, N)
    D0_mats = [Nframe.matrix(lambda n, x=x: T.dot(1, x, n)) for x in K[1]]
    D = OperatorAlgebra(Nframe, D0_mats, "D")
    Pe = Nframe.matrix(T.bar)
    barD = D.morphism(lambda X: mat_mul(mat_mul(Pe, X), Pe), False, "bar")

    def q_op(n):
        return D.to_alg(Nframe.matrix(lambda m: T.dot(1, T.Q(1, n), m)))

    def q_pol(n, n2):
        return D.to_alg(Nframe.matrix(lambda m: T.dot(1, T.Q(1, n, n2), m)))

    # D-basis of N (free module)
    labels, lab_vecs = _free_basis(J, D, Nframe, N)
    if labels is None:
        raise CoordinatizationRefused("N^gr is not a free D-module; no quadratic form presentation")
    Dalg = D.alg
    lab_deg = {a: J.element_degree(v) for a, v in zip(labels, lab_vecs)}
    gen_coords = _module_coordinates(J, D, Nframe, labels, lab_vecs)
    S_table = {a: _to_module(gen_coords(T.bar(v))) for a, v in zip(labels, lab_vecs)}
    values = {a: q_op(v) for a, v in zip(labels, lab_vecs)}
    bil = {}
    for ia, a in enumerate(labels):
        for b in labels[ia + 1:]:
            val = q_pol(lab_vecs[ia], lab_vecs[labels.index(b)])
            if val:
                bil[(a, b)] = val
    qf = GradedQuadForm(Dalg, labels, lab_deg, values, bil, S_table, barD)
    base = _to_module(gen_coords(T.u))
    D0_elems = [D.to_alg(X) for X in D0_mats]
    target = CliffordSystem(qf, base, D0_elems, name="AC(recovered)", check=True)

    def L_D(x, i=1):
        return D.to_alg(Nframe.matrix(lambda n: T.dot(i, x, n)))

    def phi(x):
        x1, m, x2 = T.components(x)
        c1 = L_D(x1) if x1 else {}
        mm = _to_module(gen_coords(m)) if m else {}
        c2 = L_D(T.star(x2)) if x2 else {}
        return target.element(c1, mm, c2)

    basis = K[1] + N + K[2]
    hom, lin = _verify_map(J, target, basis, phi)
    triangle = (phi(T.u) == target.u and phi(T.e1) == target.e1 and phi(T.e2) == target.e2)
    bij = hom["injective"] and target.dim() == len(basis)
    # is_all: Delta_1(J_1; M) vanishes identically (quadratic in m: basis values and polarizations)
    is_all = True
    for x in Jb[1]:
        for a, m in enumerate(Mb):
            if delta(1, x, m):
                is_all = False
                break
            for n in Mb[a + 1:]:
                if delta_lin(1, x, m, n):
                    is_all = False
                    break
            if not is_all:
                break
        if not is_all:
            break
    return CliffordCoordinates(
        envelope=env, N0=N0, K=K, N=N, D=D, D0=D0_elems, quadform=qf, target=target, phi=phi,
        Jq_basis=basis, homomorphism=hom, bijective=bij, triangle_preserved=triangle, is_all=is_all,
        report={"dim_N0": len(N0), "dim_K1": len(K[1]), "dim_K2": len(K[2]), "dim_N": len(N),
                "dim_D": D.dim, "dim_Jq": len(basis), "dim_J": J.dim(), "rank": len(labels),
                "is_all": is_all, "homomorphism": hom["passed"], "bijective": bij,
                "triangle_preserved": triangle})


def _to_module(coords):
    """{label: D-element} -> module element keyed (label, D-key)."""
    out = {}
    for a, d in coords.items():
        for k, c in d.items():
            if c:
                out[(a, k)] = c
    return out


def _free_basis(J, D, frame, N):
    """Labels and homogeneous generators with N = sum of D n_a, direct and free; (None, None) if none found."""
    F = J.field
    dimD = D.dim
    if len(N) % max(dimD, 1):
        return None, None
    chosen = []
    span = GradedSubspace(F, J.degree_of, J.keys_of_degree)
    for v in N:
        if span.contains(v):
            continue
        orbit = [frame.apply(X, v) for X in D.matrices]
        trial = span.copy()
        ok = True
        for w in orbit:
            if not trial.add(w):
                ok = False
                break
        if not ok:
            continue
        span = trial
        chosen.append(v)
    if span.dim != len(N):
        return None, None
    labels = ["n%d" % i for i in range(len(chosen))]
    return labels, chosen


def _module_coordinates(J, D, frame, labels, gens):
    """Function m -> {label: D-element} with m = sum d_a n_a."""
    F = J.field
    cols = []
    index = []
    for a, v in zip(labels, gens):
        for k, X in enumerate(D.matrices):
            cols.append(frame.apply(X, v))
            index.append((a, k))
    coords = BasisCoordinates(F, cols)

    def co(m):
        c = coords(m)
        if c is None:
            raise JordanError("element is outside N", m)
        out = {}
        for (a, k), x in zip(index, c):
            if x:
                out.setdefault(a, {})[k] = x
        return out

    return co


def clifford_round_trip(C_src, result):
    """Compare recovered (D, q) with the source Clifford system.

    psi(d) = L(d e1) restricted to N; checks psi is a unital algebra
    isomorphism D_src -> D_rec of degree 0 with psi(q(m)) = q_rec(m) on
    basis vectors and pairwise sums of M (Gram equivalence under the
    identity map on M).
    """
    D = C_src.D
    T = result.envelope.T
    one = D.field.one
    keys = D.all_keys()
    rec = result.D
    Nframe = rec.frame

    def psi(d):
        x = C_src.element(c1=d)
        return rec.to_alg(Nframe.matrix(lambda n: T.dot(1, x, n)))

    imgs = {k: psi({k: one}) for k in keys}

    def psi_lin(d):
        return vcomb((c, imgs[k]) for k, c in d.items())

    fails = []
    B = rec.alg
    if psi_lin(D.unit()) != B.unit():
        fails.append("unit")
    for a in keys:
        for b in keys:
            if psi_lin(D.mul({a: one}, {b: one})) != B.mul(imgs[a], imgs[b]):
                fails.append(("mul", a, b))
    try:
        BasisCoordinates(D.field, [imgs[k] for k in keys])
        if len(keys) != B.dim:
            fails.append("bijective")
    except ValueError:
        fails.append("bijective")
    qf_src = C_src.qf
    qrec = result.quadform
    mkeys = [k for k in qf_src.all_keys()]
    vecs = [{k: one} for k in mkeys]
    vecs += [{a: one, b: one} for i, a in enumerate(mkeys) for b in mkeys[i + 1:]]
    for v in vecs:
        m = C_src.element(m=v)
        mm = result.target.parts(result.phi(m))[1]
        if psi_lin(qf_src.q(v)) != qrec.q(mm):
            fails.append(("gram", v))
    return {"passed": not fails, "failures": fails[:5], "dim_D": len(keys)}


# ---------------------------------------------------------------------------
# classification

def classify(T, budget=400, seed=0):
    """Hermitian or Clifford case with a certificate; raises when outside the hypotheses."""
    J = T.J
    _require_finite_T(T)
    env = envelope(T)
    cert = {"envelope": env.report()}
    simple_J, _, method = is_graded_simple(J, budget=budget, seed=seed)
    cert["J_graded_simple"] = simple_J
    cert["J_simplicity_method"] = method
    if simple_J is False:
        raise CoordinatizationRefused("J is not graded-simple (outside the classification hypotheses)")
    Calg = env.C.alg
    simple_C, witness, cmethod = assoc_is_graded_simple(Calg, [env.pi, env.bar], budget=budget, seed=seed)
    cert["C_pi_bar_graded_simple"] = simple_C
    cert["C_simplicity_method"] = cmethod
    if simple_C == "unknown" or simple_C is None:
        raise CoordinatizationRefused("graded simplicity of (C, pi, bar) is undecided")
    if not simple_C:
        raise CoordinatizationRefused("(C, pi, bar) is not graded-simple", witness)
    cert["hypothesis_torsion_free"] = J.group.torsion_free
    cert["hypothesis_invertible_span"] = _m_spanned_by_invertibles(T)
    commutative = Calg.is_commutative()
    pi_id = env.pi.is_identity(Calg.all_keys())
    cert["C_commutative"] = commutative
    cert["pi_is_identity"] = pi_id
    if not commutative:
        if pi_id:
            raise JordanError("inconsistent: C noncommutative but pi = id")
        if not env.M_equals_Cu:
            raise JordanError("inconsistent: C noncommutative but M != Cu")
        res = hermitian_coordinatize(T, env)
        cert["coordinatization"] = res.report
        sub = _hermitian_subcase(res.coordinate_system, budget, seed)
        return {"case": "hermitian", "subcase": sub, "certificate": cert, "result": res}
    if not pi_id:
        raise JordanError("inconsistent: C commutative but pi != id")
    res = clifford_coordinatize(T, env)
    cert["coordinatization"] = res.report
    Dsimple, _, _ = assoc_is_graded_simple(res.D.alg, [], budget=budget, seed=seed)
    sub = "I" if Dsimple is True else ("II" if Dsimple is False else "unknown")
    return {"case": "clifford", "subcase": sub, "certificate": cert, "result": res}


def _hermitian_subcase(cs, budget, seed):
    A = cs.A
    simple_A, _, _ = assoc_is_graded_simple(A, [], budget=budget, seed=seed)
    if simple_A is True:
        return "I"
    s_pi, _, _ = assoc_is_graded_simple(A, [cs.pi], budget=budget, seed=seed)
    s_bar, _, _ = assoc_is_graded_simple(A, [cs.bar], budget=budget, seed=seed)
    if "unknown" in (simple_A, s_pi, s_bar):
        return "unknown"
    if s_pi and not s_bar:
        return "II"
    if s_pi and s_bar:
        return "III"
    if s_bar and not s_pi:
        return "IV"
    return "V"


def _m_spanned_by_invertibles(T):
    """M spanned by invertibles, certified on the homogeneous basis: each basis vector invertible (sufficient)."""
    J = T.J
    for m in _m_basis(T):
        for i in (1, 2):
            ok, _ = invertible(J, T.Q(i, m), basis_fn=lambda d, i=i: T.basis_of(i, d))
            if not ok:
                return "unknown"
    return True
