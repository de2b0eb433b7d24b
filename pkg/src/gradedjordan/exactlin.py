"""Exact scalars and graded linear algebra.

Scalars live in the rationals (``fractions.Fraction``) or in a prime
field F_p (``Fp`` elements).  Vectors are sparse dictionaries mapping
hashable basis keys to nonzero scalars; every key carries a degree
through a ``degree_of`` callable supplied by the ambient space.

Subspaces are kept in reduced row echelon form over an explicit key
order, so two subspaces are equal exactly when their echelon data are
equal.
"""

from fractions import Fraction
from functools import lru_cache


class Fp:
    """Element of the prime field F_p."""

    __slots__ = ("v", "p")

    def __init__(self, v, p):
        self.v = v % p
        self.p = p

    def _coerce(self, other):
        if isinstance(other, Fp):
            if other.p != self.p:
                raise ValueError("mixing F_%d and F_%d" % (self.p, other.p))
            return other.v
        if isinstance(other, int):
            return other
        if isinstance(other, Fraction):
            return other.numerator * pow(other.denominator, -1, self.p)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Fp(self.v + o, self.p)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Fp(self.v - o, self.p)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Fp(o - self.v, self.p)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Fp(self.v * o, self.p)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if o % self.p == 0:
            raise ZeroDivisionError("division by zero in F_%d" % self.p)
        return Fp(self.v * pow(o, -1, self.p), self.p)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Fp(o, self.p) / self

    def __neg__(self):
        return Fp(-self.v, self.p)

    def __pos__(self):
        return self

    def __pow__(self, n):
        if n < 0:
            return Fp(pow(self.v, -1, self.p), self.p) ** (-n)
        return Fp(pow(self.v, n, self.p), self.p)

    def __eq__(self, other):
        if isinstance(other, Fp):
            return other.p == self.p and other.v == self.v
        if isinstance(other, int):
            return (self.v - other) % self.p == 0
        return NotImplemented

    def __hash__(self):
        return hash(self.v)

    def __bool__(self):
        return self.v != 0

    def __int__(self):
        return self.v

    def __repr__(self):
        return "%d" % self.v


class Field:
    """The rationals (``p == 0``) or the prime field F_p."""

    def __init__(self, p=0):
        if p:
            if p < 2 or any(p % d == 0 for d in range(2, int(p ** 0.5) + 1)):
                raise ValueError("%d is not prime" % p)
        self.p = p

    @property
    def char(self):
        return self.p

    @property
    def is_finite(self):
        return self.p != 0

    @property
    def name(self):
        return "F%d" % self.p if self.p else "Q"

    def __call__(self, x):
        if self.p:
            if isinstance(x, Fp):
                if x.p != self.p:
                    raise ValueError("element of another field")
                return x
            if isinstance(x, str):
                x = Fraction(x)
            if isinstance(x, Fraction):
                return Fp(x.numerator, self.p) / x.denominator
            return Fp(int(x), self.p)
        if isinstance(x, Fp):
            raise ValueError("F_p element given to the rationals")
        if isinstance(x, str):
            return Fraction(x)
        return Fraction(x)

    @property
    def zero(self):
        return self(0)

    @property
    def one(self):
        return self(1)

    def elements(self):
        """All elements, for finite fields only."""
        if not self.p:
            raise ValueError("the rationals are infinite")
        return [Fp(i, self.p) for i in range(self.p)]

    def random(self, rng, bound=5):
        """A random scalar; small numerators/denominators over Q."""
        if self.p:
            return Fp(rng.randrange(self.p), self.p)
        num = rng.randint(-bound, bound)
        den = rng.randint(1, 2)
        return Fraction(num, den)

    def random_nonzero(self, rng, bound=5):
        while True:
            c = self.random(rng, bound)
            if c:
                return c

    def format(self, x):
        """Canonical string for a scalar (JSON reports)."""
        if self.p:
            return "%d" % self(x).v
        x = Fraction(x)
        return str(x)

    def to_json(self):
        return self.name

    @staticmethod
    def from_json(obj):
        if isinstance(obj, dict):
            return Field(int(obj.get("p", 0)))
        s = str(obj).strip().upper()
        if s in ("Q", "QQ", "RATIONALS"):
            return Field(0)
        if s.startswith("F") or s.startswith("GF"):
            return Field(int(s.lstrip("GF")))
        raise ValueError("unknown field %r" % (obj,))

    def __eq__(self, other):
        return isinstance(other, Field) and other.p == self.p

    def __hash__(self):
        return hash(("Field", self.p))

    def __repr__(self):
        return self.name


QQ = Field(0)


@lru_cache(maxsize=None)
def GF(p):
    return Field(p)


# ---------------------------------------------------------------------------
# ordering of keys

def key_order(k):
    """Total order on nested tuples of ints and strings."""
    if isinstance(k, bool):
        return (0, int(k))
    if isinstance(k, int):
        return (0, k)
    if isinstance(k, str):
        return (1, k)
    if isinstance(k, tuple):
        return (2, tuple(key_order(x) for x in k))
    if isinstance(k, frozenset):
        return (3, tuple(sorted(key_order(x) for x in k)))
    return (4, repr(k))


def sorted_keys(keys):
    return sorted(keys, key=key_order)


# ---------------------------------------------------------------------------
# sparse vectors

def vadd(u, v):
    w = dict(u)
    for k, c in v.items():
        s = w.get(k)
        s = c if s is None else s + c
        if s:
            w[k] = s
        else:
            w.pop(k, None)
    return w


def vsub(u, v):
    w = dict(u)
    for k, c in v.items():
        s = w.get(k)
        s = -c if s is None else s - c
        if s:
            w[k] = s
        else:
            w.pop(k, None)
    return w


def vscale(c, v):
    if not c:
        return {}
    return {k: c * x for k, x in v.items()}


def vneg(v):
    return {k: -x for k, x in v.items()}


def vcomb(terms):
    """Sum of c * v over (c, v) pairs."""
    w = {}
    for c, v in terms:
        if not c:
            continue
        for k, x in v.items():
            s = w.get(k)
            s = c * x if s is None else s + c * x
            if s:
                w[k] = s
            else:
                w.pop(k, None)
    return w


def vsum(vectors):
    w = {}
    for v in vectors:
        w = vadd(w, v)
    return w


def vclean(v):
    return {k: c for k, c in v.items() if c}


def veq(u, v):
    return not vsub(u, v)


def vformat(field, v):
    """JSON-friendly list of [key, scalar-string] pairs in key order."""
    return [[_jsonable(k), field.format(v[k])] for k in sorted_keys(v)]


def _jsonable(k):
    if isinstance(k, tuple):
        return [_jsonable(x) for x in k]
    return k


def homogeneous_parts(v, degree_of):
    """Split a sparse vector into its homogeneous components."""
    parts = {}
    for k, c in v.items():
        parts.setdefault(degree_of(k), {})[k] = c
    return parts


def is_homogeneous(v, degree_of):
    return len({degree_of(k) for k in v}) <= 1


# ---------------------------------------------------------------------------
# dense echelon forms

def rref(rows, ncols):
    """Reduced row echelon form of a list of dense rows.

    Returns (reduced nonzero rows, pivot columns).
    """
    m = [list(r) for r in rows]
    pivots = []
    r = 0
    nrows = len(m)
    for c in range(ncols):
        piv = None
        for i in range(r, nrows):
            if m[i][c]:
                piv = i
                break
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = 1 / m[r][c]
        row = [x * inv for x in m[r]]
        m[r] = row
        for i in range(nrows):
            if i != r and m[i][c]:
                f = m[i][c]
                mi = m[i]
                m[i] = [a - f * b for a, b in zip(mi, row)]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return m[:r], pivots


def rank(rows, ncols):
    return len(rref(rows, ncols)[1])


def nullspace(rows, ncols, field):
    """Basis of {x : A x = 0} as dense vectors (canonical, from the RREF)."""
    red, piv = rref(rows, ncols)
    free = [c for c in range(ncols) if c not in set(piv)]
    basis = []
    for f in free:
        x = [field.zero] * ncols
        x[f] = field.one
        for i, p in enumerate(piv):
            x[p] = -red[i][f]
        basis.append(x)
    return basis


class Solution:
    """Solution set of a linear system: particular solution plus kernel."""

    def __init__(self, particular, kernel):
        self.particular = particular
        self.kernel = kernel

    @property
    def unique(self):
        return not self.kernel

    def __repr__(self):
        return "Solution(particular=%r, kernel_dim=%d)" % (self.particular, len(self.kernel))


def solve(A, b, field):
    """Solve A x = b exactly; returns a ``Solution`` or None if inconsistent."""
    n = len(A[0]) if A else 0
    if len(A) != len(b):
        raise ValueError("dimension mismatch: %d equations, %d right-hand sides" % (len(A), len(b)))
    aug = [list(row) + [field(bi)] for row, bi in zip(A, b)]
    red, piv = rref(aug, n + 1)
    if n in piv:
        return None
    x = [field.zero] * n
    for i, p in enumerate(piv):
        x[p] = red[i][n]
    kernel = nullspace(A, n, field) if A else [[field.one if i == j else field.zero for i in range(n)] for j in range(n)]
    return Solution(x, kernel)


def matmul(A, B, field):
    n = len(B[0]) if B else 0
    out = []
    for row in A:
        acc = [field.zero] * n
        for a, brow in zip(row, B):
            if a:
                acc = [x + a * y for x, y in zip(acc, brow)]
        out.append(acc)
    return out


def identity_matrix(n, field):
    return [[field.one if i == j else field.zero for j in range(n)] for i in range(n)]


def transpose(A):
    return [list(r) for r in zip(*A)] if A else []


def inverse_matrix(A, field):
    n = len(A)
    aug = [list(row) + e for row, e in zip(A, identity_matrix(n, field))]
    red, piv = rref(aug, 2 * n)
    if piv[:n] != list(range(n)) or len(piv) < n:
        return None
    return [row[n:] for row in red[:n]]


# ---------------------------------------------------------------------------
# subspaces over an explicit key order

class Subspace:
    """Subspace of the span of ``keys``, kept in reduced echelon form."""

    def __init__(self, field, keys, vectors=()):
        self.field = field
        self.keys = list(keys)
        self.index = {k: i for i, k in enumerate(self.keys)}
        self.rows = []
        self.pivots = []
        for v in vectors:
            self.add(v)

    def _dense(self, v):
        row = [self.field.zero] * len(self.keys)
        for k, c in v.items():
            try:
                row[self.index[k]] = c
            except KeyError:
                raise KeyError("key %r outside the ambient span" % (k,)) from None
        return row

    def _sparse(self, row):
        return {self.keys[i]: c for i, c in enumerate(row) if c}

    def _reduce_dense(self, row):
        for r, p in zip(self.rows, self.pivots):
            c = row[p]
            if c:
                row = [a - c * b for a, b in zip(row, r)]
        return row

    @property
    def dim(self):
        return len(self.rows)

    def reduce(self, v):
        """Remainder of v modulo the subspace (canonical coset representative)."""
        return self._sparse(self._reduce_dense(self._dense(v)))

    def contains(self, v):
        return not any(self._reduce_dense(self._dense(v)))

    __contains__ = contains

    def add(self, v):
        """Insert v; returns the reduced new vector, or None if v was already present."""
        row = self._reduce_dense(self._dense(v) if isinstance(v, dict) else list(v))
        lead = next((i for i, c in enumerate(row) if c), None)
        if lead is None:
            return None
        inv = 1 / row[lead]
        row = [c * inv for c in row]
        new_rows = []
        for r in self.rows:
            c = r[lead]
            if c:
                r = [a - c * b for a, b in zip(r, row)]
            new_rows.append(r)
        pos = 0
        while pos < len(self.pivots) and self.pivots[pos] < lead:
            pos += 1
        new_rows.insert(pos, row)
        self.rows = new_rows
        self.pivots.insert(pos, lead)
        return self._sparse(row)

    def basis(self):
        return [self._sparse(r) for r in self.rows]

    def coordinates(self, v):
        """Coordinates of v with respect to ``basis()``; None if v is not in the span."""
        row = self._dense(v)
        coords = [row[p] for p in self.pivots]
        check = [self.field.zero] * len(self.keys)
        for c, r in zip(coords, self.rows):
            if c:
                check = [a + c * b for a, b in zip(check, r)]
        if check != row:
            return None
        return coords

    def copy(self):
        s = Subspace(self.field, self.keys)
        s.rows = [list(r) for r in self.rows]
        s.pivots = list(self.pivots)
        return s

    def is_subspace_of(self, other):
        return all(other.contains(v) for v in self.basis())

    def __eq__(self, other):
        if not isinstance(other, Subspace):
            return NotImplemented
        return self.dim == other.dim and self.is_subspace_of(other)

    def complement_keys(self):
        """Non-pivot keys: their span is a complement of the subspace."""
        piv = set(self.pivots)
        return [k for i, k in enumerate(self.keys) if i not in piv]

    def intersect(self, other):
        """Intersection with another subspace over the same key set."""
        n = self.dim
        m = other.dim
        if n == 0 or m == 0:
            return Subspace(self.field, self.keys)
        # solve sum a_i r_i - sum b_j s_j = 0
        cols = [r for r in self.rows] + [[-x for x in s] for s in other.rows]
        A = transpose(cols)
        ker = nullspace(A, n + m, self.field)
        out = Subspace(self.field, self.keys)
        for x in ker:
            vec = [self.field.zero] * len(self.keys)
            for a, r in zip(x[:n], self.rows):
                if a:
                    vec = [p + a * q for p, q in zip(vec, r)]
            out.add(vec)
        return out

    def __repr__(self):
        return "Subspace(dim=%d of %d)" % (self.dim, len(self.keys))


class GradedSubspace:
    """Graded subspace: one echelon block per degree.

    ``keys_of_degree(deg)`` lists the ambient keys of a degree; it may be
    lazy (infinite ambient spaces touched through windows).
    """

    def __init__(self, field, degree_of, keys_of_degree, vectors=(), rule=None):
        self.field = field
        self.degree_of = degree_of
        self.keys_of_degree = keys_of_degree
        self.rule = rule
        self.blocks = {}
        for v in vectors:
            self.add(v)

    def block(self, deg):
        """Echelon block of a degree; lazy subspaces fill it from ``rule(deg)``."""
        b = self.blocks.get(deg)
        if b is None:
            b = Subspace(self.field, self.keys_of_degree(deg))
            if self.rule is not None:
                for v in self.rule(deg):
                    b.add(v)
            self.blocks[deg] = b
        return b

    def materialize(self, degrees):
        for d in degrees:
            self.block(d)
        return self

    def add(self, v):
        """Add all homogeneous components of v; returns the list of new reduced vectors."""
        new = []
        for deg, part in sorted(homogeneous_parts(v, self.degree_of).items(), key=lambda t: key_order(t[0])):
            r = self.block(deg).add(part)
            if r is not None:
                new.append(r)
        return new

    def contains(self, v):
        for deg, part in homogeneous_parts(v, self.degree_of).items():
            if not self.block(deg).contains(part):
                return False
        return True

    __contains__ = contains

    def reduce(self, v):
        out = {}
        for deg, part in homogeneous_parts(v, self.degree_of).items():
            out.update(self.block(deg).reduce(part))
        return out

    def component(self, deg):
        return self.block(deg).basis()

    def degrees(self):
        return sorted((d for d, b in self.blocks.items() if b.dim), key=key_order)

    def dims(self):
        return {d: self.blocks[d].dim for d in self.degrees()}

    @property
    def dim(self):
        return sum(b.dim for b in self.blocks.values())

    def basis(self):
        out = []
        for d in self.degrees():
            out.extend(self.blocks[d].basis())
        return out

    def copy(self):
        g = GradedSubspace(self.field, self.degree_of, self.keys_of_degree, rule=self.rule)
        g.blocks = {d: b.copy() for d, b in self.blocks.items()}
        return g

    def is_subspace_of(self, other):
        return all(other.contains(v) for v in self.basis())

    def __eq__(self, other):
        if not isinstance(other, GradedSubspace):
            return NotImplemented
        return self.dims() == other.dims() and self.is_subspace_of(other)

    def __repr__(self):
        return "GradedSubspace(dim=%d, degrees=%d)" % (self.dim, len(self.degrees()))


class GradedVectorSpace:
    """Finite graded ambient space: explicit keys with degrees."""

    def __init__(self, field, keys, degree_of):
        self.field = field
        self.keys = sorted_keys(keys)
        self.degree_of = degree_of
        self._by_degree = {}
        for k in self.keys:
            self._by_degree.setdefault(degree_of(k), []).append(k)

    def keys_of_degree(self, deg):
        return self._by_degree.get(deg, [])

    def degrees(self):
        return sorted(self._by_degree, key=key_order)

    @property
    def dim(self):
        return len(self.keys)

    def subspace(self, vectors=()):
        return GradedSubspace(self.field, self.degree_of, self.keys_of_degree, vectors)

    def full(self):
        return self.subspace([{k: self.field.one} for k in self.keys])


class GradedMap:
    """A linear map given by a callable on sparse vectors, homogeneous of a degree.

    ``degree`` may be None when the map is not asserted homogeneous.
    """

    def __init__(self, func, degree=None, name=None):
        self.func = func
        self.degree = degree
        self.name = name or getattr(func, "__name__", "map")

    def __call__(self, v):
        return self.func(v)

    def matrix(self, src_keys, dst_keys, field):
        """Dense matrix (rows indexed by dst_keys) of the map on the span of src_keys."""
        index = {k: i for i, k in enumerate(dst_keys)}
        cols = []
        for k in src_keys:
            img = self.func({k: field.one})
            col = [field.zero] * len(dst_keys)
            for kk, c in img.items():
                col[index[kk]] = c
            cols.append(col)
        return transpose(cols) if cols else [[] for _ in dst_keys]


class ClosureError(ValueError):
    pass


def closure(seed, operators, add=None, group=None):
    """Smallest graded subspace containing ``seed`` and stable under ``operators``.

    ``seed`` is a GradedSubspace (it is copied, not modified).  Each
    operator is a GradedMap; when its degree is declared, images of
    homogeneous vectors are checked against it.  ``add`` optionally
    returns extra vectors to insert for each new basis vector (used for
    quadratic closure conditions).  ``group`` supplies degree addition
    for the declared-degree check (plain tuple addition otherwise).
    """
    result = seed.copy()
    queue = result.basis()
    qi = 0
    group_add = group.add if group is not None else None
    while qi < len(queue):
        v = queue[qi]
        qi += 1
        images = []
        for op in operators:
            w = op(v)
            if op.degree is not None and w:
                dv = result.degree_of(next(iter(v)))
                for k in w:
                    dw = result.degree_of(k)
                    if group_add is None:
                        group_add = _infer_add(dv)
                    if dw != group_add(dv, op.degree):
                        raise ClosureError("operator %s maps degree %r to %r, declared degree %r"
                                           % (op.name, dv, dw, op.degree))
            images.append(w)
        if add is not None:
            images.extend(add(v))
        for w in images:
            if w:
                queue.extend(result.add(w))
    return result


def _infer_add(d):
    if isinstance(d, tuple):
        return lambda a, b: tuple(x + y for x, y in zip(a, b))
    return lambda a, b: a + b


# ---------------------------------------------------------------------------
# invariant subspaces and Norton's irreducibility test

def spin(field, vectors, matrices):
    """Smallest subspace of F^n containing ``vectors`` and stable under ``matrices``.

    Dense column-vector convention: a matrix M acts by v -> M v.
    """
    n = len(matrices[0]) if matrices else len(vectors[0])
    sub = Subspace(field, range(n))
    queue = []
    for v in vectors:
        r = sub.add(list(v))
        if r is not None:
            queue.append(_dense_of(r, n, field))
    qi = 0
    while qi < len(queue):
        v = queue[qi]
        qi += 1
        for M in matrices:
            w = [sum((a * b for a, b in zip(row, v)), field.zero) for row in M]
            r = sub.add(w)
            if r is not None:
                queue.append(_dense_of(r, n, field))
    return sub


def _dense_of(sparse, n, field):
    row = [field.zero] * n
    for k, c in sparse.items():
        row[k] = c
    return row


def _charpoly_factors(field, M):
    """Irreducible factors (as coefficient lists, highest degree first) of charpoly(M)."""
    from sympy import GF as SGF, QQ as SQQ, Poly, symbols
    from sympy.polys.matrices import DomainMatrix

    n = len(M)
    if field.p:
        dom = SGF(field.p)
        rows = [[dom(int(x)) for x in r] for r in M]
    else:
        dom = SQQ
        rows = [[dom(x.numerator, x.denominator) for x in r] for r in M]
    cp = DomainMatrix(rows, (n, n), dom).charpoly()
    x = symbols("x")
    if field.p:
        coeffs = [int(dom.to_sympy(c)) % field.p for c in cp]
        poly = Poly(coeffs, x, modulus=field.p)
    else:
        poly = Poly([dom.to_sympy(c) for c in cp], x, domain="QQ")
    factors = []
    for f, _mult in poly.factor_list()[1]:
        cs = f.all_coeffs()
        if field.p:
            cs = [field(int(c)) for c in cs]
        else:
            cs = [Fraction(int(c.p), int(c.q)) for c in cs]
        lead = cs[0]
        factors.append([c / lead for c in cs])
    factors.sort(key=len)
    return factors


def _poly_at(field, coeffs, M):
    n = len(M)
    acc = [[field.zero] * n for _ in range(n)]
    for c in coeffs:
        acc = matmul(acc, M, field)
        for i in range(n):
            acc[i][i] = acc[i][i] + c
    return acc


def norton_irreducible(field, matrices, rng, tries=30):
    """Norton's irreducibility test for the module F^n under ``matrices``.

    Returns (True, None) when irreducibility is certified, (False, basis)
    with a proper nonzero invariant subspace, or (None, None) when the
    random search found no usable element.
    """
    n = len(matrices[0])
    if n <= 1:
        return True, None
    def word():
        a = rng.choice(matrices)
        if rng.random() < 0.5:
            return a
        return matmul(a, rng.choice(matrices), field)

    for _ in range(tries):
        theta = [[field.zero] * n for _ in range(n)]
        for w in (word() for _ in range(4)):
            c = field.random(rng, 3)
            if c:
                theta = [[x + c * y for x, y in zip(r1, r2)] for r1, r2 in zip(theta, w)]
        for f in _charpoly_factors(field, theta):
            fm = _poly_at(field, f, theta)
            ker = nullspace(fm, n, field)
            if not ker:
                continue
            sub = spin(field, [ker[0]], matrices)
            if sub.dim < n:
                return False, sub.basis()
            if len(ker) != len(f) - 1:
                continue
            kt = nullspace(transpose(fm), n, field)
            subt = spin(field, [kt[0]], [transpose(m) for m in matrices])
            if subt.dim < n:
                # the annihilator of an invariant subspace of the dual is invariant
                rows = [_dense_of(v, n, field) for v in subt.basis()]
                ann = nullspace(rows, n, field)
                return False, [{i: c for i, c in enumerate(v) if c} for v in ann]
            return True, None
    return None, None


class BasisCoordinates:
    """Coordinates with respect to a fixed list of independent vectors."""

    def __init__(self, field, vectors):
        self.field = field
        self.vectors = [dict(v) for v in vectors]
        keys = set()
        for v in self.vectors:
            keys.update(v)
        self.keys = sorted_keys(keys)
        marks = [("#", i) for i in range(len(self.vectors))]
        self.sub = Subspace(field, self.keys + marks)
        for i, v in enumerate(self.vectors):
            w = dict(v)
            w[("#", i)] = field.one
            if self.sub.add(w) is None:
                raise ValueError("vectors are linearly dependent")
        if any(p >= len(self.keys) for p in self.sub.pivots):
            raise ValueError("vectors are linearly dependent")

    def __call__(self, v):
        """Coordinate list of v, or None when v is outside the span."""
        if any(k not in self.sub.index for k in v):
            return None
        r = self.sub.reduce(v)
        if any(not (isinstance(k, tuple) and len(k) == 2 and k[0] == "#") for k in r):
            return None
        out = [self.field.zero] * len(self.vectors)
        for (_, i), c in r.items():
            out[i] = -c
        return out
