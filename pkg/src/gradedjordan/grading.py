"""Grading groups Z^r + torsion, subgroups, and support sets.

A degree is a tuple of ints of length ``free_rank + len(torsion)``;
torsion coordinates are stored reduced.  Subgroups are handled in the
lifted lattice Z^(r+t): a subgroup H of the grading group corresponds to
the lattice spanned by lifts of its generators together with the
torsion relations m_i e_(r+i).  The lifted lattice is kept as a Hermite
normal form (rows, upper triangular, positive pivots, entries above a
pivot reduced), which gives canonical coset representatives.
"""

from functools import reduce as _fold
from itertools import product
from math import gcd


class GradingGroup:
    """Finitely generated abelian group Z^free_rank + Z/m_1 + ... + Z/m_t."""

    def __init__(self, free_rank=0, torsion=()):
        if free_rank < 0:
            raise ValueError("free rank must be nonnegative")
        torsion = tuple(int(m) for m in torsion)
        if any(m < 2 for m in torsion):
            raise ValueError("torsion orders must be at least 2")
        self.free_rank = free_rank
        self.torsion = torsion

    @property
    def length(self):
        return self.free_rank + len(self.torsion)

    @property
    def torsion_free(self):
        return not self.torsion

    def degree(self, coords):
        coords = tuple(int(c) for c in coords)
        if len(coords) != self.length:
            raise ValueError("degree %r has length %d, expected %d" % (coords, len(coords), self.length))
        r = self.free_rank
        return coords[:r] + tuple(c % m for c, m in zip(coords[r:], self.torsion))

    @property
    def zero(self):
        return (0,) * self.length

    def add(self, a, b):
        return self.degree(x + y for x, y in zip(a, b))

    def sub(self, a, b):
        return self.degree(x - y for x, y in zip(a, b))

    def neg(self, a):
        return self.degree(-x for x in a)

    def scale(self, n, a):
        return self.degree(n * x for x in a)

    def sum(self, degrees):
        out = self.zero
        for d in degrees:
            out = self.add(out, d)
        return out

    def window(self, radius):
        """Degrees with free coordinates in [-radius, radius] (torsion coordinates all)."""
        ranges = [range(-radius, radius + 1)] * self.free_rank + [range(m) for m in self.torsion]
        return [tuple(c) for c in product(*ranges)]

    def in_window(self, d, radius):
        return all(abs(x) <= radius for x in d[:self.free_rank])

    def random_degree(self, rng, radius=2):
        return self.degree([rng.randint(-radius, radius) for _ in range(self.free_rank)]
                           + [rng.randrange(m) for m in self.torsion])

    def to_json(self):
        return {"free_rank": self.free_rank, "torsion": list(self.torsion)}

    @staticmethod
    def from_json(obj):
        return GradingGroup(int(obj.get("free_rank", 0)), obj.get("torsion", ()))

    def __eq__(self, other):
        return isinstance(other, GradingGroup) and (self.free_rank, self.torsion) == (other.free_rank, other.torsion)

    def __hash__(self):
        return hash((self.free_rank, self.torsion))

    def __repr__(self):
        parts = ["Z"] * self.free_rank + ["Z/%d" % m for m in self.torsion]
        return " + ".join(parts) if parts else "0"


# ---------------------------------------------------------------------------
# integer normal forms

def hermite_normal_form(rows, ncols):
    """Row Hermite normal form of an integer matrix.

    Returns (rows, pivot columns); zero rows are dropped.
    """
    A = [list(map(int, r)) for r in rows if any(r)]
    r = 0
    pivots = []
    for c in range(ncols):
        while True:
            nz = [i for i in range(r, len(A)) if A[i][c]]
            if not nz:
                break
            i0 = min(nz, key=lambda i: abs(A[i][c]))
            A[r], A[i0] = A[i0], A[r]
            clean = True
            for i in range(r + 1, len(A)):
                if A[i][c]:
                    q = A[i][c] // A[r][c]
                    A[i] = [a - q * b for a, b in zip(A[i], A[r])]
                    if A[i][c]:
                        clean = False
            if clean:
                break
        if r < len(A) and A[r][c]:
            if A[r][c] < 0:
                A[r] = [-a for a in A[r]]
            for i in range(r):
                q = A[i][c] // A[r][c]
                if q:
                    A[i] = [a - q * b for a, b in zip(A[i], A[r])]
            pivots.append(c)
            r += 1
    return [row for row in A[:r]], pivots


def smith_invariants(rows, ncols):
    """Invariant factors of the cokernel Z^ncols / rowspan.

    Returns (nontrivial finite invariants d_i > 1, free rank of the cokernel).
    """
    A = [list(map(int, r)) for r in rows if any(r)]
    m = len(A)
    diag = []
    t = 0
    while t < min(m, ncols):
        # find a nonzero entry of smallest absolute value in the trailing block
        best = None
        for i in range(t, m):
            for j in range(t, ncols):
                if A[i][j] and (best is None or abs(A[i][j]) < abs(A[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        i, j = best
        A[t], A[i] = A[i], A[t]
        for row in A:
            row[t], row[j] = row[j], row[t]
        done = False
        while not done:
            done = True
            p = A[t][t]
            for i in range(t + 1, m):
                if A[i][t]:
                    q = A[i][t] // p
                    A[i] = [a - q * b for a, b in zip(A[i], A[t])]
                    if A[i][t]:
                        done = False
            for j in range(t + 1, ncols):
                if A[t][j]:
                    q = A[t][j] // p
                    for row in A:
                        row[j] -= q * row[t]
                    if A[t][j]:
                        done = False
            if not done:
                # move the smallest remaining entry of row/column t to the pivot
                cand = [(abs(A[i][t]), i, t) for i in range(t, m) if A[i][t]]
                cand += [(abs(A[t][j]), t, j) for j in range(t, ncols) if A[t][j]]
                _, i, j = min(cand)
                A[t], A[i] = A[i], A[t]
                for row in A:
                    row[t], row[j] = row[j], row[t]
                continue
            # divisibility: pivot must divide the trailing block
            p = A[t][t]
            bad = None
            for i in range(t + 1, m):
                for j in range(t + 1, ncols):
                    if A[i][j] % p:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is not None:
                A[t] = [a + b for a, b in zip(A[t], A[bad])]
                done = False
        diag.append(abs(A[t][t]))
        t += 1
    invariants = [d for d in diag if d > 1]
    return invariants, ncols - len(diag)


class Subgroup:
    """Subgroup of a grading group, stored as a lifted Hermite normal form."""

    def __init__(self, group, generators=()):
        self.group = group
        n = group.length
        r = group.free_rank
        gens = [group.degree(g) for g in generators]
        rel = []
        for i, m in enumerate(group.torsion):
            row = [0] * n
            row[r + i] = m
            rel.append(row)
        self.generators = sorted(set(gens))
        self.hnf, self.pivots = hermite_normal_form([list(g) for g in gens] + rel, n)

    @property
    def full_rank(self):
        return len(self.hnf) == self.group.length

    @property
    def index(self):
        """[Lambda : H], or None when infinite."""
        if not self.full_rank:
            return None
        prod = 1
        for row, c in zip(self.hnf, self.pivots):
            prod *= row[c]
        return prod

    def reduce(self, d):
        """Canonical representative of the coset d + H."""
        v = list(self.group.degree(d))
        for row, c in zip(self.hnf, self.pivots):
            q = v[c] // row[c]
            if q:
                v = [a - q * b for a, b in zip(v, row)]
        return self.group.degree(v)

    def contains(self, d):
        v = list(self.group.degree(d))
        for row, c in zip(self.hnf, self.pivots):
            if any(v[:c]):
                return False
            if v[c] % row[c]:
                return False
            q = v[c] // row[c]
            v = [a - q * b for a, b in zip(v, row)]
        return not any(v)

    __contains__ = contains

    def contains_subgroup(self, other):
        return all(self.contains(tuple(row)) for row in other.hnf)

    def quotient_invariants(self):
        """(finite invariant factors > 1, free rank) of Lambda / H."""
        return smith_invariants(self.hnf, self.group.length)

    def basis(self):
        """Normal-form basis rows, torsion coordinates reduced (zero rows dropped)."""
        out = []
        for row in self.hnf:
            d = self.group.degree(row)
            if any(d):
                out.append(d)
        return out

    def coset_representatives(self):
        """All canonical coset representatives (finite index only)."""
        if not self.full_rank:
            raise ValueError("subgroup of infinite index")
        ranges = []
        for row, c in zip(self.hnf, self.pivots):
            ranges.append(range(row[c]))
        reps = set()
        for coords in product(*ranges):
            reps.add(self.reduce(coords))
        return sorted(reps)

    def __eq__(self, other):
        return isinstance(other, Subgroup) and self.group == other.group and self.hnf == other.hnf

    def __hash__(self):
        return hash((self.group, tuple(map(tuple, self.hnf))))

    def to_json(self):
        inv, free = self.quotient_invariants()
        return {"basis": [list(b) for b in self.basis()], "index": self.index,
                "quotient_invariants": inv, "quotient_free_rank": free}

    def __repr__(self):
        return "Subgroup(basis=%r, index=%r)" % (self.basis(), self.index)


# ---------------------------------------------------------------------------
# support sets

class SupportSet:
    """A finite set of degrees, or a union of cosets of a finite-index subgroup."""

    def __init__(self, group, degrees=None, subgroup=None, reps=None, label=None):
        self.group = group
        self.label = label
        if subgroup is None:
            self.degrees = frozenset(group.degree(d) for d in (degrees or ()))
            self.subgroup = None
            self.reps = None
        else:
            if not isinstance(subgroup, Subgroup):
                subgroup = Subgroup(group, subgroup)
            if subgroup.index is None:
                raise ValueError("coset unions must use a finite-index subgroup")
            self.subgroup = subgroup
            self.reps = frozenset(subgroup.reduce(r) for r in (reps or ()))
            self.degrees = None

    @classmethod
    def finite(cls, group, degrees):
        return cls(group, degrees=degrees)

    @classmethod
    def cosets(cls, group, subgroup_generators, reps):
        return cls(group, subgroup=Subgroup(group, subgroup_generators), reps=reps)

    @classmethod
    def whole(cls, group):
        return cls(group, subgroup=Subgroup(group, _unit_vectors(group)), reps=[group.zero])

    @classmethod
    def from_window(cls, group, support, window, subgroup=None):
        """Infer a coset union from the support seen on a finite window.

        The subgroup defaults to 2 Z[support].  Raises ValueError when the
        windowed data is not a union of cosets of that subgroup.
        """
        support = {group.degree(d) for d in support}
        if subgroup is None:
            subgroup = Subgroup(group, [group.scale(2, d) for d in support])
        elif not isinstance(subgroup, Subgroup):
            subgroup = Subgroup(group, subgroup)
        if subgroup.index is None:
            raise ValueError("support does not span a finite-index subgroup on the window")
        reps = {subgroup.reduce(d) for d in support}
        for w in window:
            w = group.degree(w)
            if (w in support) != (subgroup.reduce(w) in reps):
                raise ValueError("windowed support is not a union of cosets (degree %r)" % (w,))
        return cls(group, subgroup=subgroup, reps=reps, label="window-inferred")

    @property
    def is_finite(self):
        return self.subgroup is None or (self.group.free_rank == 0)

    def contains(self, d):
        d = self.group.degree(d)
        if self.subgroup is None:
            return d in self.degrees
        return self.subgroup.reduce(d) in self.reps

    __contains__ = contains

    def elements(self):
        """Explicit elements (finite supports only)."""
        if self.subgroup is None:
            return sorted(self.degrees)
        if self.group.free_rank:
            raise ValueError("infinite support")
        out = set()
        for d in self.group.window(0):
            if self.contains(d):
                out.add(d)
        return sorted(out)

    def generators(self):
        if self.subgroup is None:
            return sorted(self.degrees)
        return list(self.subgroup.basis()) + sorted(self.reps)

    def to_json(self):
        if self.subgroup is None:
            return {"kind": "finite", "degrees": [list(d) for d in sorted(self.degrees)]}
        out = {"kind": "cosets", "subgroup": [list(b) for b in self.subgroup.basis()],
               "reps": [list(r) for r in sorted(self.reps)]}
        if self.label:
            out["label"] = self.label
        return out

    def __repr__(self):
        if self.subgroup is None:
            return "SupportSet(%r)" % sorted(self.degrees)
        return "SupportSet(cosets of %r: %r)" % (self.subgroup.basis(), sorted(self.reps))


def _unit_vectors(group):
    n = group.length
    return [tuple(1 if i == j else 0 for i in range(n)) for j in range(n)]


def span_subgroup(S):
    """The subgroup Z[S] generated by a support set."""
    return Subgroup(S.group, S.generators())


def _as_finite_if_possible(S):
    if S.subgroup is not None and S.group.free_rank == 0:
        return SupportSet.finite(S.group, S.elements())
    return S


def is_pointed_reflection_subspace(S):
    """0 in S and 2s - s' in S for all s, s' in S."""
    g = S.group
    if not S.contains(g.zero):
        return False
    if S.subgroup is None:
        els = sorted(S.degrees)
        return all(g.sub(g.scale(2, s), t) in S.degrees for s in els for t in els)
    reps = sorted(S.reps)
    return all(S.contains(g.sub(g.scale(2, s), t)) for s in reps for t in reps)


def _common_residues(A, B):
    """Representatives of Lambda / K for a subgroup K inside both coset subgroups."""
    g = A.group
    n = _fold(lambda a, b: a * b // gcd(a, b), [A.subgroup.index, B.subgroup.index], 1)
    K = Subgroup(g, [g.scale(n, e) for e in _unit_vectors(g)])
    return K.coset_representatives()


def support_relations_check(L, S):
    """L + 2S in L and L + S in S."""
    if L.group != S.group:
        raise ValueError("support sets live in different grading groups")
    g = L.group
    L = _as_finite_if_possible(L)
    S = _as_finite_if_possible(S)
    if L.subgroup is None and S.subgroup is None:
        ok1 = all(g.add(l, g.scale(2, s)) in L.degrees for l in L.degrees for s in S.degrees)
        ok2 = all(g.add(l, s) in S.degrees for l in L.degrees for s in S.degrees)
        return ok1 and ok2
    if L.subgroup is not None and S.subgroup is not None:
        residues = _common_residues(L, S)
        Lr = [a for a in residues if L.contains(a)]
        Sr = [b for b in residues if S.contains(b)]
        ok1 = all(L.contains(g.add(a, g.scale(2, b))) for a in Lr for b in Sr)
        ok2 = all(S.contains(g.add(a, b)) for a in Lr for b in Sr)
        return ok1 and ok2
    if L.subgroup is None:
        # finite L, infinite S: L + 2S is infinite unless one side is empty
        if not L.degrees or not S.reps:
            return True
        return False
    # infinite L, finite S
    if not S.degrees or not L.reps:
        return True
    return False
