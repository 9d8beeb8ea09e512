"""The symplectic vector space Z_d^{2n}: Lagrangians, cosets, stabilizer labels.

Phase-space vectors are plain tuples of length 2n storing (a_X, a_Z)
concatenated; subspaces are canonical RREF row spans.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

from .errors import BudgetExceeded
from .zmod import require_prime, rref_rows, solve_rows

MAX_POINTS = 4096  # default cap on d^{2n} for enumerations


def symplectic_form(a, b, d: int, n: int | None = None) -> int:
    """[a, b] = a_X . b_Z - b_X . a_Z in Z_d."""
    if len(a) != len(b) or len(a) % 2:
        raise ValueError("vectors must share an even length")
    n = len(a) // 2 if n is None else n
    s = 0
    for i in range(n):
        s += a[i] * b[n + i] - b[i] * a[n + i]
    return s % d


def vec_add(a, b, d):
    return tuple((x + y) % d for x, y in zip(a, b))


def vec_sub(a, b, d):
    return tuple((x - y) % d for x, y in zip(a, b))


def all_vectors(d, length):
    return itertools.product(range(d), repeat=length)


@dataclass(frozen=True)
class Subspace:
    """Row span of a canonical RREF basis over Z_d."""

    basis: tuple
    d: int
    ambient: int

    @classmethod
    def from_rows(cls, rows, d, ambient=None):
        require_prime(d)
        if not rows:
            if ambient is None:
                raise ValueError("empty row list needs explicit ambient dimension")
            return cls(basis=(), d=d, ambient=ambient)
        ech, _, _ = rref_rows(rows, d)
        return cls(basis=tuple(ech), d=d, ambient=len(rows[0]))

    @property
    def dim(self):
        return len(self.basis)

    @property
    def pivots(self):
        return tuple(next(i for i, x in enumerate(row) if x) for row in self.basis)

    def reduce(self, v):
        """Canonical coset representative of v + self: zero at all pivots.

        This is the lexicographically smallest vector in the coset.
        """
        d = self.d
        v = list(x % d for x in v)
        for row in self.basis:
            p = next(i for i, x in enumerate(row) if x)
            f = v[p]
            if f:
                v = [(x - f * y) % d for x, y in zip(v, row)]
        return tuple(v)

    def contains(self, v) -> bool:
        return all(x == 0 for x in self.reduce(v))

    def points(self):
        """All d^dim vectors of the subspace."""
        d = self.d
        out = []
        for coeffs in itertools.product(range(d), repeat=self.dim):
            v = [0] * self.ambient
            for c, row in zip(coeffs, self.basis):
                if c:
                    v = [(x + c * y) % d for x, y in zip(v, row)]
            out.append(tuple(v))
        return out

    def to_json(self):
        return {"d": self.d, "ambient": self.ambient, "rows": [list(r) for r in self.basis]}

    @classmethod
    def from_json(cls, obj):
        return cls.from_rows([tuple(r) for r in obj["rows"]], obj["d"], ambient=obj["ambient"])


def subspace_intersection(a: Subspace, b: Subspace) -> Subspace:
    """Exact intersection of two row spans."""
    if a.d != b.d or a.ambient != b.ambient:
        raise ValueError("mismatched ambient spaces")
    d = a.d
    if a.dim == 0 or b.dim == 0:
        return Subspace.from_rows([], d, ambient=a.ambient)
    # left kernel of the stacked matrix [A; -B]: rows w with w[:k] A = w[k:] B
    stacked = list(a.basis) + [tuple((-x) % d for x in row) for row in b.basis]
    cols = list(zip(*stacked))  # transpose: ambient rows, k+l cols
    ech, pivots, rank = rref_rows(cols, d)
    free = [j for j in range(len(stacked)) if j not in pivots]
    gens = []
    for j in free:
        w = [0] * len(stacked)
        w[j] = 1
        for row, p in zip(ech, pivots):
            w[p] = (-row[j]) % d
        vec = [0] * a.ambient
        for c, row in zip(w[: a.dim], a.basis):
            if c:
                vec = [(x + c * y) % d for x, y in zip(vec, row)]
        gens.append(tuple(vec))
    return Subspace.from_rows(gens, d, ambient=a.ambient) if gens else Subspace.from_rows(
        [], d, ambient=a.ambient
    )


class LagrangianSubspace(Subspace):
    """A maximal isotropic subspace: dimension n with vanishing form."""

    @classmethod
    def from_rows(cls, rows, d, ambient=None):
        sub = Subspace.from_rows(rows, d, ambient=ambient)
        n = sub.ambient // 2
        if sub.dim != n:
            raise ValueError(f"dimension {sub.dim} != n = {n}")
        for u in sub.basis:
            for v in sub.basis:
                if symplectic_form(u, v, d):
                    raise ValueError("form does not vanish on the span")
        return cls(basis=sub.basis, d=d, ambient=sub.ambient)


@dataclass(frozen=True)
class AffineSubspace:
    """A coset direction + canonical representative."""

    direction: Subspace
    rep: tuple

    @classmethod
    def make(cls, direction, rep):
        return cls(direction=direction, rep=direction.reduce(rep))

    @property
    def d(self):
        return self.direction.d

    def points(self):
        d = self.d
        return [vec_add(self.rep, p, d) for p in self.direction.points()]

    def contains(self, v):
        return self.direction.reduce(v) == self.rep


@dataclass(frozen=True)
class StabilizerLabel:
    """A Lagrangian L plus the canonical coset representative of L + a.

    The representative encodes the functional g(b) = [a, b] on L.
    """

    L: LagrangianSubspace
    rep: tuple

    @classmethod
    def make(cls, L, rep):
        return cls(L=L, rep=L.reduce(rep))

    @property
    def d(self):
        return self.L.d

    @property
    def n(self):
        return self.L.ambient // 2

    def coset(self) -> AffineSubspace:
        return AffineSubspace.make(self.L, self.rep)

    def functional(self, b) -> int:
        """g(b) = [rep, b] for b in L."""
        return symplectic_form(self.rep, b, self.d)

    def sort_key(self):
        return (self.L.basis, self.rep)


def _check_budget(d, n, budget):
    cap = MAX_POINTS if budget is None else budget
    if d ** (2 * n) > cap:
        raise BudgetExceeded(f"d^(2n) = {d ** (2 * n)} exceeds cap {cap}")


def enumerate_subspaces(d, ambient, k):
    """All k-dimensional subspaces of Z_d^ambient as canonical RREF bases."""
    out = []
    for pivots in itertools.combinations(range(ambient), k):
        free_positions = []
        for r, p in enumerate(pivots):
            for c in range(p + 1, ambient):
                if c not in pivots:
                    free_positions.append((r, c))
        for values in itertools.product(range(d), repeat=len(free_positions)):
            rows = [[0] * ambient for _ in range(k)]
            for r, p in enumerate(pivots):
                rows[r][p] = 1
            for (r, c), v in zip(free_positions, values):
                rows[r][c] = v
            out.append(tuple(tuple(row) for row in rows))
    return out


@lru_cache(maxsize=None)
def enumerate_lagrangians(d, n, budget=None):
    """All Lagrangian subspaces of Z_d^{2n}, sorted by canonical basis."""
    require_prime(d)
    _check_budget(d, n, budget)
    out = []
    for rows in enumerate_subspaces(d, 2 * n, n):
        if all(symplectic_form(u, v, d) == 0 for u in rows for v in rows):
            out.append(LagrangianSubspace.from_rows(rows, d))
    out.sort(key=lambda L: L.basis)
    return tuple(out)


def coset_reps(L: Subspace):
    """Canonical representatives of all cosets of L: free coordinates range."""
    d = L.d
    pivots = set(L.pivots)
    free = [i for i in range(L.ambient) if i not in pivots]
    reps = []
    for values in itertools.product(range(d), repeat=len(free)):
        v = [0] * L.ambient
        for i, val in zip(free, values):
            v[i] = val
        reps.append(tuple(v))
    return reps


@lru_cache(maxsize=None)
def enumerate_stabilizer_labels(d, n, budget=None):
    """All (Lagrangian, coset) stabilizer labels, deterministically sorted."""
    _check_budget(d, n, budget)
    out = []
    for L in enumerate_lagrangians(d, n, budget):
        for rep in coset_reps(L):
            out.append(StabilizerLabel.make(L, rep))
    out.sort(key=StabilizerLabel.sort_key)
    return tuple(out)


def intersect(a: AffineSubspace, b: AffineSubspace):
    """Exact intersection coset of two affine subspaces, or None when empty."""
    if a.d != b.d or a.direction.ambient != b.direction.ambient:
        raise ValueError("mismatched ambient spaces")
    d = a.d
    direction = subspace_intersection(a.direction, b.direction)
    # solve rep_a + u . A = rep_b + v . B for a common point
    rows_a = list(a.direction.basis)
    rows_b = list(b.direction.basis)
    cols = list(zip(*(rows_a + [tuple((-x) % d for x in r) for r in rows_b]))) if rows_a or rows_b else []
    target = vec_sub(b.rep, a.rep, d)
    if not cols:
        return a if a.rep == b.rep else None
    sol = solve_rows(cols, target, d)
    if sol is None:
        return None
    point = list(a.rep)
    for c, row in zip(sol[: len(rows_a)], rows_a):
        if c:
            point = [(x + c * y) % d for x, y in zip(point, row)]
    return AffineSubspace.make(direction, tuple(point))


def apply_affine_similitude(t, x):
    """x -> R x + a for an affine similitude t with fields a, R (t.R = S K_alpha)."""
    return vec_add(t.matrix.apply(x), t.a, t.d)


def transform_label(label: StabilizerLabel, matrix, a) -> StabilizerLabel:
    """Image of the labelled coset under x -> matrix . x + a."""
    d = label.d
    new_rows = [matrix.apply(row) for row in label.L.basis]
    new_L = LagrangianSubspace.from_rows(new_rows, d)
    new_rep = vec_add(matrix.apply(label.rep), a, d)
    return StabilizerLabel.make(new_L, new_rep)


def label_from_functional(L: LagrangianSubspace, values) -> StabilizerLabel:
    """Label whose representative a satisfies [a, b_i] = values[i] on the basis of L."""
    d = L.d
    n = L.ambient // 2
    if len(values) != L.dim:
        raise ValueError("one value per basis row required")
    # [a, b] = sum_i a_i (Jb)_i with Jb = (b_Z, -b_X)
    rows = []
    for b in L.basis:
        jb = tuple(b[n:]) + tuple((-x) % d for x in b[:n])
        rows.append(jb)
    sol = solve_rows(rows, [v % d for v in values], d)
    assert sol is not None, "functionals on a Lagrangian are always representable"
    return StabilizerLabel.make(L, sol)
