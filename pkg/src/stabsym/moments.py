"""Moment forms F_k of finite operator sets and the design/condition predicates
that control which symmetry notions coincide."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import gcd

from .clifford import real_clifford_orbit
from .cyclotomic import CycNumber
from .operators import (
    Mono,
    OpMatrix,
    hs_inner,
    phase_point_all,
    phase_point_mono,
    stabilizer_states,
    weyl_mono,
)
from .phase_space import all_vectors


def mono_trace_with(mono: Mono, mat: OpMatrix) -> CycNumber:
    """tr(M P) for a monomial M and dense P."""
    acc = CycNumber.zero(mat.m)
    for j, p in enumerate(mono.perm):
        x = mat.rows[j][p]
        if not x.is_zero():
            acc = acc + mono._phase(mono.expo[j]) * x
    return acc


@dataclass(frozen=True)
class OperatorSet:
    """A finite set of Hermitian trace-1 operators with uniform weights."""

    name: str
    d: int
    n: int
    elements: tuple

    @property
    def dim(self):
        return self.elements[0].dim

    @property
    def size(self):
        return len(self.elements)

    @property
    def conductor(self):
        return self.elements[0].m


@lru_cache(maxsize=None)
def stabilizer_operator_set(d, n) -> OperatorSet:
    fam = stabilizer_states(d, n)
    return OperatorSet(name=f"stabilizer({d},{n})", d=d, n=n, elements=fam.projectors)


@lru_cache(maxsize=None)
def rebit_operator_set(n) -> OperatorSet:
    orbit = real_clifford_orbit(n)
    return OperatorSet(name=f"rebit({n})", d=2, n=n, elements=orbit.projectors)


@lru_cache(maxsize=None)
def phase_point_operator_set(d, n) -> OperatorSet:
    ops = phase_point_all(d, n)
    keys = sorted(ops)
    return OperatorSet(name=f"phase_points({d},{n})", d=d, n=n,
                       elements=tuple(ops[k] for k in keys))


# ---------------------------------------------------------------------------
# Spanning bases and exact trace tables

@lru_cache(maxsize=None)
def hermitian_basis(d, n):
    """An orthogonal Hermitian basis: A(a) for odd d, the Pauli T(a) for d=2."""
    labels = sorted(all_vectors(d, 2 * n))
    if d == 2:
        return tuple((a, weyl_mono(d, n, a)) for a in labels)
    return tuple((a, phase_point_mono(d, n, a)) for a in labels)


@lru_cache(maxsize=None)
def symmetric_basis(m, dim):
    """Rational basis of Sym: E_ii and E_ij + E_ji."""
    out = []
    zero, one = CycNumber.zero(m), CycNumber.one(m)
    for i in range(dim):
        rows = [[zero] * dim for _ in range(dim)]
        rows[i][i] = one
        out.append(OpMatrix(m, rows))
    for i in range(dim):
        for j in range(i + 1, dim):
            rows = [[zero] * dim for _ in range(dim)]
            rows[i][j] = one
            rows[j][i] = one
            out.append(OpMatrix(m, rows))
    return tuple(out)


def _basis_mats(q: OperatorSet, kind):
    if kind == "hermitian":
        return [mono for _, mono in hermitian_basis(q.d, q.n)]
    return list(symmetric_basis(q.conductor, q.dim))


def _trace(b, mat):
    if isinstance(b, Mono):
        return mono_trace_with(b, mat)
    return hs_inner(b, mat)


@lru_cache(maxsize=None)
def trace_table(q: OperatorSet, kind="hermitian"):
    """Exact rational table t[i][j] = tr(B_i q_j) for the chosen spanning basis."""
    basis = _basis_mats(q, kind)
    table = []
    for b in basis:
        row = []
        for el in q.elements:
            row.append(_trace(b, el).as_fraction())
        table.append(row)
    return tuple(tuple(r) for r in table)


def _int_table(table):
    scale = 1
    for row in table:
        for v in row:
            scale = scale * v.denominator // gcd(scale, v.denominator)
    ints = [[int(v * scale) for v in row] for row in table]
    return ints, scale


# ---------------------------------------------------------------------------
# Moment forms

def moment_form(q: OperatorSet, k, args):
    """F_k^Q(A_1..A_k) = (1/|Q|) sum_q prod_i tr(A_i q), exact."""
    if k not in (1, 2, 3):
        raise ValueError("k must be 1, 2 or 3")
    if len(args) != k:
        raise ValueError("need exactly k arguments")
    acc = CycNumber.zero(q.conductor)
    for el in q.elements:
        term = CycNumber.one(q.conductor)
        for a in args:
            term = term * _trace(a, el)
        acc = acc + term
    return acc * Fraction(1, q.size)


def first_moment(q: OperatorSet) -> OpMatrix:
    """mu_1 = (1/|Q|) sum q."""
    acc = OpMatrix.zero(q.conductor, q.dim)
    for el in q.elements:
        acc = acc + el
    return acc.scale(Fraction(1, q.size))


class _Echelon:
    """Incremental exact row echelon over Q for rank and independence tests."""

    def __init__(self, ncols):
        self.ncols = ncols
        self.rows = []  # reduced rows, each with leading 1
        self.pivots = []

    def reduce(self, row):
        row = [Fraction(x) for x in row]
        for r, p in zip(self.rows, self.pivots):
            f = row[p]
            if f:
                row = [x - f * y for x, y in zip(row, r)]
        return row

    def insert(self, row):
        """Reduce row; if independent, add it and return True."""
        row = self.reduce(row)
        p = next((i for i, x in enumerate(row) if x != 0), None)
        if p is None:
            return False
        lead = row[p]
        row = [x / lead for x in row]
        self.rows.append(row)
        self.pivots.append(p)
        return True

    @property
    def rank(self):
        return len(self.rows)


def span_dimension(q: OperatorSet) -> int:
    """dim span(Q), via exact rank of coordinates in the Hermitian basis."""
    ints, _ = _int_table(trace_table(q, "hermitian"))
    ech = _Echelon(len(ints))
    for col in zip(*ints):
        ech.insert(col)
        if ech.rank == ech.ncols:
            break
    return ech.rank


# ---------------------------------------------------------------------------
# Design predicates

@dataclass(frozen=True)
class DesignReport:
    predicate: str
    passed: bool
    constants: dict = field(default_factory=dict)
    witness: tuple | None = None

    def to_json(self):
        return {
            "predicate": self.predicate,
            "pass": self.passed,
            "constants": {k: str(v) for k, v in self.constants.items()},
            "witness": None if self.witness is None else [str(w) for w in self.witness],
        }


def _pair_sums(q: OperatorSet):
    """S2[i][j] = sum_q t_i t_j as integers plus the overall scale."""
    import numpy as np

    ints, scale = _int_table(trace_table(q, "hermitian"))
    arr = np.array(ints, dtype=np.int64)
    return arr @ arr.T, scale


def is_complex_2design(q: OperatorSet) -> DesignReport:
    """Exact comparison of F_2 with (tr A tr B + tr AB) / (D(D+1)) on a basis."""
    basis = hermitian_basis(q.d, q.n)
    monos = [m for _, m in basis]
    dd = q.dim
    s2, scale = _pair_sums(q)
    denom = q.size * scale * scale
    worst = None
    for i in range(len(monos)):
        for j in range(i, len(monos)):
            lhs = Fraction(int(s2[i, j]), denom)
            tr_i = monos[i].trace().as_fraction()
            tr_j = monos[j].trace().as_fraction()
            tr_ij = monos[i].trace_product(monos[j]).as_fraction()
            rhs = Fraction(tr_i * tr_j + tr_ij, dd * (dd + 1))
            if lhs != rhs:
                gap = abs(lhs - rhs)
                if worst is None or gap > worst[0]:
                    worst = (gap, basis[i][0], basis[j][0], lhs, rhs)
    if worst is None:
        return DesignReport("complex_2design", True)
    return DesignReport("complex_2design", False, witness=worst[1:])


def is_complex_3design(q: OperatorSet, stop_at_first=True) -> DesignReport:
    """Exact comparison of F_3 with the 6-term symmetric form.

    The correct normalization of the 6-term sum is 1/(D(D+1)(D+2)), anchored by
    F_3(1,1,1) = 1 for trace-1 states.
    """
    basis = hermitian_basis(q.d, q.n)
    monos = [m for _, m in basis]
    dd = q.dim
    ints, scale = _int_table(trace_table(q, "hermitian"))
    denom = Fraction(1, q.size * scale ** 3)
    m = q.conductor
    witness = None
    nb = len(monos)
    tr_single = [monos[i].trace().as_fraction() for i in range(nb)]
    tr_pair = [[monos[i].trace_product(monos[j]).as_fraction() for j in range(nb)] for i in range(nb)]
    for i in range(nb):
        for j in range(i, nb):
            prod_ij = monos[i] @ monos[j]
            for k in range(j, nb):
                s = 0
                row_i, row_j, row_k = ints[i], ints[j], ints[k]
                for t in range(q.size):
                    s += row_i[t] * row_j[t] * row_k[t]
                lhs = CycNumber.from_fraction(m, s * denom)
                sym = prod_ij.trace_product(monos[k]) + (monos[i] @ monos[k]).trace_product(monos[j])
                rhs = (
                    CycNumber.from_fraction(m, tr_single[i] * tr_single[j] * tr_single[k])
                    + CycNumber.from_fraction(m, tr_single[i] * tr_pair[j][k])
                    + CycNumber.from_fraction(m, tr_single[j] * tr_pair[i][k])
                    + CycNumber.from_fraction(m, tr_single[k] * tr_pair[i][j])
                    + sym
                ) * Fraction(1, dd * (dd + 1) * (dd + 2))
                if lhs != rhs:
                    witness = (basis[i][0], basis[j][0], basis[k][0])
                    if stop_at_first:
                        return DesignReport("complex_3design", False, witness=witness)
    if witness is None:
        return DesignReport("complex_3design", True)
    return DesignReport("complex_3design", False, witness=witness)


def _solve_linear_positive(equations, unknowns):
    """Exact positive solution of a rational system [A | b]; None if impossible.

    The system may be rank-deficient (the trace invariants satisfy algebraic
    relations in low dimension); any all-positive point of the solution set is
    acceptable and one is searched for along the nullspace.
    """
    mat = [[Fraction(x) for x in eq] for eq in equations]
    rank = 0
    pivots = []
    for c in range(unknowns):
        piv = next((i for i in range(rank, len(mat)) if mat[i][c] != 0), None)
        if piv is None:
            continue
        mat[rank], mat[piv] = mat[piv], mat[rank]
        lead = mat[rank][c]
        mat[rank] = [x / lead for x in mat[rank]]
        for i in range(len(mat)):
            if i != rank and mat[i][c] != 0:
                f = mat[i][c]
                mat[i] = [x - f * y for x, y in zip(mat[i], mat[rank])]
        pivots.append(c)
        rank += 1
    for row in mat[rank:]:
        if row[-1] != 0:
            return None
    particular = [Fraction(0)] * unknowns
    for row, p in zip(mat[:rank], pivots):
        particular[p] = row[-1]
    free = [c for c in range(unknowns) if c not in pivots]
    if not free:
        return particular if all(x > 0 for x in particular) else None
    null_basis = []
    for fcol in free:
        v = [Fraction(0)] * unknowns
        v[fcol] = Fraction(1)
        for row, p in zip(mat[:rank], pivots):
            v[p] = -row[fcol]
        null_basis.append(v)
    if len(null_basis) == 1:
        null = null_basis[0]
        lo, hi = None, None  # open interval for t with particular + t*null > 0
        for pv, nv in zip(particular, null):
            if nv == 0:
                if pv <= 0:
                    return None
            elif nv > 0:
                bound = -pv / nv
                lo = bound if lo is None or bound > lo else lo
            else:
                bound = -pv / nv
                hi = bound if hi is None or bound < hi else hi
        if lo is not None and hi is not None:
            if lo >= hi:
                return None
            t = (lo + hi) / 2
        elif lo is not None:
            t = lo + 1
        elif hi is not None:
            t = hi - 1
        else:
            t = Fraction(0)
        return [pv + t * nv for pv, nv in zip(particular, null)]
    # higher nullity does not occur for these invariants; fall back to a scan
    for assign in (0, 1, -1, 2, -2):
        cand = [pv + assign * sum(col) for pv, col in zip(particular, zip(*null_basis))]
        if all(x > 0 for x in cand):
            return cand
    return None


def is_real_4design(q: OperatorSet) -> DesignReport:
    """F_2 = K_hs (A|B) + K_tr (A|1)(B|1) with exactly solved positive constants.

    Solving both constants exactly doubles as the consistency proof and pins
    the ratio between the two invariants instead of assuming it.
    """
    basis = list(symmetric_basis(q.conductor, q.dim))
    table = trace_table(q, "symmetric")
    nb = len(basis)
    tr_single = [b.trace().as_fraction() for b in basis]
    hs = [[hs_inner(basis[i], basis[j]).as_fraction() for j in range(nb)] for i in range(nb)]
    equations = []
    coords = []
    for i in range(nb):
        for j in range(i, nb):
            lhs = sum((table[i][t] * table[j][t] for t in range(q.size)), Fraction(0))
            lhs /= q.size
            equations.append((hs[i][j], tr_single[i] * tr_single[j], lhs))
            coords.append((i, j))
    sol = _solve_linear_positive(equations, 2)
    if sol is None:
        return DesignReport("real_4design", False,
                            witness=("no consistent positive constants",))
    k_hs, k_tr = sol
    return DesignReport("real_4design", True, constants={"K_hs": k_hs, "K_tr": k_tr})


def is_real_6design(q: OperatorSet) -> DesignReport:
    """F_3 = K1 trA trB trC + K2 (three cross terms) + K3 (Tr(ABC)+Tr(ACB))."""
    basis = list(symmetric_basis(q.conductor, q.dim))
    table = trace_table(q, "symmetric")
    nb = len(basis)
    tr_single = [b.trace().as_fraction() for b in basis]
    hs = [[hs_inner(basis[i], basis[j]).as_fraction() for j in range(nb)] for i in range(nb)]
    equations = []
    for i in range(nb):
        for j in range(i, nb):
            bij = basis[i] @ basis[j]
            for k in range(j, nb):
                lhs = sum((table[i][t] * table[j][t] * table[k][t] for t in range(q.size)),
                          Fraction(0)) / q.size
                c1 = tr_single[i] * tr_single[j] * tr_single[k]
                c2 = tr_single[i] * hs[j][k] + tr_single[j] * hs[i][k] + tr_single[k] * hs[i][j]
                sym = (bij @ basis[k]).trace() + ((basis[i] @ basis[k]) @ basis[j]).trace()
                equations.append((c1, c2, sym.as_fraction(), lhs))
    sol = _solve_linear_positive(equations, 3)
    if sol is None:
        return DesignReport("real_6design", False,
                            witness=("no consistent positive constants",))
    k1, k2, k3 = sol
    return DesignReport("real_6design", True, constants={"K1": k1, "K2": k2, "K3": k3})


# ---------------------------------------------------------------------------
# Condition checks behind Lin ⊂ Wig and Lin ⊂ Jor

@lru_cache(maxsize=None)
def _gram_data(q: OperatorSet):
    """(numpy int Gram, scale, dir-basis indices): g_ij = G[i,j] / scale.

    The Gram comes from Parseval over the orthogonal Hermitian basis, whose
    orthonormality is itself verified in the operator tests.
    """
    import numpy as np

    ints, scale = _int_table(trace_table(q, "hermitian"))
    t = np.array(ints, dtype=np.int64)
    gram = (t.T @ t)  # tr(q_i q_j) * scale^2 * dim
    gscale = scale * scale * q.dim
    # independent differences q_i - q_0 via coordinate echelon
    ech = _Echelon(t.shape[0])
    picked = []
    cols = t.T
    for i in range(1, q.size):
        if ech.insert(cols[i] - cols[0]):
            picked.append(i)
        if ech.rank == ech.ncols:
            break
    return gram, gscale, tuple(picked)


def check_lin_wig_condition(q: OperatorSet):
    """F_2 proportional to HS on dir(Q); mu_1 orthogonal to dir(Q) in both forms."""
    gram, gscale, picked = _gram_data(q)
    size = q.size
    f2sums = gram @ gram.T  # sum_t G[i,t] G[j,t]

    def g(i, j):
        return Fraction(int(gram[i, j]), gscale)

    def du(i, j):
        return g(i, j) - g(i, 0) - g(0, j) + g(0, 0)

    def f2_states(i, j):
        return Fraction(int(f2sums[i, j]), size * gscale * gscale)

    def f2_diff(i, j):
        return f2_states(i, j) - f2_states(i, 0) - f2_states(0, j) + f2_states(0, 0)

    clauses = {}
    const = None
    witness = None
    for ii, i in enumerate(picked):
        for j in picked[ii:]:
            hs_v = du(i, j)
            f2_v = f2_diff(i, j)
            if hs_v == 0:
                if f2_v != 0:
                    witness = (i, j, f2_v, hs_v)
                    break
            else:
                c = f2_v / hs_v
                if const is None:
                    const = c
                elif c != const:
                    witness = (i, j, f2_v, hs_v)
                    break
        if witness:
            break
    clauses["f2_proportional_on_dir"] = witness is None
    col_sums = gram.sum(axis=0)
    clauses["mu1_orthogonal_hs"] = all(
        int(col_sums[i]) == int(col_sums[0]) for i in picked
    )
    f2_ok = True
    for i in picked:
        val = int((col_sums * (gram[i] - gram[0])).sum())
        if val != 0:
            f2_ok = False
            break
    clauses["mu1_orthogonal_f2"] = f2_ok
    passed = all(clauses.values())
    return {
        "condition": "lin_subset_wig",
        "pass": passed,
        "clauses": clauses,
        "constant": None if const is None else str(const),
        "dir_dimension": len(picked),
        "witness": None if witness is None else [str(w) for w in witness],
    }


def check_lin_jor_condition(q: OperatorSet):
    """The Lin ⊂ Wig condition plus mu_1 ∝ 1, a full span, and the F_3 clause."""
    base = check_lin_wig_condition(q)
    gram, gscale, picked = _gram_data(q)
    size = q.size
    clauses = dict(base["clauses"])
    mu = first_moment(q)
    target = OpMatrix.identity(q.conductor, q.dim).scale(
        mu.trace().as_fraction() / q.dim
    )
    clauses["mu1_proportional_identity"] = mu == target
    span_dim = span_dimension(q)
    full_herm = q.dim ** 2
    full_sym = q.dim * (q.dim + 1) // 2
    clauses["span_full"] = span_dim in (full_herm, full_sym)

    def f3_states(i, j, k):
        v = int((gram[i] * gram[j] * gram[k]).sum())
        return Fraction(v, size * gscale ** 3)

    def f3_diff(i, j, k):
        total = Fraction(0)
        for a, sa in ((i, 1), (0, -1)):
            for b, sb in ((j, 1), (0, -1)):
                for c, sc in ((k, 1), (0, -1)):
                    total += sa * sb * sc * f3_states(a, b, c)
        return total

    diffs = {i: q.elements[i] - q.elements[0] for i in picked}
    m = q.conductor
    const = None
    witness = None
    for ii, i in enumerate(picked):
        for jj in range(ii, len(picked)):
            j = picked[jj]
            uij = diffs[i] @ diffs[j]
            for k in picked[jj:]:
                lhs = f3_diff(i, j, k)
                # the symmetrized trace is real but may be irrational (e.g. in
                # Q[sqrt 5]); compare in the cyclotomic field throughout
                rhs = (uij @ diffs[k]).trace() + ((diffs[i] @ diffs[k]) @ diffs[j]).trace()
                if rhs.is_zero():
                    if lhs != 0:
                        witness = (i, j, k, lhs, rhs)
                        break
                else:
                    c = CycNumber.from_fraction(m, lhs) * rhs.inverse()
                    if const is None:
                        const = c
                    elif c != const:
                        witness = (i, j, k, lhs, rhs)
                        break
            if witness:
                break
        if witness:
            break
    clauses["f3_proportional_on_dir"] = witness is None
    passed = all(clauses.values())
    if const is None:
        const_str = None
    elif const.is_rational():
        const_str = str(const.as_fraction())
    else:
        const_str = repr(const)
    return {
        "condition": "lin_subset_jor",
        "pass": passed,
        "clauses": clauses,
        "f3_constant": const_str,
        "span_dimension": span_dim,
        "witness": None if witness is None else [str(w) for w in witness],
    }
