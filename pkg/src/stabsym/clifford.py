"""Symplectic and Clifford machinery: Sp(2n, d), similitudes, the faithful
metaplectic section for single qudits, Galois-extended Clifford elements with
their exact composition law, qubit gates and the real Clifford orbit."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .cyclotomic import (
    CycNumber,
    GaloisMap,
    conductor_for,
    galois_apply,
    gauss_sum,
    iunit,
    omega,
    root_of_unity,
    sqrt_d,
    tau,
)
from .errors import BudgetExceeded, WordDecompositionFailure
from .operators import OpMatrix, weyl
from .permgroup import PermGroup, compose, identity_perm, inverse
from .phase_space import all_vectors, symplectic_form, vec_add
from .zmod import ZModMatrix, inv_mod, invert, legendre, require_prime


# ---------------------------------------------------------------------------
# Symplectic matrices and similitudes over Z_d

def symplectic_j(d, n) -> ZModMatrix:
    rows = [[0] * (2 * n) for _ in range(2 * n)]
    for i in range(n):
        rows[i][n + i] = 1
        rows[n + i][i] = -1 % d
    return ZModMatrix(rows, d)


def similitude_multiplier(m: ZModMatrix):
    """The mu with [Ma, Mb] = mu [a, b], or None if m is not a similitude."""
    d = m.d
    n = m.ncols // 2
    mu = None
    basis = [tuple(1 if k == i else 0 for k in range(2 * n)) for i in range(2 * n)]
    for i, a in enumerate(basis):
        for j, b in enumerate(basis):
            lhs = symplectic_form(m.apply(a), m.apply(b), d)
            rhs = symplectic_form(a, b, d)
            if rhs == 0:
                if lhs != 0:
                    return None
            else:
                factor = (lhs * inv_mod(rhs, d)) % d
                if mu is None:
                    mu = factor
                elif mu != factor:
                    return None
    return mu


def is_symplectic(m: ZModMatrix) -> bool:
    return similitude_multiplier(m) == 1


def k_alpha(d, n, alpha) -> ZModMatrix:
    """The canonical similitude K_alpha = diag(1_n, alpha 1_n)."""
    rows = [[0] * (2 * n) for _ in range(2 * n)]
    for i in range(n):
        rows[i][i] = 1
        rows[n + i][n + i] = alpha % d
    return ZModMatrix(rows, d)


def transvection(v, d) -> ZModMatrix:
    """t_v: x -> x + [x, v] v."""
    size = len(v)
    n = size // 2
    jv = tuple(v[n:]) + tuple((-x) % d for x in v[:n])
    rows = [
        [(1 if i == j else 0) + v[i] * jv[j] for j in range(size)]
        for i in range(size)
    ]
    return ZModMatrix(rows, d)


def sp_order_formula(d, n) -> int:
    out = d ** (n * n)
    for k in range(1, n + 1):
        out *= d ** (2 * k) - 1
    return out


@lru_cache(maxsize=None)
def sp_generators(d, n):
    """A certified generating set of Sp(2n, d) built from transvections."""
    require_prime(d)
    if d ** (2 * n) > 4096:
        raise BudgetExceeded("phase space too large for certification")
    units = [tuple(1 if k == i else 0 for k in range(2 * n)) for i in range(2 * n)]
    small = list(units)
    for i in range(2 * n):
        for j in range(i + 1, 2 * n):
            small.append(tuple((x + y) % d for x, y in zip(units[i], units[j])))
    gens = [transvection(v, d) for v in small]
    if _order_on_nonzero(gens, d, n) != sp_order_formula(d, n):
        gens = [transvection(v, d) for v in all_vectors(d, 2 * n) if any(v)]
        assert _order_on_nonzero(gens, d, n) == sp_order_formula(d, n)
    for g in gens:
        assert is_symplectic(g)
    return tuple(gens)


def _nonzero_points(d, n):
    return [v for v in all_vectors(d, 2 * n) if any(v)]


def matrix_point_perm(m: ZModMatrix, points, index=None):
    """The permutation a matrix induces on a list of phase-space points."""
    if index is None:
        index = {p: i for i, p in enumerate(points)}
    return tuple(index[m.apply(p)] for p in points)


def _order_on_nonzero(gens, d, n):
    points = _nonzero_points(d, n)
    index = {p: i for i, p in enumerate(points)}
    perms = [matrix_point_perm(g, points, index) for g in gens]
    return PermGroup.from_generators(perms, degree=len(points)).order()


def sp_order(d, n) -> int:
    """|Sp(2n, d)| certified by the permutation engine on nonzero vectors."""
    return _order_on_nonzero(sp_generators(d, n), d, n)


# ---------------------------------------------------------------------------
# The metaplectic section for n = 1 (single qudit), odd d.
#
# Generators (with the phase conventions that make the section exact):
#   Fourier   F     = g_d^{-1} (omega^{jk})          <-> [[0,-1],[1,0]]
#   Multiplier M_g  = (g/d) sum |gq><q|              <-> diag(g, g^{-1})
#   Shear     D_1   = diag(tau^{q^2})                <-> [[1,0],[1,1]]
# The BFS closure of these is either SL(2,d) itself or a double cover whose
# derived-series core is the unique splitting; the core is Galois-stable
# because field automorphisms are group automorphisms.

_METAPLECTIC_MAX_D = 7


def _fourier_matrix(d) -> OpMatrix:
    m = conductor_for(d)
    ginv = gauss_sum(d).inverse()
    return OpMatrix(
        m, [[root_of_unity(m, (m // d) * ((j * k) % d)) * ginv for k in range(d)] for j in range(d)]
    )


def _mult_matrix(d, gamma) -> OpMatrix:
    m = conductor_for(d)
    sign = legendre(gamma, d)
    rows = [[CycNumber.zero(m) for _ in range(d)] for _ in range(d)]
    for q in range(d):
        rows[(gamma * q) % d][q] = CycNumber.from_fraction(m, sign)
    return OpMatrix(m, rows)


def _shear_matrix(d, lam) -> OpMatrix:
    m = conductor_for(d)
    t = tau(d)
    rows = [[CycNumber.zero(m) for _ in range(d)] for _ in range(d)]
    for q in range(d):
        rows[q][q] = t ** ((lam * q * q) % d)
    return OpMatrix(m, rows)


def primitive_root(d):
    for g in range(2, d):
        seen = {1}
        x = g
        while x != 1:
            seen.add(x)
            x = (x * g) % d
        if len(seen) == d - 1:
            return g
    raise ValueError("no primitive root (d not prime?)")


def _symplectic_of_unitary(u: OpMatrix, d):
    """Read S off U T(e_i) U^dagger = T(S e_i); None if a phase appears."""
    cols = []
    ud = u.dagger()
    for e in ((1, 0), (0, 1)):
        conj = u @ weyl(d, 1, e) @ ud
        for b in all_vectors(d, 2):
            if b == (0, 0):
                continue
            if conj == weyl(d, 1, b):
                cols.append(b)
                break
        else:
            return None
    return ZModMatrix([[cols[0][0], cols[1][0]], [cols[0][1], cols[1][1]]], d)


@lru_cache(maxsize=None)
def _metaplectic_table(d):
    """dict: symplectic matrix rows -> (unitary, word) for all of SL(2, d)."""
    require_prime(d)
    if d == 2 or d > _METAPLECTIC_MAX_D:
        raise BudgetExceeded(f"metaplectic section supports odd d <= {_METAPLECTIC_MAX_D}")
    g = primitive_root(d)
    gen_names = ("F", f"M{g}", "D1")
    gens = [_fourier_matrix(d), _mult_matrix(d, g), _shear_matrix(d, 1)]
    ident = OpMatrix.identity(conductor_for(d), d)
    elems = [ident]
    index = {ident: 0}
    words = {0: ()}
    qi = 0
    while qi < len(elems):
        u = elems[qi]
        for k, gen in enumerate(gens):
            p = u @ gen
            if p not in index:
                index[p] = len(elems)
                words[len(elems)] = words[qi] + (gen_names[k],)
                elems.append(p)
        qi += 1
    sl = sp_order_formula(d, 1)
    if len(elems) == sl:
        core_ids = range(len(elems))
    else:
        core_ids = _derived_core(elems, index, gens, sl)
    table = {}
    for i in core_ids:
        u = elems[i]
        s = _symplectic_of_unitary(u, d)
        assert s is not None, "core element conjugates with a phase"
        key = s.rows
        assert key not in table, "core is not a section"
        table[key] = (u, words[i])
    assert len(table) == sl, "section does not cover SL(2, d)"
    return table


def _derived_core(elems, index, gens, target):
    """Indices of the derived-subgroup splitting via the regular permutation image.

    For d >= 5, SL(2, d) is perfect with trivial Schur multiplier, so the
    derived subgroup of the generated matrix group is the unique complement of
    the central phases.
    """
    n = len(elems)
    left = [tuple(index[g @ elems[i]] for i in range(n)) for g in gens]
    comms = {}
    for a in left:
        for b in left:
            c = compose(compose(a, b), compose(inverse(a), inverse(b)))
            comms[c] = None
    gen_set = list(comms)
    changed = True
    while changed:
        changed = False
        for c in list(gen_set):
            for g in left:
                cc = compose(compose(g, c), inverse(g))
                if cc not in comms:
                    comms[cc] = None
                    gen_set.append(cc)
                    changed = True
    idp = identity_perm(n)
    group = {idp: None}
    queue = [idp]
    while queue:
        p = queue.pop()
        for g in gen_set:
            q = compose(p, g)
            if q not in group:
                group[q] = None
                queue.append(q)
    if len(group) != target:
        raise WordDecompositionFailure("derived subgroup is not a splitting")
    return [p[0] for p in group]


def _as_rows(s):
    if isinstance(s, ZModMatrix):
        return s.rows
    return tuple(tuple(x for x in row) for row in s)


def metaplectic(d, s) -> OpMatrix:
    """The canonical unitary U_S with U_S T(b) U_S^dagger = T(Sb) exactly,
    multiplicative in S (n = 1, odd d)."""
    rows = _as_rows(s)
    table = _metaplectic_table(d)
    key = tuple(tuple(x % d for x in r) for r in rows)
    if key not in table:
        raise WordDecompositionFailure(f"{rows} is not in SL(2, {d})")
    return table[key][0]


def metaplectic_word(d, s):
    """The generator word (in F, M_g, D_1) realizing U_S."""
    rows = _as_rows(s)
    table = _metaplectic_table(d)
    key = tuple(tuple(x % d for x in r) for r in rows)
    if key not in table:
        raise WordDecompositionFailure(f"{rows} is not in SL(2, {d})")
    return table[key][1]


# ---------------------------------------------------------------------------
# Similitudes and the affine similitude group

@dataclass(frozen=True)
class Similitude:
    """R in GSp with multiplier alpha; factorizes as R = S K_alpha."""

    R: ZModMatrix
    alpha: int

    @classmethod
    def from_matrix(cls, r: ZModMatrix):
        mu = similitude_multiplier(r)
        if mu is None or mu == 0:
            raise ValueError("not a symplectic similitude")
        return cls(R=r, alpha=mu)

    @property
    def symplectic_part(self) -> ZModMatrix:
        d = self.R.d
        n = self.R.ncols // 2
        return self.R @ invert(k_alpha(d, n, self.alpha))


@dataclass(frozen=True)
class AffineSimilitude:
    """The triple (a, S, alpha) acting as x -> S K_alpha x + a."""

    a: tuple
    S: ZModMatrix
    alpha: int

    def __post_init__(self):
        if not is_symplectic(self.S):
            raise ValueError("linear part must be symplectic")
        if self.alpha % self.d == 0:
            raise ValueError("multiplier must be a unit")

    @property
    def d(self):
        return self.S.d

    @property
    def n(self):
        return self.S.ncols // 2

    @property
    def matrix(self) -> ZModMatrix:
        return self.S @ k_alpha(self.d, self.n, self.alpha)

    @classmethod
    def identity(cls, d, n):
        return cls(a=(0,) * (2 * n), S=ZModMatrix.identity(2 * n, d), alpha=1)

    def apply(self, x):
        return vec_add(self.matrix.apply(x), self.a, self.d)

    def to_json(self):
        return {"a": list(self.a), "S": [list(r) for r in self.S.rows], "alpha": self.alpha}


def agsp_compose(t: AffineSimilitude, s: AffineSimilitude) -> AffineSimilitude:
    """(b, R, beta) . (a, S, alpha) = (R K_beta a + b, R K_beta S K_beta^{-1}, beta alpha)."""
    if t.d != s.d or t.n != s.n:
        raise ValueError("mismatched spaces")
    d, n = t.d, t.n
    kb = k_alpha(d, n, t.alpha)
    kb_inv = k_alpha(d, n, inv_mod(t.alpha, d))
    rkb = t.S @ kb
    new_a = vec_add(rkb.apply(s.a), t.a, d)
    new_s = rkb @ s.S @ kb_inv
    return AffineSimilitude(a=new_a, S=new_s, alpha=(t.alpha * s.alpha) % d)


# ---------------------------------------------------------------------------
# Galois-extended Clifford elements (single qudit)

@dataclass(frozen=True)
class ExtCliffordElement:
    """omega^mu T(a) U_S C_alpha for one qudit of odd prime dimension d."""

    mu: int
    a: tuple
    S: ZModMatrix
    alpha: int

    def __post_init__(self):
        if self.S.ncols != 2:
            raise ValueError("matrix-level extended Clifford layer is single-qudit")
        if not is_symplectic(self.S):
            raise ValueError("S must be symplectic")

    @property
    def d(self):
        return self.S.d

    @classmethod
    def identity(cls, d):
        return cls(mu=0, a=(0, 0), S=ZModMatrix.identity(2, d), alpha=1)

    def galois(self) -> GaloisMap:
        return GaloisMap(self.alpha % self.d, self.d)

    def matrix(self) -> OpMatrix:
        """The linear part omega^mu T(a) U_S as an exact matrix."""
        d = self.d
        u = weyl(d, 1, self.a) @ metaplectic(d, self.S)
        return u.scale(omega(d) ** (self.mu % d))

    def forget(self) -> AffineSimilitude:
        """The induced affine similitude (a, S, alpha) on phase space."""
        return AffineSimilitude(a=self.a, S=self.S, alpha=self.alpha % self.d)

    def to_json(self):
        return {
            "mu": self.mu % self.d,
            "a": list(self.a),
            "S": [list(r) for r in self.S.rows],
            "alpha": self.alpha % self.d,
        }


def ext_element_matrix(e: ExtCliffordElement):
    """The operator description of e: (linear-part matrix, Galois flag)."""
    return e.matrix(), e.galois()


def ext_apply(e: ExtCliffordElement, m: OpMatrix) -> OpMatrix:
    """Adjoint action rho -> (M C_alpha) rho (M C_alpha)^{-1} with M = e.matrix()."""
    gal = e.galois()
    u = e.matrix()
    return u @ m.entrywise_galois(gal) @ u.dagger()


def ext_compose(h: ExtCliffordElement, g: ExtCliffordElement) -> ExtCliffordElement:
    """hg = omega^{nu + beta mu - (1/2)[b, R K_beta a]} T(R K_beta a + b)
    U_{R K_beta S K_beta^{-1}} C_{beta alpha}."""
    if h.d != g.d:
        raise ValueError("mixed dimensions")
    d = h.d
    half = (d + 1) // 2
    kb = k_alpha(d, 1, h.alpha)
    kb_inv = k_alpha(d, 1, inv_mod(h.alpha, d))
    rkb = h.S @ kb
    rkb_a = rkb.apply(g.a)
    mu = (h.mu + h.alpha * g.mu - half * symplectic_form(h.a, rkb_a, d)) % d
    return ExtCliffordElement(
        mu=mu,
        a=vec_add(rkb_a, h.a, d),
        S=rkb @ g.S @ kb_inv,
        alpha=(h.alpha * g.alpha) % d,
    )


# ---------------------------------------------------------------------------
# Qubit gates, the real Clifford group and the rebit orbit

def _bit(q, i, n):
    return (q >> (n - 1 - i)) & 1


@lru_cache(maxsize=None)
def qubit_gate(n, name, i=0, j=1) -> OpMatrix:
    """H/S/Z/X/Y on qubit i, or CZ on qubits (i, j), of an n-qubit register."""
    m = conductor_for(2)
    dim = 2 ** n
    one, zero = CycNumber.one(m), CycNumber.zero(m)
    iu = iunit(2)
    if name == "CZ":
        rows = [[zero] * dim for _ in range(dim)]
        for q in range(dim):
            rows[q][q] = -one if _bit(q, i, n) and _bit(q, j, n) else one
        return OpMatrix(m, rows)
    if name == "H":
        r = sqrt_d(2).inverse()
        local = ((r, r), (r, -r))
    elif name == "S":
        local = ((one, zero), (zero, iu))
    elif name == "Z":
        local = ((one, zero), (zero, -one))
    elif name == "X":
        local = ((zero, one), (one, zero))
    elif name == "Y":
        local = ((zero, -iu), (iu, zero))
    else:
        raise ValueError(name)
    rows = [[zero] * dim for _ in range(dim)]
    for q in range(dim):
        for bi in (0, 1):
            val = local[bi][_bit(q, i, n)]
            if not val.is_zero():
                q2 = (q & ~(1 << (n - 1 - i))) | (bi << (n - 1 - i))
                rows[q2][q] = val
    return OpMatrix(m, rows)


def real_clifford_generators(n):
    """The (name, matrix) generator list Z_i, H_i, CZ_ij of the real Clifford group."""
    gens = []
    for i in range(n):
        gens.append((f"Z{i}", qubit_gate(n, "Z", i)))
        gens.append((f"H{i}", qubit_gate(n, "H", i)))
    for i in range(n):
        for j in range(i + 1, n):
            gens.append((f"CZ{i}{j}", qubit_gate(n, "CZ", i, j)))
    return gens


@dataclass(frozen=True)
class RealCliffordOrbit:
    """BFS closure of |0...0><0...0| under the real Clifford generators."""

    n: int
    projectors: tuple
    generator_names: tuple

    @property
    def size(self):
        return len(self.projectors)


@lru_cache(maxsize=None)
def real_clifford_orbit(n) -> RealCliffordOrbit:
    if n > 3:
        raise BudgetExceeded("rebit orbit supported for n <= 3")
    m = conductor_for(2)
    dim = 2 ** n
    zero, one = CycNumber.zero(m), CycNumber.one(m)
    rows = [[zero] * dim for _ in range(dim)]
    rows[0][0] = one
    start = OpMatrix(m, rows)
    gens = real_clifford_generators(n)
    seen = {start: None}
    queue = [start]
    while queue:
        p = queue.pop(0)
        for _, g in gens:
            q = g @ p @ g.dagger()
            if q not in seen:
                seen[q] = None
                queue.append(q)
    return RealCliffordOrbit(
        n=n, projectors=tuple(seen), generator_names=tuple(name for name, _ in gens)
    )


# ---------------------------------------------------------------------------
# Wreath coordinates of the standard single-qubit symmetry generators

_XYZ_VECTORS = {"X": (1, 0), "Y": (1, 1), "Z": (0, 1)}


def _single_qubit_states_xyz():
    """The 6 qubit states ordered as (basis, eigenvalue index): X+, X-, Y+, Y-, Z+, Z-."""
    from .operators import stab_projector_qubit
    from .phase_space import LagrangianSubspace

    out = []
    for basis in ("X", "Y", "Z"):
        L = LagrangianSubspace.from_rows([_XYZ_VECTORS[basis]], 2)
        for sign in (1, -1):
            out.append(((basis, 0 if sign == 1 else 1), stab_projector_qubit(L, (sign,))))
    return out


def wreath_decompose_table():
    """Induced wreath coordinates of the five standard generators at d=2, n=1.

    Each row reports the basis permutation sigma and, per source basis B, the
    within-basis map applied as B leaves: 'e' (identity) or 't' (transposition).
    """
    states = _single_qubit_states_xyz()
    index = {p: key for key, p in states}

    def decompose(transform):
        mapping = {key: index[transform(p)] for key, p in states}
        outer = {}
        inner = {}
        for basis in ("X", "Y", "Z"):
            img0, img1 = mapping[(basis, 0)], mapping[(basis, 1)]
            if img0[0] != img1[0]:
                raise AssertionError("basis partition broken")
            outer[basis] = img0[0]
            inner[basis] = "e" if (img0[1], img1[1]) == (0, 1) else "t"
        return {"outer": outer, "inner": inner}

    rows = {}
    rows["complex_conjugation"] = decompose(lambda p: p.transpose())
    for name in ("Y", "Z", "H", "S"):
        u = qubit_gate(1, name, 0)
        rows[f"conjugation_by_{name}"] = decompose(lambda p, u=u: u @ p @ u.dagger())
    return rows
