import random
from fractions import Fraction

import pytest

from stabsym.clifford import (
    AffineSimilitude,
    ExtCliffordElement,
    Similitude,
    agsp_compose,
    ext_apply,
    ext_compose,
    k_alpha,
    matrix_point_perm,
    metaplectic,
    metaplectic_word,
    qubit_gate,
    real_clifford_orbit,
    similitude_multiplier,
    sp_generators,
    sp_order,
    sp_order_formula,
    transvection,
    wreath_decompose_table,
    _metaplectic_table,
)
from stabsym.cyclotomic import CycNumber, GaloisMap, conductor_for, omega
from stabsym.errors import WordDecompositionFailure
from stabsym.operators import OpMatrix, phase_point, weyl
from stabsym.phase_space import all_vectors, vec_add
from stabsym.zmod import ZModMatrix, inv_mod


def _random_sl2(d, rng):
    table = list(_metaplectic_table(d))
    return ZModMatrix(rng.choice(table), d)


@pytest.mark.parametrize("d,n,order", [(3, 1, 24), (2, 2, 720), (3, 2, 51840)])
def test_sp_orders(d, n, order):
    assert sp_order_formula(d, n) == order
    assert sp_order(d, n) == order


def test_transvections_are_symplectic():
    for d, n in ((3, 2), (5, 1), (2, 2)):
        for v in list(all_vectors(d, 2 * n))[1:6]:
            assert similitude_multiplier(transvection(v, d)) == 1


def test_k_alpha_is_similitude():
    for d in (3, 5, 7):
        for alpha in range(1, d):
            assert similitude_multiplier(k_alpha(d, 1, alpha)) == alpha
    assert similitude_multiplier(k_alpha(5, 2, 3)) == 3


def test_similitude_factorization():
    d = 5
    rng = random.Random(0)
    for _ in range(10):
        s = _random_sl2(d, rng)
        alpha = rng.randrange(1, d)
        r = s @ k_alpha(d, 1, alpha)
        sim = Similitude.from_matrix(r)
        assert sim.alpha == alpha
        assert sim.symplectic_part @ k_alpha(d, 1, alpha) == r


def test_metaplectic_identity():
    for d in (3, 5):
        u = metaplectic(d, ZModMatrix.identity(2, d))
        assert u == OpMatrix.identity(conductor_for(d), d)
        assert metaplectic_word(d, ZModMatrix.identity(2, d)) == ()


def test_metaplectic_fourier_d3():
    d = 3
    s = ZModMatrix([[0, -1], [1, 0]], d)
    u = metaplectic(d, s)
    # U = (omega^{jk})/g with g the Gauss sum i*sqrt(3); verify action instead of phases
    for b in all_vectors(d, 2):
        assert u @ weyl(d, 1, b) @ u.dagger() == weyl(d, 1, s.apply(b))
    # matrix entries are omega^{jk} / (i sqrt 3) up to the canonical phase; check |entry|^2 = 1/3
    e = u.rows[0][0]
    assert (e.conj() * e) == CycNumber.from_fraction(conductor_for(3), Fraction(1, 3))


@pytest.mark.parametrize("d", [3, 5])
def test_metaplectic_conjugation_postcondition_all(d):
    rng = random.Random(d)
    table = list(_metaplectic_table(d))
    sample = table if d == 3 else rng.sample(table, 12)
    for rows in sample:
        s = ZModMatrix(rows, d)
        u = metaplectic(d, s)
        assert u.dagger() @ u == OpMatrix.identity(conductor_for(d), d)
        for b in all_vectors(d, 2):
            assert u @ weyl(d, 1, b) @ u.dagger() == weyl(d, 1, s.apply(b))


@pytest.mark.parametrize("d", [3, 5])
def test_metaplectic_multiplicative(d):
    rng = random.Random(41)
    for _ in range(50):
        s1, s2 = _random_sl2(d, rng), _random_sl2(d, rng)
        assert metaplectic(d, s1) @ metaplectic(d, s2) == metaplectic(d, s1 @ s2)


@pytest.mark.parametrize("d", [3, 5])
def test_metaplectic_galois_closure(d):
    rng = random.Random(17)
    for _ in range(20):
        s = _random_sl2(d, rng)
        for alpha in range(2, d):
            gal = GaloisMap(alpha, d)
            lhs = metaplectic(d, s).entrywise_galois(gal)
            conj = k_alpha(d, 1, alpha) @ s @ k_alpha(d, 1, inv_mod(alpha, d))
            assert lhs == metaplectic(d, conj)


def test_metaplectic_word_reconstructs():
    d = 3
    from stabsym.clifford import _fourier_matrix, _mult_matrix, _shear_matrix, primitive_root

    g = primitive_root(d)
    lookup = {"F": _fourier_matrix(d), f"M{g}": _mult_matrix(d, g), "D1": _shear_matrix(d, 1)}
    rng = random.Random(3)
    for _ in range(10):
        s = _random_sl2(d, rng)
        word = metaplectic_word(d, s)
        acc = OpMatrix.identity(conductor_for(d), d)
        for w in word:
            acc = acc @ lookup[w]
        assert acc == metaplectic(d, s)


def test_metaplectic_rejects_nonsymplectic():
    with pytest.raises(WordDecompositionFailure):
        metaplectic(3, ZModMatrix([[1, 1], [1, 1]], 3))


def test_transpose_realizes_k_minus_one_d3():
    # C T(aX, aZ) C^{-1} = T(aX, -aZ); conjugation by the antiunitary C acts
    # on matrices as entrywise complex conjugation
    d = 3
    for a in all_vectors(d, 2):
        assert weyl(d, 1, a).conj() == weyl(d, 1, (a[0], (-a[1]) % d))


def test_ext_identity_action():
    d = 3
    e = ExtCliffordElement.identity(d)
    x = phase_point(d, 1, (1, 2))
    assert ext_apply(e, x) == x


def test_galois_action_on_phase_points_exhaustive_d5():
    d = 5
    for alpha in range(2, d):
        e = ExtCliffordElement(mu=0, a=(0, 0), S=ZModMatrix.identity(2, d), alpha=alpha)
        ka = k_alpha(d, 1, alpha)
        for x in all_vectors(d, 2):
            assert ext_apply(e, phase_point(d, 1, x)) == phase_point(d, 1, ka.apply(x))


def test_clifford_affine_action_on_phase_points():
    # with the T(a)T(b) = tau^{-[a,b]} T(a+b) convention, conjugation by T(a)
    # shifts phase-space points by -a, so T(-a) U_S realizes A(b) -> A(Sb + a)
    d = 5
    rng = random.Random(9)
    for _ in range(5):
        a = tuple(rng.randrange(d) for _ in range(2))
        s = _random_sl2(d, rng)
        u = weyl(d, 1, tuple((-x) % d for x in a)) @ metaplectic(d, s)
        for x in list(all_vectors(d, 2))[:8]:
            got = u @ phase_point(d, 1, x) @ u.dagger()
            expected = phase_point(d, 1, vec_add(s.apply(x), a, d))
            assert got == expected


def test_ext_element_phase_space_action():
    # the quadruple (mu, a, S, alpha) acts on A(x) by x -> S K_alpha x - a
    d = 5
    rng = random.Random(29)
    for _ in range(5):
        e = _random_ext(d, rng)
        mat = e.S @ k_alpha(d, 1, e.alpha)
        for x in list(all_vectors(d, 2))[:6]:
            got = ext_apply(e, phase_point(d, 1, x))
            target = tuple((m - ai) % d for m, ai in zip(mat.apply(x), e.a))
            assert got == phase_point(d, 1, target)


def _random_ext(d, rng):
    return ExtCliffordElement(
        mu=rng.randrange(d),
        a=tuple(rng.randrange(d) for _ in range(2)),
        S=_random_sl2(d, rng),
        alpha=rng.randrange(1, d),
    )


def test_ext_compose_identity():
    d = 5
    rng = random.Random(2)
    e = _random_ext(d, rng)
    assert ext_compose(ExtCliffordElement.identity(d), e) == e


@pytest.mark.parametrize("d", [3, 5])
def test_ext_compose_matches_matrix_product(d):
    rng = random.Random(100 + d)
    for _ in range(60):
        g = _random_ext(d, rng)
        h = _random_ext(d, rng)
        hg = ext_compose(h, g)
        lhs = h.matrix() @ g.matrix().entrywise_galois(h.galois())
        assert lhs == hg.matrix()
        assert hg.alpha == (h.alpha * g.alpha) % d


def test_ext_compose_action_oracle_d3():
    d = 3
    rng = random.Random(5)
    for _ in range(25):
        g, h = _random_ext(d, rng), _random_ext(d, rng)
        hg = ext_compose(h, g)
        for x in list(all_vectors(d, 2))[:5]:
            sequential = ext_apply(h, ext_apply(g, phase_point(d, 1, x)))
            assert ext_apply(hg, phase_point(d, 1, x)) == sequential


def test_ext_compose_associative():
    d = 5
    rng = random.Random(8)
    for _ in range(50):
        a, b, c = (_random_ext(d, rng) for _ in range(3))
        assert ext_compose(ext_compose(a, b), c) == ext_compose(a, ext_compose(b, c))


def test_galois_conjugation_of_metaplectic_generators():
    # C_beta U_S C_beta^{-1} = U_{K_beta S K_beta^{-1}} as matrices
    d = 5
    rng = random.Random(4)
    for _ in range(10):
        s = _random_sl2(d, rng)
        for beta in range(2, d):
            gal = GaloisMap(beta, d)
            conj_s = k_alpha(d, 1, beta) @ s @ k_alpha(d, 1, inv_mod(beta, d))
            assert metaplectic(d, s).entrywise_galois(gal) == metaplectic(d, conj_s)


def test_apply_affine_similitude_api():
    from stabsym.phase_space import apply_affine_similitude

    d = 5
    ident = AffineSimilitude.identity(d, 1)
    assert apply_affine_similitude(ident, (3, 4)) == (3, 4)
    shift = AffineSimilitude(a=(1, 0), S=ZModMatrix.identity(2, d), alpha=1)
    assert apply_affine_similitude(shift, (3, 4)) == (4, 4)
    ka = AffineSimilitude(a=(0, 0), S=ZModMatrix.identity(2, d), alpha=2)
    assert apply_affine_similitude(ka, (1, 1)) == (1, 2)  # K_2 at d=5


def test_agsp_identity_and_pointwise():
    d = 5
    rng = random.Random(11)
    ident = AffineSimilitude.identity(d, 1)
    t = AffineSimilitude(
        a=(1, 2), S=_random_sl2(d, rng), alpha=3
    )
    assert agsp_compose(ident, t) == t
    s = AffineSimilitude(a=(0, 4), S=_random_sl2(d, rng), alpha=2)
    comp = agsp_compose(t, s)
    for x in all_vectors(d, 2):
        assert comp.apply(x) == t.apply(s.apply(x))


def test_agsp_compose_matches_ext_compose_forgetful():
    d = 5
    rng = random.Random(21)
    for _ in range(100):
        g, h = _random_ext(d, rng), _random_ext(d, rng)
        assert ext_compose(h, g).forget() == agsp_compose(h.forget(), g.forget())


def test_qubit_gates_unitary_and_hadamard():
    h = qubit_gate(1, "H", 0)
    assert h @ h == OpMatrix.identity(8, 2)
    s = qubit_gate(1, "S", 0)
    assert s @ s == qubit_gate(1, "Z", 0)
    cz = qubit_gate(2, "CZ", 0, 1)
    assert cz @ cz == OpMatrix.identity(8, 4)
    # H X H = Z
    x, z = qubit_gate(1, "X", 0), qubit_gate(1, "Z", 0)
    assert h @ x @ h.dagger() == z


def test_real_orbit_n1():
    orbit = real_clifford_orbit(1)
    assert orbit.size == 4
    half = Fraction(1, 2)
    plus = OpMatrix.from_rational(8, [[half, half], [half, half]])
    assert plus in orbit.projectors


def test_real_orbit_closure():
    from stabsym.clifford import real_clifford_generators

    for n in (1, 2):
        orbit = real_clifford_orbit(n)
        members = set(orbit.projectors)
        for _, g in real_clifford_generators(n):
            for p in orbit.projectors:
                assert g @ p @ g.dagger() in members


def test_real_orbit_n2_matches_rational_filter():
    # independent enumeration: qubit stabilizer projectors with all-rational entries
    from stabsym.operators import enumerate_qubit_states, stab_projector_qubit

    orbit = real_clifford_orbit(2)
    rational = []
    for st in enumerate_qubit_states(2):
        p = stab_projector_qubit(st.L, st.signs)
        if all(x.is_rational() for row in p.rows for x in row):
            rational.append(p)
    assert orbit.size == len(rational)
    assert set(orbit.projectors) == set(rational)


def test_wreath_table_of_standard_generators():
    table = wreath_decompose_table()
    eye = {"X": "X", "Y": "Y", "Z": "Z"}
    assert table["complex_conjugation"] == {
        "outer": eye, "inner": {"X": "e", "Y": "t", "Z": "e"}}
    assert table["conjugation_by_Y"] == {
        "outer": eye, "inner": {"X": "t", "Y": "e", "Z": "t"}}
    assert table["conjugation_by_Z"] == {
        "outer": eye, "inner": {"X": "t", "Y": "t", "Z": "e"}}
    assert table["conjugation_by_H"] == {
        "outer": {"X": "Z", "Y": "Y", "Z": "X"}, "inner": {"X": "e", "Y": "t", "Z": "e"}}
    assert table["conjugation_by_S"] == {
        "outer": {"X": "Y", "Y": "X", "Z": "Z"}, "inner": {"X": "e", "Y": "t", "Z": "e"}}
