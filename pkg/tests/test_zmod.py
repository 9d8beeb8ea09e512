import itertools
import random

import pytest

from stabsym.errors import SingularMatrix
from stabsym.zmod import ZMod, ZModMatrix, invert, legendre, rref


def test_composite_modulus_rejected():
    with pytest.raises(ValueError):
        ZMod(1, 4)
    with pytest.raises(ValueError):
        ZModMatrix([[1]], 6)


@pytest.mark.parametrize("d", [2, 3, 5, 7])
def test_field_axioms_exhaustive(d):
    elems = [ZMod(v, d) for v in range(d)]
    for a, b, c in itertools.product(elems, repeat=3):
        assert (a + b) + c == a + (b + c)
        assert (a * b) * c == a * (b * c)
        assert a * (b + c) == a * b + a * c
        assert a + b == b + a
        assert a * b == b * a
    zero, one = ZMod(0, d), ZMod(1, d)
    for a in elems:
        assert a + zero == a
        assert a * one == a
        assert a + (-a) == zero
        if a != zero:
            assert a * a.inverse() == one


def test_rref_identity_z3():
    m = ZModMatrix.identity(2, 3)
    r, pivots, rank = rref(m)
    assert r == m and pivots == (0, 1) and rank == 2


def test_rref_dependent_rows_z5():
    m = ZModMatrix([[1, 2], [2, 4]], 5)
    r, pivots, rank = rref(m)
    assert r.rows == ((1, 2), (0, 0))
    assert pivots == (0,) and rank == 1


def _oracle_rank(rows, d):
    """Independent elimination: forward elimination with an explicit inverse table."""
    inv = {a: next(b for b in range(1, d) if (a * b) % d == 1) for a in range(1, d)}
    rows = [list(r) for r in rows]
    rank = 0
    ncols = len(rows[0]) if rows else 0
    for c in range(ncols):
        piv = next((i for i in range(rank, len(rows)) if rows[i][c] % d), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        f = inv[rows[rank][c] % d]
        rows[rank] = [(f * x) % d for x in rows[rank]]
        for i in range(len(rows)):
            if i != rank and rows[i][c] % d:
                g = rows[i][c] % d
                rows[i] = [(x - g * y) % d for x, y in zip(rows[i], rows[rank])]
        rank += 1
    return rank


def test_rref_rank_matches_oracle_random_z3():
    rng = random.Random(11)
    for _ in range(50):
        rows = [[rng.randrange(3) for _ in range(4)] for _ in range(4)]
        m = ZModMatrix(rows, 3)
        _, _, rank = rref(m)
        assert rank == _oracle_rank(rows, 3)


def test_rref_idempotent_and_row_space_preserved():
    rng = random.Random(5)
    for _ in range(30):
        rows = [[rng.randrange(5) for _ in range(4)] for _ in range(3)]
        m = ZModMatrix(rows, 5)
        r, pivots, rank = rref(m)
        r2, pivots2, rank2 = rref(r)
        assert r2 == r and pivots2 == pivots and rank2 == rank
        # each original row reduces to zero against the echelon basis
        basis = [list(row) for row in r.rows[:rank]]
        for row in rows:
            v = [x % 5 for x in row]
            for brow, p in zip(basis, pivots):
                f = v[p]
                v = [(x - f * y) % 5 for x, y in zip(v, brow)]
            assert all(x == 0 for x in v)


def test_invert_identity_and_scalar():
    assert invert(ZModMatrix.identity(3, 5)) == ZModMatrix.identity(3, 5)
    assert invert(ZModMatrix([[2]], 5)).rows == ((3,),)


def test_invert_random_multiply_back_z3():
    rng = random.Random(17)
    found = 0
    while found < 20:
        rows = [[rng.randrange(3) for _ in range(4)] for _ in range(4)]
        m = ZModMatrix(rows, 3)
        try:
            mi = invert(m)
        except SingularMatrix:
            continue
        found += 1
        assert m @ mi == ZModMatrix.identity(4, 3)
        assert mi @ m == ZModMatrix.identity(4, 3)


def test_invert_singular_raises():
    with pytest.raises(SingularMatrix):
        invert(ZModMatrix([[1, 2], [2, 4]], 5))


def test_legendre_small_values():
    assert legendre(1, 3) == 1
    assert legendre(2, 3) == -1  # squares mod 3 are {0, 1}
    assert legendre(0, 5) == 0


def test_legendre_matches_square_table_z5():
    squares = {(x * x) % 5 for x in range(1, 5)}
    for a in range(5):
        expected = 0 if a == 0 else (1 if a in squares else -1)
        assert legendre(a, 5) == expected


@pytest.mark.parametrize("d", [3, 5, 7])
def test_legendre_multiplicative(d):
    for a in range(1, d):
        for b in range(1, d):
            assert legendre(a, d) * legendre(b, d) == legendre((a * b) % d, d)
