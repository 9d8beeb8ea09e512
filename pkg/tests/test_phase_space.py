import itertools
import random

import pytest

from stabsym.errors import BudgetExceeded
from stabsym.phase_space import (
    AffineSubspace,
    LagrangianSubspace,
    StabilizerLabel,
    Subspace,
    all_vectors,
    coset_reps,
    enumerate_lagrangians,
    enumerate_stabilizer_labels,
    enumerate_subspaces,
    intersect,
    label_from_functional,
    subspace_intersection,
    symplectic_form,
    transform_label,
    vec_add,
)
from stabsym.zmod import ZModMatrix


def test_symplectic_canonical_pair():
    assert symplectic_form((1, 0), (0, 1), 3) == 1


def test_symplectic_antisymmetry():
    for d in (2, 3, 5):
        for a in all_vectors(d, 2):
            assert symplectic_form(a, a, d) == 0


def test_symplectic_matches_componentwise_oracle():
    rng = random.Random(3)
    d, n = 5, 2
    for _ in range(100):
        a = tuple(rng.randrange(d) for _ in range(4))
        b = tuple(rng.randrange(d) for _ in range(4))
        oracle = (sum(a[i] * b[n + i] for i in range(n)) - sum(b[i] * a[n + i] for i in range(n))) % d
        assert symplectic_form(a, b, d) == oracle


def _brute_force_lagrangians(d, n):
    """Oracle: span all n-tuples of vectors, keep isotropic n-dim spans, dedupe."""
    seen = set()
    vectors = list(all_vectors(d, 2 * n))
    for combo in itertools.combinations(vectors[1:], n):
        sub = Subspace.from_rows(list(combo), d)
        if sub.dim != n:
            continue
        if any(symplectic_form(u, v, d) for u in combo for v in combo):
            continue
        seen.add(sub.basis)
    return seen


@pytest.mark.parametrize("d,n,count", [(2, 1, 3), (3, 1, 4), (5, 1, 6), (2, 2, 15), (3, 2, 40)])
def test_lagrangian_counts_vs_bruteforce(d, n, count):
    lags = enumerate_lagrangians(d, n)
    assert len(lags) == count
    expected = 1
    for k in range(1, n + 1):
        expected *= d ** k + 1
    assert len(lags) == expected
    assert {L.basis for L in lags} == _brute_force_lagrangians(d, n)


def test_lagrangians_sorted_and_unique():
    lags = enumerate_lagrangians(3, 2)
    bases = [L.basis for L in lags]
    assert bases == sorted(bases)
    assert len(set(bases)) == len(bases)


def test_lagrangians_maximal():
    d, n = 3, 2
    for L in enumerate_lagrangians(d, n):
        pts = set(L.points())
        for v in all_vectors(d, 2 * n):
            if v in pts:
                continue
            assert any(symplectic_form(v, u, d) for u in L.basis)


@pytest.mark.parametrize("d,n,count", [(2, 1, 6), (3, 1, 12), (5, 1, 30), (2, 2, 60), (3, 2, 360)])
def test_stabilizer_label_counts(d, n, count):
    labels = enumerate_stabilizer_labels(d, n)
    assert len(labels) == count
    assert len(labels) == d ** n * len(enumerate_lagrangians(d, n))


def test_cosets_partition_phase_space():
    d, n = 3, 2
    for L in enumerate_lagrangians(d, n)[:5]:
        seen = set()
        for rep in coset_reps(L):
            pts = set(AffineSubspace.make(L, rep).points())
            assert not (pts & seen)
            seen |= pts
        assert len(seen) == d ** (2 * n)


def test_budget_exceeded():
    with pytest.raises(BudgetExceeded):
        enumerate_lagrangians(5, 3)


def test_subspace_enumeration_count_gaussian():
    # number of 2-dim subspaces of Z_3^4 is the Gaussian binomial [4 2]_3 = 130
    assert len(enumerate_subspaces(3, 4, 2)) == 130


def test_affine_intersection_identity_and_parallel():
    d = 3
    L = Subspace.from_rows([(1, 0)], d)
    a = AffineSubspace.make(L, (0, 1))
    assert intersect(a, a) == a
    b = AffineSubspace.make(L, (0, 2))
    assert intersect(a, b) is None


def test_affine_intersection_matches_pointwise_oracle():
    d, n = 3, 2
    lags = enumerate_lagrangians(d, n)
    rng = random.Random(20)
    for _ in range(60):
        L, M = rng.choice(lags), rng.choice(lags)
        a = AffineSubspace.make(L, tuple(rng.randrange(d) for _ in range(4)))
        b = AffineSubspace.make(M, tuple(rng.randrange(d) for _ in range(4)))
        got = intersect(a, b)
        expected = set(a.points()) & set(b.points())
        if got is None:
            assert expected == set()
        else:
            assert set(got.points()) == expected


def test_canonical_rep_is_lex_smallest():
    d, n = 3, 2
    rng = random.Random(8)
    for L in enumerate_lagrangians(d, n)[:10]:
        v = tuple(rng.randrange(d) for _ in range(4))
        aff = AffineSubspace.make(L, v)
        assert aff.rep == min(aff.points())


def test_label_from_functional_zero():
    d = 3
    L = enumerate_lagrangians(d, 1)[0]
    lab = label_from_functional(L, [0])
    assert lab.rep == L.reduce((0, 0))
    assert L.contains(lab.rep) or lab.rep == (0, 0)


def test_label_from_functional_simple():
    d = 3
    L = LagrangianSubspace.from_rows([(1, 0)], d)
    lab = label_from_functional(L, [1])
    assert symplectic_form(lab.rep, (1, 0), d) == 1


def test_label_from_functional_roundtrip():
    d, n = 3, 2
    rng = random.Random(14)
    lags = enumerate_lagrangians(d, n)
    for _ in range(100):
        L = rng.choice(lags)
        values = [rng.randrange(d) for _ in range(n)]
        lab = label_from_functional(L, values)
        for b, v in zip(L.basis, values):
            assert symplectic_form(lab.rep, b, d) == v


def test_subspace_intersection_dim():
    d = 3
    A = Subspace.from_rows([(1, 0, 0, 0), (0, 1, 0, 0)], d)
    B = Subspace.from_rows([(0, 1, 0, 0), (0, 0, 1, 0)], d)
    got = subspace_intersection(A, B)
    assert got.dim == 1 and got.contains((0, 1, 0, 0))


def test_transform_label_bijection_and_lagrangian_images():
    # a similitude-like map must permute phase space and send cosets to cosets
    d, n = 3, 2
    R = ZModMatrix([[1, 0, 1, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]], d)  # shear-type
    a = (1, 2, 0, 1)
    images = {vec_add(R.apply(x), a, d) for x in all_vectors(d, 4)}
    assert len(images) == d ** 4
    labels = enumerate_stabilizer_labels(d, n)
    mapped = {transform_label(lab, R, a) for lab in labels}
    assert len(mapped) == len(labels)
    for lab in list(labels)[:20]:
        out = transform_label(lab, R, a)
        assert set(out.coset().points()) == {vec_add(R.apply(x), a, d) for x in lab.coset().points()}


def test_similitude_action_bijective_and_coset_preserving_32():
    # a genuine similitude (multiplier -1) composed with a translation:
    # bijection on all 81 points and Lagrangian cosets map to Lagrangian cosets
    from stabsym.clifford import AffineSimilitude, sp_generators

    d, n = 3, 2
    s = sp_generators(d, n)[3]
    t = AffineSimilitude(a=(2, 0, 1, 1), S=s, alpha=2)
    from stabsym.phase_space import apply_affine_similitude

    images = {apply_affine_similitude(t, x) for x in all_vectors(d, 2 * n)}
    assert len(images) == d ** (2 * n)
    for lab in enumerate_stabilizer_labels(d, n):
        out = transform_label(lab, t.matrix, t.a)
        assert set(out.coset().points()) == {
            apply_affine_similitude(t, x) for x in lab.coset().points()
        }


def test_subspace_json_roundtrip():
    L = enumerate_lagrangians(3, 2)[7]
    assert Subspace.from_json(L.to_json()).basis == L.basis
