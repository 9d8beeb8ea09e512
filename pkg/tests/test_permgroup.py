import math
import random

from stabsym.permgroup import (
    PermGroup,
    compose,
    identity_perm,
    inverse,
    is_identity,
    schreier_sims,
)


def cycle(n, pts):
    p = list(range(n))
    for i, x in enumerate(pts):
        p[x] = pts[(i + 1) % len(pts)]
    return tuple(p)


def test_s4_order():
    gens = [cycle(4, (0, 1)), cycle(4, (0, 1, 2, 3))]
    assert schreier_sims(gens).order() == 24


def test_symmetric_group_orders():
    for n in (5, 8, 12):
        gens = [cycle(n, (0, 1)), cycle(n, tuple(range(n)))]
        assert schreier_sims(gens).order() == math.factorial(n)


def test_alternating_group():
    n = 7
    gens = [cycle(n, (0, 1, 2)), cycle(n, tuple(range(n)))]  # n odd: full cycle is even
    assert schreier_sims(gens).order() == math.factorial(n) // 2


def test_membership():
    n = 6
    gens = [cycle(n, (0, 1, 2)), cycle(n, (2, 3, 4, 5))]
    g = schreier_sims(gens)
    rng = random.Random(4)
    for _ in range(30):
        p = identity_perm(n)
        for _ in range(rng.randrange(1, 8)):
            p = compose(p, rng.choice(gens))
        assert g.contains(p)


def test_non_membership():
    n = 6
    g = schreier_sims([cycle(n, (0, 1, 2)), cycle(n, (3, 4, 5))])
    assert g.order() == 9
    assert not g.contains(cycle(n, (0, 3)))
    assert not g.contains(cycle(n, (0, 1)))


def test_direct_product_order():
    n = 7
    g = schreier_sims([cycle(n, (0, 1)), cycle(n, (3, 4, 5, 6))])
    # <(01)> x <(3456)> has order 2 * 4 = 8
    assert g.order() == 8
    assert not g.contains(cycle(n, (1, 2)))


def test_inverse_and_compose():
    rng = random.Random(1)
    n = 10
    p = list(range(n))
    rng.shuffle(p)
    p = tuple(p)
    assert is_identity(compose(p, inverse(p)))
    assert is_identity(compose(inverse(p), p))


def test_incremental_add_generator():
    n = 5
    g = PermGroup.from_generators([cycle(n, (0, 1))], degree=n)
    assert g.order() == 2
    g.add_generator(cycle(n, (0, 1, 2, 3, 4)))
    assert g.order() == 120


def test_serialization_fields():
    g = schreier_sims([cycle(4, (0, 1)), cycle(4, (0, 1, 2, 3))])
    blob = g.to_json()
    assert blob["degree"] == 4 and blob["order"] == "24"
    assert blob["base"] and blob["strong_generators"]
