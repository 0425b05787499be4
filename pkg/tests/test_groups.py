"""Finite Abelian group arithmetic, order census, and enumeration."""

import math
import random

import pytest

from magtile.groups import AbelianGroup, enumerate_groups, parse_group_literal
from magtile.numtheory import partitions


def crt(group, value):
    """Cyclic residue -> canonical coordinates (for cyclic-group examples)."""
    return tuple(value % q for q in group.factor_orders)


def test_add_neg_scalar_examples():
    Z7 = AbelianGroup.cyclic(7)
    assert Z7.add((3,), (5,)) == (1,)
    G = AbelianGroup.from_factor_orders([2, 4])
    assert G.scalar_mul(2, (1, 1)) == (0, 2)
    Z6 = AbelianGroup.cyclic(6)
    assert Z6.neg(crt(Z6, 4)) == crt(Z6, 2)
    assert Z7.scalar_mul(0, (3,)) == (0,)


def test_membership_errors():
    G = AbelianGroup.from_factor_orders([2, 4])
    with pytest.raises(ValueError):
        G.add((1,), (0, 1))
    with pytest.raises(ValueError):
        G.add((0, 4), (0, 0))


def test_element_order_examples():
    Z12 = AbelianGroup.cyclic(12)
    assert Z12.element_order(crt(Z12, 8)) == 3
    G = AbelianGroup.from_factor_orders([2, 4])
    assert G.element_order((1, 2)) == 2
    assert G.element_order(G.identity()) == 1


def test_element_order_brute():
    rng = random.Random(3)
    for _ in range(50):
        G = rng.choice(enumerate_groups(rng.randrange(2, 200)))
        g = G.decode(rng.randrange(G.order))
        k = G.element_order(g)
        assert G.scalar_mul(k, g) == G.identity()
        assert all(G.scalar_mul(d, g) != G.identity() for d in range(1, k))
        assert G.exponent % k == 0


def test_count_order_examples():
    assert AbelianGroup.from_factor_orders([2, 4]).count_order(2) == 3
    assert AbelianGroup.cyclic(9).count_order(3) == 2
    assert AbelianGroup.cyclic(7).count_order(2) == 0


def test_count_order_vs_census():
    rng = random.Random(5)
    orders = [8, 12, 16, 36, 100, 128] + [rng.randrange(2, 2000) for _ in range(20)]
    for N in orders:
        for G in enumerate_groups(N):
            census: dict[int, int] = {}
            for g in G.elements():
                k = G.element_order(g)
                census[k] = census.get(k, 0) + 1
            exp = G.exponent
            for l in range(1, exp + 1):
                if exp % l == 0:
                    assert G.count_order(l) == census.get(l, 0), (G.literal, l)
            assert sum(census.values()) == G.order


def test_order_partition():
    for N in (16, 60, 360):
        for G in enumerate_groups(N):
            exp = G.exponent
            total = sum(G.count_order(l) for l in range(1, exp + 1) if exp % l == 0)
            assert total == G.order


def test_m2_closed_form():
    rng = random.Random(9)
    checked = 0
    while checked < 200:
        N = rng.randrange(2, 2**16)
        gs = enumerate_groups(N)
        G = rng.choice(gs)
        s = sum(G.d(2**i) for i in range(1, 17))
        assert G.count_order(2) == 2**s - 1
        checked += 1


def test_enumerate_groups_examples():
    assert [g.literal for g in enumerate_groups(4)] == ["Z4", "Z2xZ2"]
    assert [g.literal for g in enumerate_groups(529)] == ["Z529", "Z23xZ23"]
    assert [g.literal for g in enumerate_groups(12)] == ["Z4xZ3", "Z2xZ2xZ3"]
    assert [g.literal for g in enumerate_groups(1)] == ["Z1"]


def test_enumerate_groups_counts():
    rng = random.Random(1)
    cases = [16, 64, 144, 1024, 2**6 * 3**4] + [rng.randrange(2, 10**6) for _ in range(200)]
    for N in cases:
        gs = enumerate_groups(N)
        expected = 1
        rest = N
        p = 2
        while p * p <= rest:
            e = 0
            while rest % p == 0:
                rest //= p
                e += 1
            if e:
                expected *= len(partitions(e))
            p += 1
        if rest > 1:
            expected *= 1  # single prime, p(1) = 1
        assert len(gs) == expected, N
        assert len({g.factors for g in gs}) == len(gs)
        for g in gs:
            assert g.order == N


def test_literals():
    g = parse_group_literal("Z4xZ2xZ9")
    assert g.literal == "Z2xZ4xZ9"
    assert parse_group_literal("z2Xz4xZ9") == g
    assert parse_group_literal("Z9xZ4xZ2") == g
    with pytest.raises(ValueError):
        parse_group_literal("Z6")  # not a prime power
    with pytest.raises(ValueError):
        parse_group_literal("Q8")


def test_encode_decode_lexicographic():
    G = AbelianGroup.from_factor_orders([3, 4])
    elems = list(G.elements())
    assert elems == sorted(elems)
    for idx, e in enumerate(elems):
        assert G.encode(e) == idx
        assert G.decode(idx) == e


def test_exponent_and_d():
    G = AbelianGroup.from_factor_orders([2, 4, 4, 3])
    assert G.exponent == 12
    assert G.d(4) == 2 and G.d(2) == 1 and G.d(3) == 1 and G.d(8) == 0
