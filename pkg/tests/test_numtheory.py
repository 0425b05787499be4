"""Integer utility oracles."""

import math
import random

import pytest

from magtile.numtheory import (
    FactoredInteger,
    coprime_part,
    divisibility_screen,
    factorize,
    integer_kth_root,
    is_perfect_square,
    is_probable_prime,
    odd_part,
    partitions,
)
from tests.conftest import factor_with_sieve

# Partition numbers p(0)..p(40) (Euler's sequence).
PARTITION_NUMBERS = [
    1, 1, 2, 3, 5, 7, 11, 15, 22, 30, 42, 56, 77, 101, 135, 176, 231, 297,
    385, 490, 627, 792, 1002, 1255, 1575, 1958, 2436, 3010, 3718, 4565,
    5604, 6842, 8349, 10143, 12310, 14883, 17977, 21637, 26015, 31185, 37338,
]


def test_odd_part():
    assert odd_part(1432) == 179
    assert odd_part(512) == 1
    assert odd_part(45) == 45
    with pytest.raises(ValueError):
        odd_part(0)


def test_coprime_part_examples():
    assert coprime_part(352, 4) == 11
    assert coprime_part(512, 4) == 1
    assert coprime_part(45, 4) == 45
    assert coprime_part(8256, 6) == 43
    assert coprime_part(3486, 6) == 581


def test_coprime_part_oracle(spf_sieve):
    rng = random.Random(7)
    samples = list(range(1, 2000)) + [rng.randrange(1, 10**6) for _ in range(2000)]
    for n in samples:
        for b in (2, 4, 6, 12, 30):
            c = coprime_part(n, b)
            assert n % c == 0
            assert math.gcd(c, b) == 1
            for p in factor_with_sieve(spf_sieve, n // c):
                assert b % p == 0 or math.gcd(p, b) > 1


def test_divisibility_screen():
    assert divisibility_screen(2, 9)  # 8 | 56
    assert not divisibility_screen(2, 12)  # 8 does not divide 110
    assert divisibility_screen(3, 17)  # 12 | 240


def test_divisibility_screen_definition():
    for m in (2, 3, 5):
        for n in range(3, 40):
            assert divisibility_screen(m, n) == ((n * n - 3 * n + 2) % (4 * m) == 0)


def test_partitions():
    assert partitions(3) == [(3,), (2, 1), (1, 1, 1)]
    assert partitions(0) == [()]
    for k in range(41):
        parts = partitions(k)
        assert len(parts) == PARTITION_NUMBERS[k]
        for p in parts:
            assert sum(p) == k
            assert list(p) == sorted(p, reverse=True)


def test_integer_kth_root():
    assert integer_kth_root(2**27, 2) == 11585
    assert integer_kth_root(2**73, 7) == 1378
    for x in (0, 1, 7, 100, 10**12):
        for k in (1, 2, 3, 5):
            r = integer_kth_root(x, k)
            assert r**k <= x < (r + 1) ** k


def test_is_perfect_square():
    assert is_perfect_square(0) and is_perfect_square(32761)
    assert not is_perfect_square(2) and not is_perfect_square(-4)


def test_primality():
    primes = [2, 3, 5, 23, 109, 179, 319 // 11, 1213, 2**31 - 1]
    for p in primes:
        assert is_probable_prime(p), p
    for c in [1, 4, 319, 529, 1276, 2**31]:
        assert not is_probable_prime(c), c


def test_factorize(spf_sieve):
    rng = random.Random(11)
    for n in [1, 2, 529, 8256, 8667136] + [rng.randrange(1, 10**6) for _ in range(500)]:
        f = factorize(n)
        assert f.complete and f.check()
        if 1 < n <= 10**6:
            assert dict(f.factors) == factor_with_sieve(spf_sieve, n)


def test_factored_integer_flag():
    f = FactoredInteger(value=12, factors=[(2, 2), (3, 1)])
    assert f.complete and f.check()
    g = FactoredInteger(value=12, factors=[(2, 2)], cofactor=3)
    assert not g.complete and g.check()
