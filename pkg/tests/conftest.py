"""Shared test oracles, deliberately independent of the library internals."""

from itertools import combinations, product

import pytest


def brute_force_values(factor_orders, mags, t, elements):
    """Every weight-1..t combination value, with multiplicity, computed with
    plain modular arithmetic (no group machinery)."""
    n = len(elements)
    out = []
    for w in range(1, t + 1):
        for support in combinations(range(n), w):
            for coeffs in product(mags, repeat=w):
                v = [0] * len(factor_orders)
                for pos, a in zip(support, coeffs):
                    for j, q in enumerate(factor_orders):
                        v[j] = (v[j] + a * elements[pos][j]) % q
                out.append(tuple(v))
    return out


def brute_force_partial(factor_orders, mags, t, elements) -> bool:
    vals = brute_force_values(factor_orders, mags, t, elements)
    zero = (0,) * len(factor_orders)
    return zero not in vals and len(set(vals)) == len(vals)


def brute_force_complete(factor_orders, mags, t, elements) -> bool:
    vals = set(brute_force_values(factor_orders, mags, t, elements))
    vals.add((0,) * len(factor_orders))
    order = 1
    for q in factor_orders:
        order *= q
    return len(vals) == order


def brute_force_search_all(group, mags, t, n):
    """All splitter sets (ascending encoded tuples) by exhaustive subset scan."""
    values = mags.values()
    out = []
    for combo in combinations(range(1, group.order), n):
        elements = [group.decode(g) for g in combo]
        if brute_force_partial(group.factor_orders, values, t, elements):
            out.append(combo)
    return out


@pytest.fixture(scope="session")
def spf_sieve():
    """Smallest-prime-factor sieve up to 10^6 (the factorization oracle)."""
    limit = 10**6
    spf = list(range(limit + 1))
    i = 2
    while i * i <= limit:
        if spf[i] == i:
            for j in range(i * i, limit + 1, i):
                if spf[j] == j:
                    spf[j] = i
        i += 1
    return spf


def factor_with_sieve(spf, n):
    out = {}
    while n > 1:
        p = spf[n]
        out[p] = out.get(p, 0) + 1
        n //= p
    return out
