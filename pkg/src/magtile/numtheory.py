"""Shared integer utilities: gcd stripping, partitions, primality, factorization.

Everything the screening pipeline needs is factorization-free (iterated gcd);
Pollard rho is provided for group enumeration and report prettiness only.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

__all__ = [
    "odd_part",
    "coprime_part",
    "divisibility_screen",
    "partitions",
    "integer_kth_root",
    "is_perfect_square",
    "is_probable_prime",
    "factorize",
    "FactoredInteger",
]


def odd_part(n: int) -> int:
    """Largest odd divisor of n (n >= 1)."""
    if n < 1:
        raise ValueError(f"odd_part needs n >= 1, got {n}")
    while n % 2 == 0:
        n //= 2
    return n


def coprime_part(n: int, b: int) -> int:
    """Largest divisor of n coprime to b, by iterated gcd stripping.

    No factorization is performed: every prime shared between n and b shows
    up in gcd(n, b), and stripping loops until nothing shared remains.
    """
    if n < 1 or b < 1:
        raise ValueError(f"coprime_part needs n, b >= 1, got {n}, {b}")
    g = math.gcd(n, b)
    while g > 1:
        n //= g
        g = math.gcd(n, g)
    return n


def divisibility_screen(m: int, n: int) -> bool:
    """Whether 4m divides n^2 - 3n + 2."""
    if m < 1:
        raise ValueError(f"divisibility_screen needs m >= 1, got {m}")
    return (n * n - 3 * n + 2) % (4 * m) == 0


def partitions(k: int) -> list[tuple[int, ...]]:
    """All partitions of k, each in descending order, lexicographically
    descending overall ([(k,), ..., (1,)*k])."""
    if k < 0:
        raise ValueError(f"partitions needs k >= 0, got {k}")
    if k == 0:
        return [()]
    out: list[tuple[int, ...]] = []

    def rec(remaining: int, largest: int, prefix: tuple[int, ...]) -> None:
        if remaining == 0:
            out.append(prefix)
            return
        for part in range(min(largest, remaining), 0, -1):
            rec(remaining - part, part, prefix + (part,))

    rec(k, k, ())
    return out


def integer_kth_root(x: int, k: int) -> int:
    """floor(x ** (1/k)) for x >= 0, k >= 1, exact integer arithmetic."""
    if x < 0 or k < 1:
        raise ValueError(f"integer_kth_root needs x >= 0, k >= 1, got {x}, {k}")
    if x in (0, 1) or k == 1:
        return x
    if k == 2:
        return math.isqrt(x)
    r = int(round(x ** (1.0 / k)))
    while r > 0 and r**k > x:
        r -= 1
    while (r + 1) ** k <= x:
        r += 1
    return r


def is_perfect_square(x: int) -> bool:
    if x < 0:
        return False
    r = math.isqrt(x)
    return r * r == x


# Deterministic Miller-Rabin witness set for n < 3.3 * 10**24.
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
_MR_DETERMINISTIC_LIMIT = 3317044064679887385961981


def is_probable_prime(n: int) -> bool:
    """Miller-Rabin; deterministic below 3.3e24, overwhelming beyond."""
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    d = n - 1
    s = 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


@dataclass
class FactoredInteger:
    """Prime-power factorization, possibly partial for large inputs.

    value == cofactor * prod(p**e); complete is True iff cofactor == 1.
    """

    value: int
    factors: list[tuple[int, int]] = field(default_factory=list)
    cofactor: int = 1

    @property
    def complete(self) -> bool:
        return self.cofactor == 1

    def check(self) -> bool:
        prod = self.cofactor
        for p, e in self.factors:
            prod *= p**e
        return prod == self.value


def _pollard_rho(n: int) -> int:
    """One nontrivial factor of composite odd n (Brent's cycle variant)."""
    if n % 2 == 0:
        return 2
    for c in range(1, 64):
        x = y = 2
        d = 1
        while d == 1:
            x = (x * x + c) % n
            y = (y * y + c) % n
            y = (y * y + c) % n
            d = math.gcd(abs(x - y), n)
        if d != n:
            return d
    raise ArithmeticError(f"pollard rho failed on {n}")


def factorize(n: int, *, trial_limit: int = 10_000, rho_digits: int = 30) -> FactoredInteger:
    """Factor n; factors beyond ~rho_digits digits are left in the cofactor.

    Screening code never relies on completeness; group enumeration does and
    raises if the factorization comes back partial.
    """
    if n < 1:
        raise ValueError(f"factorize needs n >= 1, got {n}")
    result = FactoredInteger(value=n)
    counts: dict[int, int] = {}
    rest = n
    p = 2
    while p * p <= rest and p <= trial_limit:
        while rest % p == 0:
            counts[p] = counts.get(p, 0) + 1
            rest //= p
        p += 1 if p == 2 else 2

    stack = [rest] if rest > 1 else []
    while stack:
        v = stack.pop()
        if v == 1:
            continue
        if is_probable_prime(v):
            counts[v] = counts.get(v, 0) + 1
            continue
        if len(str(v)) > rho_digits:
            result.cofactor *= v
            continue
        d = _pollard_rho(v)
        stack.append(d)
        stack.append(v // d)

    result.factors = sorted(counts.items())
    return result
