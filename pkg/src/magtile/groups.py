"""Finite Abelian groups in primary decomposition (products of Z_{p^e}).

Elements are plain tuples of residues, one per cyclic factor, ordered to
match the group's canonical factor order. The canonical total order on
elements is lexicographic on coordinates, realized by a big-endian
mixed-radix encoding (first factor most significant).
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from functools import reduce
from itertools import product

from .numtheory import factorize, partitions

__all__ = [
    "AbelianGroup",
    "enumerate_groups",
    "parse_group_literal",
]

Element = tuple[int, ...]


@dataclass(frozen=True)
class AbelianGroup:
    """Product of cyclic groups of prime-power order, canonically sorted."""

    factors: tuple[tuple[int, int], ...]  # (prime, exponent), sorted

    def __post_init__(self) -> None:
        for p, e in self.factors:
            if e < 1 or p < 2:
                raise ValueError(f"bad factor ({p}, {e})")
        if tuple(sorted(self.factors)) != self.factors:
            raise ValueError("factors must be in canonical (p, e) order")

    # -- structure ---------------------------------------------------------

    @property
    def factor_orders(self) -> tuple[int, ...]:
        return tuple(p**e for p, e in self.factors)

    @property
    def order(self) -> int:
        return math.prod(self.factor_orders)

    @property
    def exponent(self) -> int:
        return reduce(math.lcm, self.factor_orders, 1)

    @property
    def rank(self) -> int:
        return len(self.factors)

    def d(self, l: int) -> int:
        """Multiplicity of the cyclic factor Z_l in the primary decomposition."""
        return sum(1 for q in self.factor_orders if q == l)

    @classmethod
    def from_factor_orders(cls, orders: list[int] | tuple[int, ...]) -> "AbelianGroup":
        """Build from cyclic factor orders, each a prime power (canonicalized)."""
        factors = []
        for q in orders:
            f = factorize(q)
            if not f.complete or len(f.factors) != 1:
                raise ValueError(f"factor order {q} is not a prime power")
            factors.append(f.factors[0])
        return cls(factors=tuple(sorted(factors)))

    @classmethod
    def cyclic(cls, n: int) -> "AbelianGroup":
        """Z_n, decomposed into its primary factors."""
        f = factorize(n)
        if not f.complete:
            raise ValueError(f"could not fully factor {n}")
        return cls(factors=tuple(sorted(f.factors)))

    # -- elements ----------------------------------------------------------

    def identity(self) -> Element:
        return (0,) * self.rank

    def check_element(self, a: Element) -> None:
        if len(a) != self.rank:
            raise ValueError(f"element {a} does not belong to {self}")
        for c, q in zip(a, self.factor_orders):
            if not (0 <= c < q):
                raise ValueError(f"element {a} does not belong to {self}")

    def add(self, a: Element, b: Element) -> Element:
        self.check_element(a)
        self.check_element(b)
        return tuple((x + y) % q for x, y, q in zip(a, b, self.factor_orders))

    def neg(self, a: Element) -> Element:
        self.check_element(a)
        return tuple((-x) % q for x, q in zip(a, self.factor_orders))

    def scalar_mul(self, k: int, a: Element) -> Element:
        self.check_element(a)
        return tuple((k * x) % q for x, q in zip(a, self.factor_orders))

    def element_order(self, a: Element) -> int:
        """Least positive k with k*a = 0; divides exponent(G)."""
        self.check_element(a)
        return reduce(
            math.lcm,
            (q // math.gcd(q, x) for x, q in zip(a, self.factor_orders)),
            1,
        )

    def elements(self):
        """All elements in the canonical lexicographic order."""
        return product(*(range(q) for q in self.factor_orders))

    # -- flat encoding (canonical total order) ------------------------------

    @property
    def strides(self) -> tuple[int, ...]:
        out = []
        s = 1
        for q in reversed(self.factor_orders):
            out.append(s)
            s *= q
        return tuple(reversed(out))

    def encode(self, a: Element) -> int:
        idx = 0
        for c, q in zip(a, self.factor_orders):
            idx = idx * q + c
        return idx

    def decode(self, idx: int) -> Element:
        coords = []
        for q in reversed(self.factor_orders):
            coords.append(idx % q)
            idx //= q
        return tuple(reversed(coords))

    # -- order census --------------------------------------------------------

    def count_order_dividing(self, l: int) -> int:
        """|{g : l*g = 0}| = prod gcd(l, p^e)."""
        if l < 1:
            raise ValueError(f"need l >= 1, got {l}")
        return math.prod(math.gcd(l, q) for q in self.factor_orders)

    def count_order(self, l: int) -> int:
        """m_l(G) = |{g : ord(g) = l}| by Moebius inversion over divisors of l."""
        if l < 1:
            raise ValueError(f"need l >= 1, got {l}")
        if l == 1:
            return 1
        f = factorize(l)
        if not f.complete:
            raise ValueError(f"could not fully factor order {l}")
        total = 0
        # Sum over squarefree quotients: mu(l/d) nonzero iff l/d squarefree.
        primes = [p for p, _ in f.factors]
        for mask in range(1 << len(primes)):
            sq = 1
            bits = 0
            for i, p in enumerate(primes):
                if mask >> i & 1:
                    sq *= p
                    bits += 1
            if l % sq:
                continue
            total += (-1) ** bits * self.count_order_dividing(l // sq)
        return total

    def order_census(self) -> dict[int, int]:
        """m_l for every l dividing exp(G) with at least one element."""
        exp = self.exponent
        divs = [d for d in range(1, exp + 1) if exp % d == 0]
        census = {d: self.count_order(d) for d in divs}
        return {d: c for d, c in census.items() if c}

    # -- literals ------------------------------------------------------------

    @property
    def literal(self) -> str:
        return "x".join(f"Z{q}" for q in self.factor_orders) if self.factors else "Z1"

    def __str__(self) -> str:
        return self.literal


def parse_group_literal(text: str) -> AbelianGroup:
    """Parse 'Z4xZ2xZ9' (case-insensitive, any factor order) to canonical form."""
    group, _ = parse_group_literal_ordered(text)
    return group


def parse_group_literal_ordered(text: str) -> tuple[AbelianGroup, tuple[int, ...]]:
    """Parse a literal, also returning perm with perm[i] = canonical position
    of the literal's i-th factor (needed to permute element coordinates)."""
    s = text.strip().replace(" ", "")
    if not s:
        raise ValueError("empty group literal")
    parts = re.split("x", s, flags=re.IGNORECASE)
    orders = []
    for part in parts:
        mobj = re.fullmatch(r"[Zz](\d+)", part)
        if not mobj:
            raise ValueError(f"bad group literal component {part!r} in {text!r}")
        orders.append(int(mobj.group(1)))
    if orders == [1]:
        return AbelianGroup(factors=()), (0,)
    factors = []
    for q in orders:
        f = factorize(q)
        if not f.complete or len(f.factors) != 1 or q == 1:
            raise ValueError(f"group literal factor Z{q} is not a prime power > 1")
        factors.append(f.factors[0])
    ranked = sorted(range(len(factors)), key=lambda i: (factors[i], i))
    perm = [0] * len(factors)
    for pos, i in enumerate(ranked):
        perm[i] = pos
    group = AbelianGroup(factors=tuple(factors[i] for i in ranked))
    return group, tuple(perm)


def enumerate_groups(order: int) -> list[AbelianGroup]:
    """One group per isomorphism class of the given order, deterministic order.

    Classes come from choosing a partition of each prime's exponent; the list
    is ordered by prime (ascending) and partition (lexicographically
    descending, as produced by partitions()).
    """
    if order < 1:
        raise ValueError(f"need order >= 1, got {order}")
    if order == 1:
        return [AbelianGroup(factors=())]
    f = factorize(order)
    if not f.complete:
        raise ValueError(f"could not fully factor {order}")
    per_prime: list[list[tuple[tuple[int, int], ...]]] = []
    for p, e in f.factors:
        per_prime.append([tuple((p, part) for part in parts) for parts in partitions(e)])
    out = []
    for combo in product(*per_prime):
        factors = tuple(sorted(f for block in combo for f in block))
        out.append(AbelianGroup(factors=factors))
    return out
