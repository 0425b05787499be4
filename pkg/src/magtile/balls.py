"""Limited-magnitude error balls and the pair-sum counting function tau.

A ball B(n, t, k+, k-) is the set of integer vectors with at most t nonzero
entries, each in [-k-, k+]. The magnitude set M = [-k-, k+] \\ {0} is the
coefficient alphabet of the splitting machinery.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, product
from math import comb

__all__ = [
    "MagnitudeSet",
    "ErrorBall",
    "ball_size",
    "ball_enumerate",
    "tau",
    "tau_identities",
    "DEFAULT_ENUM_CAP",
]

DEFAULT_ENUM_CAP = 10**6


@dataclass(frozen=True)
class MagnitudeSet:
    """M = [-kminus, kplus] without 0; kplus >= kminus >= 0, kplus >= 1."""

    kplus: int
    kminus: int

    def __post_init__(self) -> None:
        if self.kminus < 0 or self.kplus < self.kminus:
            raise ValueError(f"need kplus >= kminus >= 0, got {self.kplus}, {self.kminus}")
        if self.kplus < 1:
            raise ValueError("magnitude set is empty (kplus < 1)")

    def values(self) -> tuple[int, ...]:
        """Ascending: -kminus..-1, 1..kplus."""
        return tuple(range(-self.kminus, 0)) + tuple(range(1, self.kplus + 1))

    def __len__(self) -> int:
        return self.kplus + self.kminus

    @property
    def m(self) -> int | None:
        """m when this is the contiguous family M = [-(m-1), m], else None."""
        return self.kplus if self.kplus == self.kminus + 1 else None

    def __str__(self) -> str:
        return f"-{self.kminus}..{self.kplus}"

    @classmethod
    def parse(cls, text: str) -> "MagnitudeSet":
        """Parse '-km..kp' (as printed by str)."""
        s = text.strip()
        if s.startswith("M="):
            s = s[2:]
        if not s.startswith("-") or ".." not in s:
            raise ValueError(f"bad magnitude syntax: {text!r}")
        lo, hi = s[1:].split("..", 1)
        return cls(kplus=int(hi), kminus=int(lo))


@dataclass(frozen=True)
class ErrorBall:
    """Descriptor of B(n, t, kplus, kminus)."""

    n: int
    t: int
    kplus: int
    kminus: int

    def __post_init__(self) -> None:
        if not (self.n >= self.t >= 1):
            raise ValueError(f"need n >= t >= 1, got n={self.n}, t={self.t}")
        if self.kminus < 0 or self.kplus < self.kminus:
            raise ValueError(f"need kplus >= kminus >= 0, got {self.kplus}, {self.kminus}")
        if self.kplus < 1:
            raise ValueError("need kplus >= 1")

    @property
    def magnitudes(self) -> MagnitudeSet:
        return MagnitudeSet(kplus=self.kplus, kminus=self.kminus)

    @property
    def m(self) -> int | None:
        """m for the family kplus = kminus + 1, else None."""
        return self.kplus if self.kplus == self.kminus + 1 else None

    def __str__(self) -> str:
        return f"{self.n},{self.t},{self.kplus},{self.kminus}"

    @classmethod
    def parse(cls, text: str) -> "ErrorBall":
        """Parse 'n,t,k+,k-'."""
        parts = [int(p) for p in text.split(",")]
        if len(parts) != 4:
            raise ValueError(f"ball descriptor needs 4 fields n,t,k+,k-: {text!r}")
        return cls(n=parts[0], t=parts[1], kplus=parts[2], kminus=parts[3])

    @classmethod
    def family(cls, m: int, n: int) -> "ErrorBall":
        """B(n, 2, m, m-1) for the weight-2 family."""
        if m < 2:
            raise ValueError(f"family needs m >= 2, got {m}")
        return cls(n=n, t=2, kplus=m, kminus=m - 1)


def ball_size(ball: ErrorBall) -> int:
    """Exact |B| = sum_{i<=t} C(n,i) * (k+ + k-)^i."""
    k = ball.kplus + ball.kminus
    return sum(comb(ball.n, i) * k**i for i in range(ball.t + 1))


def ball_enumerate(ball: ErrorBall, cap: int = DEFAULT_ENUM_CAP) -> list[tuple[int, ...]]:
    """All vectors of B, lexicographic by support then by entry values.

    Refuses (never truncates) when |B| exceeds the cap.
    """
    size = ball_size(ball)
    if size > cap:
        raise ValueError(f"ball has {size} vectors, above enumeration cap {cap}")
    mags = ball.magnitudes.values()
    out: list[tuple[int, ...]] = [(0,) * ball.n]
    for w in range(1, ball.t + 1):
        for support in combinations(range(ball.n), w):
            for vals in product(mags, repeat=w):
                vec = [0] * ball.n
                for pos, v in zip(support, vals):
                    vec[pos] = v
                out.append(tuple(vec))
    return out


def tau(m: int, x: int) -> int:
    """Number of ordered pairs (a, b) in M^2 with a + b = x, M = [-(m-1), m]*.

    Closed five-case form; zero outside [-2(m-1), 2m]. The ordered-pair
    convention is fixed by agreement with the brute-force count.
    """
    if m < 2:
        raise ValueError(f"tau needs m >= 2, got {m}")
    if x < -2 * (m - 1) or x > 2 * m:
        return 0
    if m + 1 <= x <= 2 * m:
        return 2 * m + 1 - x
    if 1 <= x <= m:
        return 2 * m - 1 - x
    if x == 0:
        return 2 * m - 2
    if -m + 1 <= x <= -1:
        return 2 * m - 3 + x
    return 2 * m - 1 + x  # -2m+2 <= x <= -m


def tau_identities(m: int) -> tuple[int, int, int]:
    """(sum_{x=m+1}^{2m} tau, sum_{x=-2m+2}^{-m} tau, sum over odd x of tau)
    = ((m^2+m)/2, (m^2-m)/2, 2m^2-2m)."""
    if m < 2:
        raise ValueError(f"tau_identities needs m >= 2, got {m}")
    return ((m * m + m) // 2, (m * m - m) // 2, 2 * m * m - 2 * m)
