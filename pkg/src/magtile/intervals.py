"""Rational interval arithmetic with directed rounding for sqrt and log2.

Screening verdicts must be rigorous: all quantities are exact Fractions or
intervals [lo, hi] of Fractions guaranteed to contain the true value. Floats
never enter a comparison; they only appear in human-readable evidence.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational

__all__ = ["Interval", "Rounding", "sqrt_interval", "log2_interval"]

RatLike = Rational | int


@dataclass(frozen=True)
class Rounding:
    """Precision for directed rounding; slack > 1 widens every bracket by
    (slack - 1) times its width on each side (stability checks)."""

    bits: int = 96
    slack: int = 1


@dataclass(frozen=True)
class Interval:
    lo: Fraction
    hi: Fraction

    def __post_init__(self) -> None:
        if self.lo > self.hi:
            raise ValueError(f"inverted interval [{self.lo}, {self.hi}]")

    @classmethod
    def exact(cls, x: RatLike) -> "Interval":
        f = Fraction(x)
        return cls(f, f)

    @staticmethod
    def _coerce(x) -> "Interval":
        if isinstance(x, Interval):
            return x
        return Interval.exact(x)

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    def widened(self, slack: int) -> "Interval":
        """Pad each endpoint by (slack - 1) * width; the padded slack is at
        least slack times the original on both sides."""
        if slack <= 1:
            return self
        pad = self.width * (slack - 1)
        return Interval(self.lo - pad, self.hi + pad)

    # -- arithmetic ----------------------------------------------------------

    def __add__(self, other) -> "Interval":
        o = self._coerce(other)
        return Interval(self.lo + o.lo, self.hi + o.hi)

    __radd__ = __add__

    def __neg__(self) -> "Interval":
        return Interval(-self.hi, -self.lo)

    def __sub__(self, other) -> "Interval":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "Interval":
        return self._coerce(other) + (-self)

    def __mul__(self, other) -> "Interval":
        o = self._coerce(other)
        cands = (self.lo * o.lo, self.lo * o.hi, self.hi * o.lo, self.hi * o.hi)
        return Interval(min(cands), max(cands))

    __rmul__ = __mul__

    def reciprocal(self) -> "Interval":
        if self.lo <= 0 <= self.hi:
            raise ZeroDivisionError(f"interval {self} straddles zero")
        return Interval(1 / self.hi, 1 / self.lo)

    def __truediv__(self, other) -> "Interval":
        return self * self._coerce(other).reciprocal()

    def __rtruediv__(self, other) -> "Interval":
        return self._coerce(other) * self.reciprocal()

    # -- certified comparisons ------------------------------------------------

    def certainly_lt(self, other) -> bool:
        return self.hi < self._coerce(other).lo

    def certainly_le(self, other) -> bool:
        return self.hi <= self._coerce(other).lo

    def certainly_gt(self, other) -> bool:
        return self.lo > self._coerce(other).hi

    def certainly_ge(self, other) -> bool:
        return self.lo >= self._coerce(other).hi

    def __float__(self) -> float:
        return float((self.lo + self.hi) / 2)

    def __str__(self) -> str:
        return f"[{float(self.lo):.6g}, {float(self.hi):.6g}]"


def sqrt_interval(x: RatLike, rnd: Rounding = Rounding()) -> Interval:
    """[lo, hi] containing sqrt(x) with hi - lo <= 2^-bits * max(1, sqrt(x))."""
    f = Fraction(x)
    if f < 0:
        raise ValueError(f"sqrt of negative {x}")
    if f == 0:
        return Interval.exact(0)
    p, q = f.numerator, f.denominator
    # sqrt(p/q) = sqrt(p*q)/q; scale by 4^bits so the isqrt carries the
    # fractional precision.
    scale = 1 << rnd.bits
    r = math.isqrt(p * q * scale * scale)
    lo = Fraction(r, q * scale)
    hi = Fraction(r + 1, q * scale)
    if lo * lo == f:
        hi = lo
    return Interval(lo, hi).widened(rnd.slack)


def log2_interval(x: RatLike, rnd: Rounding = Rounding()) -> Interval:
    """[lo, hi] containing log2(x), dyadic endpoints with 2^-bits spacing."""
    f = Fraction(x)
    if f <= 0:
        raise ValueError(f"log2 of non-positive {x}")
    # Normalize to y in [1, 2) tracking the integer exponent.
    e = 0
    y = f
    while y >= 2:
        y /= 2
        e += 1
    while y < 1:
        y *= 2
        e -= 1
    if y == 1:
        return Interval.exact(e).widened(rnd.slack)
    # Binary digits of log2(y) by repeated squaring.
    frac_num = 0
    for _ in range(rnd.bits):
        y *= y
        frac_num <<= 1
        if y >= 2:
            frac_num += 1
            y /= 2
        # Cap the rational's size; truncation only loses precision downward,
        # so compensate with one extra ulp of slack below.
        if y.denominator.bit_length() > 4 * rnd.bits:
            y = Fraction(
                y.numerator * (1 << (2 * rnd.bits)) // y.denominator,
                1 << (2 * rnd.bits),
            )
    lo = e + Fraction(frac_num, 1 << rnd.bits)
    hi = e + Fraction(frac_num + 2, 1 << rnd.bits)
    return Interval(lo, hi).widened(rnd.slack)
