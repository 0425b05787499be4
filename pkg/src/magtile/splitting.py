"""Verification and diagnostics for t-splittings of finite Abelian groups.

A splitter set S = {s_1, ..., s_n} partially t-splits G with magnitude set M
when all combinations e . (s_1, ..., s_n) with e in (M u {0})^n and
1 <= wt(e) <= t are distinct and nonzero. It t-splits G (fully) when those
combinations additionally cover G \\ {0}.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from fractions import Fraction
from itertools import combinations, product

from .balls import ErrorBall, MagnitudeSet, ball_size
from .groups import AbelianGroup, Element, parse_group_literal_ordered
from .intervals import Rounding, sqrt_interval

__all__ = [
    "SplitterSet",
    "CollisionStats",
    "verify_partial",
    "verify_complete",
    "verify_full",
    "splitting_values",
    "partial_combo_count",
    "induced_splitting",
    "collision_stats",
    "emit_certificate",
    "parse_certificate",
]

UNVERIFIED = "unverified"
PARTIAL = "partial"
COMPLETE = "complete"
FULL = "full"


@dataclass(frozen=True)
class SplitterSet:
    group: AbelianGroup
    magnitudes: MagnitudeSet
    t: int
    elements: tuple[Element, ...]
    status: str = UNVERIFIED

    def __post_init__(self) -> None:
        if self.t < 1:
            raise ValueError(f"need t >= 1, got {self.t}")
        for s in self.elements:
            self.group.check_element(s)
        if len(set(self.elements)) != len(self.elements):
            raise ValueError("splitter elements must be pairwise distinct")

    @property
    def n(self) -> int:
        return len(self.elements)

    @property
    def ball(self) -> ErrorBall:
        return ErrorBall(
            n=self.n, t=self.t, kplus=self.magnitudes.kplus, kminus=self.magnitudes.kminus
        )

    def with_status(self, status: str) -> "SplitterSet":
        return replace(self, status=status)


def partial_combo_count(n: int, t: int, mags: MagnitudeSet) -> int:
    """Number of weight-1..t combinations, i.e. ball_size - 1."""
    k = len(mags)
    return sum(math.comb(n, w) * k**w for w in range(1, t + 1))


def splitting_values(S: SplitterSet):
    """Yield e . (s_1, ..., s_n) over all e with 1 <= wt(e) <= t (with
    multiplicity, in deterministic order)."""
    G = S.group
    mags = S.magnitudes.values()
    for w in range(1, S.t + 1):
        for support in combinations(range(S.n), w):
            for coeffs in product(mags, repeat=w):
                v = G.identity()
                for pos, a in zip(support, coeffs):
                    v = G.add(v, G.scalar_mul(a, S.elements[pos]))
                yield v


def verify_partial(S: SplitterSet, *, explain: bool = False):
    """True iff all weight-1..t combinations are distinct and nonzero.

    With explain=True returns (ok, detail) where detail names the first
    colliding value (or None).
    """
    zero = S.group.identity()
    seen = set()
    for v in splitting_values(S):
        if v == zero:
            return (False, f"combination hits 0 at value {v}") if explain else False
        if v in seen:
            return (False, f"collision at value {v}") if explain else False
        seen.add(v)
    return (True, None) if explain else True


def verify_complete(S: SplitterSet) -> bool:
    """True iff every group element is some weight-<=t combination."""
    covered = set(splitting_values(S))
    covered.add(S.group.identity())
    return len(covered) == S.group.order


def verify_full(S: SplitterSet) -> SplitterSet:
    """Verify both directions and return S with its status populated.

    When |G| equals the ball size, partial forces full by pigeonhole; that
    consistency is asserted rather than assumed.
    """
    partial = verify_partial(S)
    complete = verify_complete(S)
    if S.group.order == ball_size(S.ball) and partial and not complete:
        raise AssertionError(
            "pigeonhole violated: partial splitting of a group of exactly "
            "ball size must be full"
        )
    if partial and complete:
        return S.with_status(FULL)
    if partial:
        return S.with_status(PARTIAL)
    if complete:
        return S.with_status(COMPLETE)
    return S.with_status(UNVERIFIED)


def induced_splitting(S: SplitterSet, q: int) -> SplitterSet:
    """Project a verified partial splitting through multiplication by a prime
    power q: G = (product of Z_l, l | q) x G' maps S to S' = {q s_i restricted
    to G'}, a partial splitting of G' for the magnitude set scaled down by q.
    """
    if q == 1:
        return S
    if S.status not in (PARTIAL, FULL):
        checked = verify_partial(S)
        if not checked:
            raise ValueError("induced_splitting needs a verified partial splitting")
    kplus = S.magnitudes.kplus // q
    kminus = S.magnitudes.kminus // q
    if kplus < 1:
        raise ValueError(f"q={q} empties the magnitude set (floor(k+/q) = 0)")
    keep = [i for i, fq in enumerate(S.group.factor_orders) if q % fq != 0]
    sub = AbelianGroup(factors=tuple(S.group.factors[i] for i in keep))
    elems = []
    for s in S.elements:
        scaled = S.group.scalar_mul(q, s)
        elems.append(tuple(scaled[i] for i in keep))
    out = SplitterSet(
        group=sub,
        magnitudes=MagnitudeSet(kplus=kplus, kminus=kminus),
        t=S.t,
        elements=tuple(elems),
    )
    if not verify_partial(out):
        raise AssertionError("induced splitting failed re-verification")
    return out.with_status(PARTIAL)


@dataclass
class CollisionStats:
    delta_size: int
    m1_count: int
    m2_count: int
    c_count: int
    s1_size: int | None = None
    family_m: int | None = None
    checks: dict = field(default_factory=dict)


def _extended_indices(S: SplitterSet) -> list[tuple[int, Element]]:
    """The index family (residue class, value): a * s_i for a in M, plus the
    class-of-its-own zero entry."""
    G = S.group
    entries = []
    for i, s in enumerate(S.elements):
        for a in S.magnitudes.values():
            entries.append((i, G.scalar_mul(a, s)))
    entries.append((S.n, G.identity()))  # class n plays the role of infinity
    return entries


def collision_stats(
    S: SplitterSet,
    projection: tuple[int, ...] | None = None,
    rnd: Rounding = Rounding(),
) -> CollisionStats:
    """Coincidence diagnostics over the difference family of a splitting.

    Counts ordered pairs of extended-index pairs sharing a difference,
    normalized so the first components are congruent; checks the theorem
    bounds that apply to the input (they hold for any correct verifier, so a
    violation is raised, not returned).
    """
    if S.status not in (PARTIAL, FULL):
        raise ValueError("collision_stats needs a verified partial splitting")
    G = S.group
    n = S.n
    entries = _extended_indices(S)
    # Delta: ordered pairs of entries in different residue classes.
    by_diff: dict[Element, list[tuple[int, int]]] = {}
    delta_size = 0
    for ci, vi in entries:
        for cj, vj in entries:
            if ci == cj:
                continue
            delta_size += 1
            by_diff.setdefault(G.add(vi, G.neg(vj)), []).append((ci, cj))
    m1 = m2 = 0
    for pairs in by_diff.values():
        if len(pairs) < 2:
            continue
        for (ci, cj) in pairs:
            for (ck, cl) in pairs:
                if (ci, cj) == (ck, cl):
                    continue
                if ci != cl:
                    continue
                if ck != cj:
                    m1 += 1
                else:
                    m2 += 1

    two_m = len(S.magnitudes) + 1
    c_count = sum(
        1 for s in S.elements if S.group.scalar_mul(two_m, s) == G.identity()
    )

    stats = CollisionStats(
        delta_size=delta_size,
        m1_count=m1,
        m2_count=m2,
        c_count=c_count,
        family_m=S.magnitudes.m if S.t == 2 else None,
    )

    m = stats.family_m
    if m is not None and m >= 2:
        K = 2 * m - 1
        expected_delta = K * K * n * n - (4 * m * m - 8 * m + 3) * n
        if delta_size != expected_delta:
            raise AssertionError(
                f"delta size {delta_size} != closed form {expected_delta}"
            )
        stats.checks["delta_closed_form"] = expected_delta
        if m1 > 2 * m * m * n:
            raise AssertionError(f"M1 count {m1} exceeds bound {2 * m * m * n}")
        stats.checks["m1_bound"] = 2 * m * m * n

    if projection is not None:
        for i in projection:
            if not (0 <= i < G.rank):
                raise ValueError(f"projection factor index {i} out of range")
        q1 = math.prod(G.factor_orders[i] for i in projection)
        s1_size = sum(
            1 for s in S.elements if any(s[i] != 0 for i in projection)
        )
        stats.s1_size = s1_size
        if S.status == FULL:
            # |S1| > n (1 - 1/sqrt(|G1|)) - 1, certified.
            root = sqrt_interval(q1, rnd)
            bound_hi = n * (1 - (1 / root).lo) - 1
            if Fraction(s1_size) <= n * (1 - (1 / root).hi) - 1:
                raise AssertionError(
                    f"|S1| = {s1_size} violates projection lower bound"
                )
            stats.checks["s1_bound_hi"] = float(bound_hi)
            if math.gcd(q1, two_m) == 1:
                # C < n/sqrt(|G1|) + 1, certified.
                if Fraction(c_count) >= (n / root).hi + 1:
                    raise AssertionError(
                        f"C = {c_count} violates the projection cap"
                    )
                stats.checks["c_bound_hi"] = float((n / root).hi + 1)
    return stats


# -- certificate files -------------------------------------------------------


def emit_certificate(S: SplitterSet) -> str:
    """Canonical text form: group literal, magnitudes, t, one element per line."""
    lines = [S.group.literal, f"M={S.magnitudes}", f"t={S.t}"]
    for s in S.elements:
        lines.append(" ".join(str(c) for c in s))
    return "\n".join(lines) + "\n"


def parse_certificate(text: str) -> SplitterSet:
    """Parse a certificate file; element coordinates follow the literal's
    factor order and are permuted into canonical order."""
    lines = [ln.strip() for ln in text.strip().splitlines() if ln.strip()]
    if len(lines) < 3:
        raise ValueError("certificate needs at least group, M, and t lines")
    group, perm = parse_group_literal_ordered(lines[0])
    mags = MagnitudeSet.parse(lines[1])
    if not lines[2].startswith("t="):
        raise ValueError(f"expected 't=<int>' on line 3, got {lines[2]!r}")
    t = int(lines[2][2:])
    elements = []
    for ln in lines[3:]:
        coords = tuple(int(c) for c in ln.split())
        if len(coords) != group.rank:
            raise ValueError(f"element {ln!r} has {len(coords)} coords, group rank {group.rank}")
        canonical = [0] * group.rank
        for i, c in enumerate(coords):
            canonical[perm[i]] = c
        elements.append(tuple(canonical))
    return SplitterSet(group=group, magnitudes=mags, t=t, elements=tuple(elements))
