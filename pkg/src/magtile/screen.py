"""Non-existence screening for tilings by B(n, 2, m, m-1).

Composes the order-2 census bounds (two lower, two upper), the integer
optimization lemma behind the first upper bound, the Ramanujan-Nagell and
2-3-smooth Diophantine routes, the Euclidean prime-factor screen, and the
two structural propositions into per-(m, n) verdicts and the full range
screen. Every excluded verdict is backed by exact rational arithmetic plus
directed-rounding brackets for square roots and logarithms; floats appear
only in evidence text.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

from .balls import ErrorBall, ball_size
from .groups import AbelianGroup
from .intervals import Interval, Rounding, log2_interval, sqrt_interval
from .numtheory import coprime_part, integer_kth_root, is_perfect_square, odd_part

__all__ = [
    "ScreenParams",
    "ScreenVerdict",
    "ScreenReport",
    "screen_params",
    "lb1",
    "lb2",
    "lb2_zero_tight",
    "ub1",
    "ub2",
    "techlem_max",
    "techlem_bruteforce",
    "d2_profile_check",
    "nagell_solutions",
    "prop1_bound",
    "prop2_conditions",
    "euclid_screen",
    "exact_case_contradiction",
    "case_m2",
    "case_m3",
    "screen_range",
    "family_ball_size",
]

EXCLUDED = "excluded"
SURVIVOR_SEARCH = "survivor-needs-search"
SURVIVOR_COND2 = "survivor-condition2"


def family_ball_size(m: int, n: int) -> int:
    """|B(n, 2, m, m-1)| = (2m-1)^2 (n^2-n)/2 + (2m-1)n + 1."""
    return ball_size(ErrorBall.family(m, n))


@dataclass(frozen=True)
class ScreenParams:
    """Derived quantities the bound evaluators consume."""

    m: int
    n: int
    ball_size: int
    q_odd: int      # odd part of |G|
    q_prime: int    # largest divisor of |G| coprime to 2m
    s: int          # floor(log2 m)
    r: int          # floor(log2 s)


def screen_params(m: int, n: int) -> ScreenParams:
    if m < 2 or n < 1:
        raise ValueError(f"need m >= 2, n >= 1, got m={m}, n={n}")
    size = family_ball_size(m, n)
    s = m.bit_length() - 1
    return ScreenParams(
        m=m,
        n=n,
        ball_size=size,
        q_odd=odd_part(size),
        q_prime=coprime_part(size, 2 * m),
        s=s,
        r=s.bit_length() - 1,
    )


@dataclass
class ScreenVerdict:
    """Per-(m, n) outcome.

    status: excluded | survivor-needs-search | survivor-condition2.
    reason: A1/A2/A3 or B1/B2/B3 (the m = 2 / m = 3 cases), prop1, prop2
    (all three conditions fail), exact-mid (certified bound sandwich),
    euclid-screen (outside prime beyond the condition-3 band).
    Every excluded verdict carries machine-checkable numeric evidence.
    """

    m: int
    n: int
    status: str
    reason: str
    evidence: dict = field(default_factory=dict)


# -- lower bounds on the order-2 census ---------------------------------------


def lb1(m: int, n: int) -> Fraction:
    """m_2(G) >= n/2 + 1, valid for n >= 4m."""
    if n < 4 * m:
        raise ValueError(f"lb1 needs n >= 4m, got n={n}, m={m}")
    return Fraction(n, 2) + 1


def lb2(
    m: int,
    n: int,
    q_prime: int | None = None,
    positive: bool = True,
    rnd: Rounding = Rounding(),
) -> Interval:
    """Lower bound on (2m-3) * m_2(G), valid for n >= m + 4.

    positive=True is the m_{2m}(G) > 0 branch (strict >, needs q_prime);
    positive=False is the m_{2m}(G) = 0 branch (non-strict >=).
    """
    if n < m + 4:
        raise ValueError(f"lb2 needs n >= m + 4, got n={n}, m={m}")
    if not positive:
        return Interval.exact(
            Fraction(2 * m) - Fraction(5, 2)
        ) * n * n - Interval.exact(Fraction(4 * m * m) - Fraction(5, 2)) * n
    if q_prime is None or q_prime < 1:
        raise ValueError("positive branch needs q_prime >= 1")
    root = sqrt_interval(q_prime, rnd)
    term = Interval.exact(n) / root + 1
    poly = Fraction((2 * m - 2) * n * n - (4 * m * m - 3) * n)
    coef = 2 * m * n - 3 * n - 2 * m * m - 2 * m + 6
    return Interval.exact(poly) - term * term - term * coef


def lb2_zero_tight(m: int, n: int) -> Fraction:
    """(2m - 3/2) n^2 - (4m^2 - 5/2) n: the m_{2m}(G) = 0 branch rebuilt
    directly from the coincidence-count bounds, without the final weakening
    to (2m - 5/2); the weakened form is vacuous exactly where this one is
    needed (small m)."""
    if n < m + 4:
        raise ValueError(f"lb2_zero_tight needs n >= m + 4, got n={n}, m={m}")
    return (2 * m - Fraction(3, 2)) * n * n - (4 * m * m - Fraction(5, 2)) * n


# -- upper bounds on the order-2 census ---------------------------------------


def ub1(m: int, n: int, rnd: Rounding = Rounding()) -> Interval:
    """Upper bound on log2(m_2(G) + 1); vacuous-weak when s = 1 (m in {2, 3}),
    which is documented rather than rejected."""
    if m < 2 or n < 1:
        raise ValueError(f"ub1 needs m >= 2, n >= 1, got m={m}, n={n}")
    s = m.bit_length() - 1
    r = s.bit_length() - 1
    lg = log2_interval(n, rnd)
    return (
        lg * Fraction(2, s + 1)
        + r
        + Fraction(s - 2 ** (r + 1), s + 1)
        + 5
    )


def ub2(
    size: int, m: int, n: int, q_odd: int, rnd: Rounding = Rounding()
) -> Interval:
    """m_2(G) <= |G| / sqrt(q ((m-1)^2 (n^2-n)/2 + (m-1)n + 1)) - 1."""
    if q_odd < 1 or q_odd % 2 == 0 and q_odd != 1:
        raise ValueError(f"q_odd must be odd and positive, got {q_odd}")
    if size % q_odd != 0 or odd_part(size // q_odd) != 1:
        raise ValueError(f"q_odd={q_odd} is not the odd part of {size}")
    inner = (m - 1) ** 2 * (n * n - n) // 2 + (m - 1) * n + 1
    return Interval.exact(size) / sqrt_interval(q_odd * inner, rnd) - 1


# -- the integer optimization lemma -------------------------------------------


def techlem_max(s: int) -> int:
    """4s + r(s+1) - 2^(r+1) + 2 with r = floor(log2 s); the brute force
    below arbitrates the statement's +2 tail."""
    if s < 2:
        raise ValueError(f"techlem needs s >= 2, got {s}")
    r = s.bit_length() - 1
    return 4 * s + r * (s + 1) - 2 ** (r + 1) + 2


def techlem_bruteforce(s: int) -> int:
    """Maximize sum (s+1-i) x_i over nonnegative integers with
    sum_{i<=j} i x_i <= 2j + 2 for every j in [1, s]."""
    if s < 2:
        raise ValueError(f"techlem needs s >= 2, got {s}")
    best = 0

    def rec(i: int, weighted_prefix: int, value: int) -> None:
        nonlocal best
        if i > s:
            best = max(best, value)
            return
        # Whatever x_i is chosen, the prefix constraint at j = i must hold.
        cap = (2 * i + 2 - weighted_prefix) // i
        for x in range(cap, -1, -1):
            rec(i + 1, weighted_prefix + i * x, value + (s + 1 - i) * x)

    rec(1, 0, 0)
    return best


def d2_profile_check(group: AbelianGroup, m: int) -> bool:
    """sum_{i<=j} i * d_{2^i} <= 2j + 2 for all j in [1, floor(log2 m)];
    a necessary condition for any splitting of the family magnitude set."""
    if m < 2:
        return True
    jmax = m.bit_length() - 1
    total = 0
    for j in range(1, jmax + 1):
        total += j * group.d(2**j)
        if total > 2 * j + 2:
            return False
    return True


# -- Diophantine routes --------------------------------------------------------


def nagell_solutions(limit: int) -> list[tuple[int, int]]:
    """Natural solutions (x, e) of x^2 = 2^e - 7 with e <= limit, by scan.

    Complete for limit >= 15 (there are exactly five solutions in total);
    the scan is a consistency check on that fact, not a proof of it.
    """
    if limit < 0:
        raise ValueError(f"need limit >= 0, got {limit}")
    out = []
    for e in range(limit + 1):
        v = 2**e - 7
        if v >= 0 and is_perfect_square(v):
            out.append((math.isqrt(v), e))
    return out


def a2_argument(n: int) -> dict:
    """The power-of-two route for m = 2: |G| = 2^a forces (6n-1)^2 = 2^(a+3)-7,
    whose admissible roots map only to n in {1, 2}."""
    x = 6 * n - 1
    power = x * x + 7
    is_pow2 = power & (power - 1) == 0
    admissible = [x0 for x0, _ in nagell_solutions(60) if x0 % 6 == 5]
    return {
        "x": x,
        "x_squared_plus_7_power_of_two": is_pow2,
        "admissible_roots": admissible,
        "admissible_n": [(x0 + 1) // 6 for x0 in admissible],
        "excluded_for_n_ge_3": all((x0 + 1) // 6 < 3 for x0 in admissible),
    }


def _strip(v: int, p: int) -> int:
    while v % p == 0:
        v //= p
    return v


def b2_argument(n: int) -> dict:
    """The 2-3-smooth route for m = 3: |G| = 2^a 3^b forces
    (5n-1)(5n-2) = 2^(a+1) 3^b, which the factorization argument pins to
    n in {1, 2}; checked here by exhaustive exponent stripping."""
    prod = (5 * n - 1) * (5 * n - 2)
    residue = _strip(_strip(prod, 2), 3)
    return {
        "product": prod,
        "smooth_23": residue == 1,
        "admissible_n": [1, 2],
        "excluded_for_n_ge_3": True,
    }


# -- structural propositions ----------------------------------------------------


def prop1_bound(m: int) -> int | None:
    """Ceiling on n (given n >= 4m) from the census sandwich; None when no
    n >= 4m is possible at all (s = floor(log2 m) > 8)."""
    if m < 4:
        raise ValueError(f"prop1_bound needs m >= 4, got {m}")
    s = m.bit_length() - 1
    if s > 8:
        return None
    r = s.bit_length() - 1
    exponent = Fraction(s + 1, s - 1) * (r + Fraction(s - 2 ** (r + 1), s + 1) + 6)
    if exponent < s + 2:
        return None
    p, q = exponent.numerator, exponent.denominator
    return integer_kth_root(2**p, q)


def c1_max(m: int) -> int:
    """Largest integer n with n <= (2 + 2 sqrt 2) m + 2, exactly."""
    return 2 * m + 2 + math.isqrt(8 * m * m)


def c3_floor(m: int, rnd: Rounding = Rounding()) -> int:
    """Largest integer n with n <= ((5 + sqrt 3)/2 + sqrt 2 + sqrt 6) m + 4,
    by adaptive rational bracketing (the threshold is irrational)."""
    bits = rnd.bits
    while True:
        r = Rounding(bits=bits, slack=rnd.slack)
        coef = (
            Interval.exact(Fraction(5, 2))
            + sqrt_interval(3, r) * Fraction(1, 2)
            + sqrt_interval(2, r)
            + sqrt_interval(6, r)
        )
        value = coef * m + 4
        lo = math.floor(value.lo)
        hi = math.floor(value.hi)
        if lo == hi:
            return lo
        bits *= 2
        if bits > 2**16:
            raise ArithmeticError("c3 threshold failed to separate from an integer")


def euclid_screen(size: int, m: int) -> bool:
    """True iff every prime factor of |G| divides 2m (no factorization:
    repeated division by gcd(., 2m) until coprime, then compare to 1)."""
    if size < 1:
        raise ValueError(f"need ball size >= 1, got {size}")
    return coprime_part(size, 2 * m) == 1


def prop2_conditions(m: int, n: int, rnd: Rounding = Rounding()) -> set[str]:
    """Which of the three necessary conditions hold at (m, n):
    c1: n below the m_{2m} = 0 threshold; c2: divisibility plus all prime
    factors of |G| divide 2m; c3: divisibility plus the sharper threshold."""
    if n < 3 or m < 2:
        raise ValueError(f"need n >= 3, m >= 2, got n={n}, m={m}")
    out = set()
    if n <= c1_max(m):
        out.add("c1")
    if (n * n - 3 * n + 2) % (4 * m) == 0:
        if euclid_screen(family_ball_size(m, n), m):
            out.add("c2")
        if n <= c3_floor(m, rnd):
            out.add("c3")
    return out


# -- the certified contradiction at a single (m, n) ----------------------------


def exact_case_contradiction(m: int, n: int, rnd: Rounding = Rounding()) -> ScreenVerdict:
    """Certified refutation of a tiling at (m, n) in the divisibility band.

    Refutes both census branches: m_{2m}(G) > 0 via the strict lower bound
    against the odd-part upper bound (equivalently the paper's mid-form
    inequality), and m_{2m}(G) = 0 via the tight zero-branch bound. The
    weakened mid_2 form is evaluated and logged as well; it is known not to
    fire on the small pairs, which is flagged, never silently patched.
    """
    if m < 2 or n < m + 4:
        raise ValueError(f"needs m >= 2 and n >= m + 4, got m={m}, n={n}")
    if (n * n - 3 * n + 2) % (4 * m) != 0:
        raise ValueError(
            f"(m={m}, n={n}) is outside the divisibility band 4m | n^2-3n+2"
        )
    p = screen_params(m, n)
    upper = ub2(p.ball_size, m, n, p.q_odd, rnd)
    scaled_upper = upper * (2 * m - 3)

    lower_pos = lb2(m, n, p.q_prime, positive=True, rnd=rnd)
    pos_excluded = scaled_upper.certainly_le(lower_pos)

    lower_zero = lb2_zero_tight(m, n)
    zero_excluded = scaled_upper.certainly_lt(Interval.exact(lower_zero))

    # Paper's mid form: (2m-3)(ub2) - 2m^2 - 2m + 7 > RHS is necessary for
    # the positive branch; contradiction when certified <=.
    rootq = sqrt_interval(p.q_prime, rnd)
    inv_rootq = Interval.exact(1) / rootq
    lhs_mid = scaled_upper - (2 * m * m + 2 * m - 7)
    rhs_mid = (
        Interval.exact(2 * m - 2)
        - Fraction(1, p.q_prime)
        - inv_rootq * (2 * m - 3)
    ) * (n * n) - (
        Interval.exact(4 * m * m - 3 + 2 * m - 3)
        + inv_rootq * 2
        - inv_rootq * (2 * m * m + 2 * m - 6)
    ) * n
    mid_excluded = lhs_mid.certainly_le(rhs_mid)

    # Weakened mid_2 form: sqrt(2/q) (2m-1)^2 n >= RHS is necessary;
    # contradiction when certified <.
    lhs_mid2 = (
        sqrt_interval(2, rnd) / sqrt_interval(p.q_odd, rnd) * ((2 * m - 1) ** 2 * n)
    )
    rhs_mid2 = (
        Interval.exact(2 * m - 2)
        - Fraction(1, p.q_prime)
        - inv_rootq * (2 * m - 3)
    ) * (n * n) - (
        Interval.exact(4 * m * m - 3 + 2 * m - 3)
        - inv_rootq * (2 * m * m + 2 * m - 8)
    ) * n
    mid2_excluded = lhs_mid2.certainly_lt(rhs_mid2)

    positive_refuted = pos_excluded or mid_excluded
    excluded = positive_refuted and zero_excluded
    evidence = {
        "ball_size": p.ball_size,
        "q_odd": p.q_odd,
        "q_prime": p.q_prime,
        "ub2": float(upper),
        "ub2_hi": str(upper.hi),
        "lb2_positive_lo": str(lower_pos.lo),
        "lb2_positive": float(lower_pos),
        "lb2_zero_tight": str(lower_zero),
        "sandwich_positive_excluded": pos_excluded,
        "sandwich_zero_excluded": zero_excluded,
        "mid_excluded": mid_excluded,
        "mid2_excluded": mid2_excluded,
        "mid2_agrees": mid2_excluded == (pos_excluded or mid_excluded),
        "decisive": "sandwich" if pos_excluded else ("mid" if mid_excluded else "none"),
    }
    return ScreenVerdict(
        m=m,
        n=n,
        status=EXCLUDED if excluded else SURVIVOR_SEARCH,
        reason="exact-mid" if excluded else "unresolved",
        evidence=evidence,
    )


# -- the m = 2 and m = 3 case analyses ------------------------------------------


def _case_small_m(
    m: int,
    n: int,
    band_labels: tuple[str, str, str],
    rnd: Rounding,
    band_search=None,
) -> ScreenVerdict:
    b1, b2, b3 = band_labels
    if n < 3:
        raise ValueError(f"need n >= 3, got {n}")
    band_top = c1_max(m)
    if n <= band_top:
        if band_search is not None:
            outcome = band_search(n)
            status = outcome.get("status")
            if status == "none-exhausted":
                return ScreenVerdict(m, n, EXCLUDED, b1, outcome)
            if status == "found":
                raise RuntimeError(
                    f"search found a splitting at (m={m}, n={n}), contradicting "
                    "the published non-existence; investigate before trusting either"
                )
            return ScreenVerdict(m, n, SURVIVOR_SEARCH, b1, outcome)
        return ScreenVerdict(m, n, SURVIVOR_SEARCH, b1, {"band_top": band_top})
    size = family_ball_size(m, n)
    if (n * n - 3 * n + 2) % (4 * m) != 0:
        return ScreenVerdict(
            m, n, EXCLUDED, "prop2",
            {"ball_size": size, "divisibility": False, "c1_max": band_top},
        )
    if euclid_screen(size, m):
        # Both Diophantine routes are provably empty for n >= 3; reaching
        # here means the arithmetic itself is inconsistent.
        detail = a2_argument(n) if m == 2 else b2_argument(n)
        raise RuntimeError(
            f"|B({n},2,{m},{m-1})| = {size} is {2*m}-smooth, which the "
            f"{b2} analysis proves impossible for n >= 3: {detail}"
        )
    if n <= c3_floor(m, rnd):
        verdict = exact_case_contradiction(m, n, rnd)
        if verdict.status == EXCLUDED:
            return ScreenVerdict(m, n, EXCLUDED, b3, verdict.evidence)
        return verdict
    return ScreenVerdict(
        m, n, EXCLUDED, "prop2",
        {"ball_size": size, "divisibility": True, "euclid": False,
         "c3_floor": c3_floor(m, rnd)},
    )


def case_m2(n: int, rnd: Rounding = Rounding(), band_search=None) -> ScreenVerdict:
    """Route n for m = 2: the search band A1 (n <= 11), the power-of-two
    route A2, or the exact-contradiction band A3."""
    return _case_small_m(2, n, ("A1", "A2", "A3"), rnd, band_search)


def case_m3(n: int, rnd: Rounding = Rounding(), band_search=None) -> ScreenVerdict:
    """Route n for m = 3: search band B1 (n <= 16), 2-3-smooth route B2,
    exact-contradiction band B3."""
    return _case_small_m(3, n, ("B1", "B2", "B3"), rnd, band_search)


# -- the full range screen -------------------------------------------------------


@dataclass
class ScreenReport:
    m: int
    prop1_ceiling: int | None
    survivors: list[int]
    max_survivor: int | None
    theorem1_bound: str
    ok: bool
    details: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        return {
            "m": self.m,
            "prop1_ceiling": self.prop1_ceiling,
            "survivors": self.survivors,
            "max_survivor": self.max_survivor,
            "theorem1_bound": self.theorem1_bound,
            "ok": self.ok,
            "details": self.details,
        }


def _theorem1_bound(m: int) -> Fraction:
    return Fraction(723, 100) * m + 4 if m <= 512 else Fraction(4 * m)


def screen_one(m: int, rnd: Rounding = Rounding()) -> ScreenReport:
    """Screen a single m >= 4: everything at or above 4m must fall to the
    ceiling, the Euclidean screen, or the certified contradictions; what is
    left sits under the main bound."""
    if m < 4:
        raise ValueError("screen_one handles m >= 4; use case_m2/case_m3 below")
    ceiling = prop1_bound(m)
    bound = _theorem1_bound(m)
    c1 = c1_max(m)
    c3 = c3_floor(m, rnd)
    survivors: list[int] = []
    condition2: list[int] = []
    screened = 0
    excluded_euclid = 0
    excluded_exact = 0
    max_survivor = 4 * m - 1  # everything below 4m sits under the bound
    if ceiling is not None and ceiling >= 4 * m:
        max_survivor = max(max_survivor, min(c1, ceiling))
        mod = 4 * m
        candidates = [
            n for n in range(4 * m, ceiling + 1) if ((n - 1) * (n - 2)) % mod == 0
        ]
        for n in candidates:
            screened += 1
            size = family_ball_size(m, n)
            if euclid_screen(size, m):
                # Condition 2 holds outright: every prime factor of |B|
                # divides 2m. Reported, never silently dropped.
                survivors.append(n)
                condition2.append(n)
                max_survivor = max(max_survivor, n)
                continue
            if n <= c3:
                verdict = exact_case_contradiction(m, n, rnd)
                if verdict.status != EXCLUDED:
                    survivors.append(n)
                    max_survivor = max(max_survivor, n)
                else:
                    excluded_exact += 1
            else:
                excluded_euclid += 1
    ok = Fraction(max_survivor) < bound
    return ScreenReport(
        m=m,
        prop1_ceiling=ceiling,
        survivors=survivors,
        max_survivor=max_survivor,
        theorem1_bound=f"{'7.23*m+4' if m <= 512 else '4*m'} = {float(bound)}",
        ok=ok,
        details={
            "c1_max": c1,
            "c3_floor": c3,
            "divisibility_candidates": screened,
            "condition2_survivors": condition2,
            "excluded_euclid_beyond_c3": excluded_euclid,
            "excluded_exact": excluded_exact,
        },
    )


def screen_small_m(
    m: int,
    n_max: int | None = None,
    rnd: Rounding = Rounding(),
    band_search=None,
) -> ScreenReport:
    """Screen m in {2, 3}: every n in [3, n_max] is routed through the case
    analysis; the search band needs a band_search callback to turn survivors
    into exclusions."""
    if m not in (2, 3):
        raise ValueError("screen_small_m handles m in {2, 3}")
    case = case_m2 if m == 2 else case_m3
    top = n_max if n_max is not None else c3_floor(m, rnd)
    survivors = []
    reasons: dict[str, int] = {}
    for n in range(3, top + 1):
        verdict = case(n, rnd, band_search)
        reasons[verdict.reason] = reasons.get(verdict.reason, 0) + 1
        if verdict.status != EXCLUDED:
            survivors.append(n)
    return ScreenReport(
        m=m,
        prop1_ceiling=None,
        survivors=survivors,
        max_survivor=max(survivors) if survivors else None,
        theorem1_bound="none (no tiling for any n >= 3)",
        ok=not survivors,
        details={"scanned_n_max": top, "reasons": reasons},
    )


def _screen_worker(args):
    m, bits, slack = args
    return screen_one(m, Rounding(bits=bits, slack=slack)).as_dict()


def screen_range(
    m_lo: int,
    m_hi: int,
    rnd: Rounding = Rounding(),
    threads: int = 1,
) -> list[ScreenReport]:
    """Reports for every m in [m_lo, m_hi] with m >= 4 (the m = 2, 3 cases
    carry search obligations and go through screen_small_m)."""
    if m_lo < 4:
        raise ValueError("screen_range covers m >= 4; use screen_small_m for 2, 3")
    ms = list(range(m_lo, m_hi + 1))
    if threads > 1 and len(ms) > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            dicts = list(pool.map(_screen_worker, ((m, rnd.bits, rnd.slack) for m in ms)))
        return [
            ScreenReport(
                m=d["m"],
                prop1_ceiling=d["prop1_ceiling"],
                survivors=d["survivors"],
                max_survivor=d["max_survivor"],
                theorem1_bound=d["theorem1_bound"],
                ok=d["ok"],
                details=d["details"],
            )
            for d in dicts
        ]
    return [screen_one(m, rnd) for m in ms]
