"""Error-ball sizes, enumeration, and the pair-sum function tau."""

from itertools import product

import pytest

from magtile.balls import DEFAULT_ENUM_CAP, ErrorBall, MagnitudeSet, ball_enumerate, ball_size, tau, tau_identities


def scan_count(n, t, kplus, kminus):
    """Independent oracle: full product scan with a weight filter."""
    count = 0
    for vec in product(range(-kminus, kplus + 1), repeat=n):
        if sum(1 for x in vec if x) <= t:
            count += 1
    return count


def test_ball_size_examples():
    assert ball_size(ErrorBall(n=11, t=2, kplus=2, kminus=1)) == 529
    assert ball_size(ErrorBall(n=1, t=1, kplus=1, kminus=0)) == 2
    assert ball_size(ErrorBall(n=3, t=2, kplus=1, kminus=0)) == 7
    assert ball_size(ErrorBall(n=2, t=2, kplus=1, kminus=1)) == 9


def test_ball_size_family_closed_form():
    # t=2 family: (2m-1)^2 C(n,2) + (2m-1) n + 1.
    for m in (2, 3, 5):
        for n in (3, 7, 12):
            size = ball_size(ErrorBall.family(m, n))
            k = 2 * m - 1
            assert size == k * k * n * (n - 1) // 2 + k * n + 1


def test_ball_size_matches_scan():
    for n in (1, 2, 3, 4):
        for kplus in (1, 2, 3):
            for kminus in range(kplus + 1):
                for t in range(1, n + 1):
                    ball = ErrorBall(n=n, t=t, kplus=kplus, kminus=kminus)
                    assert ball_size(ball) == scan_count(n, t, kplus, kminus)


def test_ball_validation():
    with pytest.raises(ValueError):
        ErrorBall(n=2, t=3, kplus=1, kminus=0)
    with pytest.raises(ValueError):
        ErrorBall(n=2, t=1, kplus=1, kminus=2)
    with pytest.raises(ValueError):
        ErrorBall(n=2, t=1, kplus=0, kminus=0)


def test_enumerate_examples():
    vecs = ball_enumerate(ErrorBall(n=1, t=1, kplus=2, kminus=1))
    assert set(vecs) == {(0,), (-1,), (1,), (2,)}
    vecs = ball_enumerate(ErrorBall(n=2, t=1, kplus=1, kminus=0))
    assert set(vecs) == {(0, 0), (1, 0), (0, 1)}
    vecs = ball_enumerate(ErrorBall(n=2, t=2, kplus=1, kminus=1))
    assert set(vecs) == set(product((-1, 0, 1), repeat=2))


def test_enumerate_matches_size_and_is_duplicate_free():
    for n in (1, 2, 3, 5):
        for kplus, kminus, t in ((1, 0, 1), (2, 1, 2), (3, 3, min(2, n))):
            ball = ErrorBall(n=n, t=t, kplus=kplus, kminus=kminus)
            vecs = ball_enumerate(ball)
            assert len(vecs) == len(set(vecs)) == ball_size(ball)


def test_enumerate_deterministic_order():
    ball = ErrorBall(n=2, t=2, kplus=1, kminus=1)
    # Zero vector, then weight-1 by support, then the weight-2 support.
    assert ball_enumerate(ball) == [
        (0, 0),
        (-1, 0), (1, 0),
        (0, -1), (0, 1),
        (-1, -1), (-1, 1), (1, -1), (1, 1),
    ]


def test_enumerate_cap_refusal():
    ball = ErrorBall(n=11, t=2, kplus=2, kminus=1)
    with pytest.raises(ValueError, match="cap"):
        ball_enumerate(ball, cap=100)
    assert len(ball_enumerate(ball, cap=DEFAULT_ENUM_CAP)) == 529


def brute_tau(m, x):
    mags = MagnitudeSet(kplus=m, kminus=m - 1).values()
    return sum(1 for a in mags for b in mags if a + b == x)


def test_tau_paper_examples():
    assert tau(3, 0) == 4
    assert tau(3, 6) == 1
    assert tau(3, -3) == 2
    # Ordered-pair convention fixed by the brute force: (-1,2) and (2,-1).
    assert tau(2, 1) == 2 == brute_tau(2, 1)


def test_tau_against_brute_force():
    for m in (2, 3, 4, 7, 16):
        for x in range(-2 * m - 2, 2 * m + 3):
            assert tau(m, x) == brute_tau(m, x), (m, x)


def test_tau_zero_outside_range():
    for m in (2, 5):
        assert tau(m, -2 * (m - 1) - 1) == 0
        assert tau(m, 2 * m + 1) == 0
        assert tau(m, 10**9) == 0


def test_tau_completeness():
    for m in range(2, 20):
        total = sum(tau(m, x) for x in range(-2 * (m - 1), 2 * m + 1))
        assert total == (2 * m - 1) ** 2


def test_tau_identities():
    assert tau_identities(2) == (3, 1, 4)
    assert tau_identities(3) == (6, 3, 12)
    assert tau_identities(10) == (55, 45, 180)
    for m in range(2, 20):
        hi, lo, odd = tau_identities(m)
        assert hi == sum(tau(m, x) for x in range(m + 1, 2 * m + 1))
        assert lo == sum(tau(m, x) for x in range(-2 * m + 2, -m + 1))
        assert odd == sum(tau(m, x) for x in range(-2 * m + 3, 2 * m) if x % 2)


def test_tau_rejects_small_m():
    with pytest.raises(ValueError):
        tau(1, 0)
    with pytest.raises(ValueError):
        tau_identities(1)


def test_magnitude_set():
    M = MagnitudeSet(kplus=2, kminus=1)
    assert M.values() == (-1, 1, 2)
    assert len(M) == 3
    assert M.m == 2
    assert MagnitudeSet(kplus=2, kminus=2).m is None
    assert str(M) == "-1..2"
    assert MagnitudeSet.parse("-1..2") == M
    assert MagnitudeSet.parse("M=-0..1") == MagnitudeSet(kplus=1, kminus=0)
    with pytest.raises(ValueError):
        MagnitudeSet(kplus=0, kminus=0)
