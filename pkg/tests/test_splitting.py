"""Splitting verification, induced splittings, diagnostics, certificates."""

import random

import pytest

from magtile.balls import ErrorBall, MagnitudeSet, ball_size
from magtile.groups import AbelianGroup, enumerate_groups
from magtile.splitting import (
    SplitterSet,
    collision_stats,
    emit_certificate,
    induced_splitting,
    parse_certificate,
    verify_complete,
    verify_full,
    verify_partial,
)
from tests.conftest import brute_force_complete, brute_force_partial


def make(group, kplus, kminus, t, encoded):
    return SplitterSet(
        group=group,
        magnitudes=MagnitudeSet(kplus=kplus, kminus=kminus),
        t=t,
        elements=tuple(group.decode(g) for g in encoded),
    )


Z7 = AbelianGroup.cyclic(7)


def test_verify_partial_examples():
    assert verify_partial(make(Z7, 1, 0, 2, (1, 2, 4)))
    assert not verify_partial(make(Z7, 1, 0, 2, (1, 2, 3)))  # 1 + 2 = 3
    Z5 = AbelianGroup.cyclic(5)
    assert verify_partial(make(Z5, 2, 1, 1, (1,)))


def test_verify_partial_explain():
    ok, detail = verify_partial(make(Z7, 1, 0, 2, (1, 2, 3)), explain=True)
    assert not ok and "collision" in detail
    ok, detail = verify_partial(make(Z7, 1, 0, 2, (1, 2, 4)), explain=True)
    assert ok and detail is None


def test_verify_full_examples():
    cert = verify_full(make(Z7, 1, 0, 2, (1, 2, 4)))
    assert cert.status == "full"
    Z8 = AbelianGroup.cyclic(8)
    s8 = make(Z8, 1, 0, 2, (1, 2, 4))
    assert verify_partial(s8) and not verify_complete(s8)
    assert verify_full(s8).status == "partial"
    Z3 = AbelianGroup.cyclic(3)
    assert verify_full(make(Z3, 1, 0, 1, (1, 2))).status == "full"


def test_verify_against_brute_force_random():
    rng = random.Random(42)
    for _ in range(500):
        N = rng.randrange(3, 30)
        G = rng.choice(enumerate_groups(N))
        kplus = rng.randrange(1, 3)
        kminus = rng.randrange(0, kplus + 1)
        t = rng.randrange(1, 3)
        n = rng.randrange(1, 4)
        if G.order - 1 < n:
            continue
        encoded = rng.sample(range(1, G.order), n)
        S = make(G, kplus, kminus, t, encoded)
        mags = S.magnitudes.values()
        elements = S.elements
        assert verify_partial(S) == brute_force_partial(G.factor_orders, mags, t, elements)
        assert verify_complete(S) == brute_force_complete(G.factor_orders, mags, t, elements)


def test_pigeonhole_consistency():
    # Whenever |G| = ball size, partial certificates returned as full.
    ball = ErrorBall(n=3, t=2, kplus=1, kminus=0)
    assert Z7.order == ball_size(ball)
    cert = verify_full(make(Z7, 1, 0, 2, (1, 2, 4)))
    assert cert.status == "full"


def test_distinctness_enforced():
    with pytest.raises(ValueError):
        make(Z7, 1, 0, 2, (1, 1, 4))


def test_induced_splitting_identity():
    cert = verify_full(make(Z7, 1, 0, 2, (1, 2, 4)))
    assert induced_splitting(cert, 1) is cert


def test_induced_splitting_q2():
    # A family splitting in an order-21 group: m=2, n=1: combos {-s, s, 2s}.
    Z21 = AbelianGroup.cyclic(21)
    S = make(Z21, 2, 1, 2, (5,))
    assert verify_partial(S)
    S = S.with_status("partial")
    out = induced_splitting(S, 2)
    # q=2 strips Z_2 factors (none here); magnitudes halve to {1}.
    assert out.magnitudes == MagnitudeSet(kplus=1, kminus=0)
    assert out.group.order == 21
    assert verify_partial(out)


def test_induced_splitting_strips_two_torsion():
    G = AbelianGroup.from_factor_orders([2, 9])
    # m=2 family, n=1: s = (1, 4): combos -s, s, 2s must be distinct nonzero.
    S = SplitterSet(group=G, magnitudes=MagnitudeSet(2, 1), t=2, elements=((1, 4),))
    assert verify_partial(S)
    out = induced_splitting(S.with_status("partial"), 2)
    assert out.group.literal == "Z9"
    assert out.elements == ((8,),)  # 2 * (1, 4) projected off the Z2 factor


def test_induced_splitting_degenerate_q():
    cert = verify_full(make(Z7, 1, 0, 2, (1, 2, 4)))
    with pytest.raises(ValueError, match="magnitude"):
        induced_splitting(cert, 2)  # floor(1/2) = 0


def naive_collision_counts(S):
    """Independent quadruple-loop recount of the coincidence statistics."""
    G = S.group
    entries = []
    for i, s in enumerate(S.elements):
        for a in S.magnitudes.values():
            entries.append((i, G.scalar_mul(a, s)))
    entries.append((len(S.elements), G.identity()))
    delta = [
        (ci, vi, cj, vj)
        for ci, vi in entries
        for cj, vj in entries
        if ci != cj
    ]
    m1 = m2 = 0
    for ci, vi, cj, vj in delta:
        for ck, vk, cl, vl in delta:
            if (ci, vi, cj, vj) == (ck, vk, cl, vl):
                continue
            if G.add(vi, G.neg(vj)) != G.add(vk, G.neg(vl)):
                continue
            if ci != cl:
                continue
            if ck != cj:
                m1 += 1
            else:
                m2 += 1
    return len(delta), m1, m2


def test_collision_stats_z7():
    cert = verify_full(make(Z7, 1, 0, 2, (1, 2, 4)))
    stats = collision_stats(cert, projection=(0,))
    d, m1, m2 = naive_collision_counts(cert)
    assert stats.delta_size == d
    assert stats.m1_count == m1
    assert stats.m2_count == m2
    assert stats.c_count == 0  # odd order: no element with (|M|+1) s = 0
    assert stats.s1_size == 3


def test_collision_stats_family_closed_form():
    # A partial m=2 certificate in a roomy group; Eq-(1) delta count and the
    # M1 bound are theorems there.
    Z53 = AbelianGroup.cyclic(53)
    from magtile.search import SearchOptions, search

    res = search(Z53, MagnitudeSet(2, 1), 2, 3, SearchOptions(mode="first"))
    assert res.status == "found"
    cert = res.certificates[0]
    assert cert.status == "partial"
    stats = collision_stats(cert)
    m, n = 2, 3
    assert stats.delta_size == (2 * m - 1) ** 2 * n * n - (4 * m * m - 8 * m + 3) * n
    assert stats.m1_count <= 2 * m * m * n
    d, m1, m2 = naive_collision_counts(cert)
    assert (stats.delta_size, stats.m1_count, stats.m2_count) == (d, m1, m2)


def test_collision_stats_requires_verified():
    S = make(Z7, 1, 0, 2, (1, 2, 4))
    with pytest.raises(ValueError):
        collision_stats(S)


def test_certificate_round_trip():
    cert = verify_full(make(Z7, 1, 0, 2, (1, 2, 4)))
    text = emit_certificate(cert)
    back = parse_certificate(text)
    assert back.group == cert.group
    assert back.elements == cert.elements
    assert back.magnitudes == cert.magnitudes
    assert back.t == cert.t
    assert emit_certificate(back) == text  # bit-exact round trip


def test_certificate_permutes_noncanonical_literals():
    text = "Z9xZ2\nM=-1..2\nt=2\n4 1\n"
    S = parse_certificate(text)
    assert S.group.literal == "Z2xZ9"
    assert S.elements == ((1, 4),)


def test_certificate_rejects_garbage():
    with pytest.raises(ValueError):
        parse_certificate("Z7\nM=-0..1\n")
    with pytest.raises(ValueError):
        parse_certificate("Z7\nM=-0..1\nt=2\n1 2\n")
