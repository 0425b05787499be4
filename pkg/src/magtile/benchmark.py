"""Benchmark the compiled search kernel against the pure-Python fallback.

Both backends traverse the identical tree, so nodes/second is a direct
apples-to-apples comparison; the benchmark also asserts the results agree.
"""

from __future__ import annotations

import time

from . import backend
from .balls import ErrorBall, MagnitudeSet, ball_size
from .groups import enumerate_groups, parse_group_literal
from .search import SearchOptions, search


def run_benchmark(
    ball: str | None = None,
    group: str | None = None,
    m_str: str | None = None,
    t: int = 2,
    n: int | None = None,
) -> list[dict]:
    """Time each available backend on one instance; returns one row per
    backend with nodes, wall time, and status."""
    if group:
        if not (m_str and n):
            raise ValueError("--group benchmarks need --M and --n")
        g = parse_group_literal(group)
        mags = MagnitudeSet.parse(m_str)
        jobs = [(g, mags, t, n)]
    else:
        b = ErrorBall.parse(ball or "5,2,2,1")
        jobs = [(g, b.magnitudes, b.t, b.n) for g in enumerate_groups(ball_size(b))]

    rows = []
    reference = None
    for name in backend.available_backends():
        t0 = time.perf_counter()
        nodes = 0
        statuses = []
        outcomes = []
        for g, mags, tt, nn in jobs:
            res = search(
                g, mags, tt, nn,
                SearchOptions(mode="first", structural_prunes=False, kernel=name),
            )
            nodes += res.nodes
            statuses.append(res.status)
            outcomes.append((g.literal, res.status, [c.elements for c in res.certificates]))
        dt = time.perf_counter() - t0
        if reference is None:
            reference = outcomes
        elif outcomes != reference:
            raise AssertionError(f"backend {name} disagrees with {rows[0]['backend']}")
        rows.append(
            {
                "backend": name,
                "nodes": nodes,
                "seconds": dt,
                "nodes_per_second": nodes / dt if dt > 0 else 0.0,
                "status": ",".join(sorted(set(statuses))),
            }
        )
    # Compiled first in the report when present.
    rows.sort(key=lambda r: r["backend"] != "cython")
    return rows
