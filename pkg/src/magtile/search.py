"""Exhaustive splitter-set search: work units, parallel driver, checkpoints.

The tree is ordered by the canonical element order (ascending encoded
elements); the first two choices define a work unit, which is the unit of
parallel dispatch, checkpointing, and determinism. Results are confirmed in
unit order, so outcomes are identical for any worker count.
"""

from __future__ import annotations

import hashlib
import json
import math
import os
import tempfile
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from . import backend
from .balls import ErrorBall, MagnitudeSet, ball_size
from .groups import AbelianGroup, enumerate_groups
from .screen import d2_profile_check
from .splitting import SplitterSet, partial_combo_count, verify_full

__all__ = [
    "SearchOptions",
    "SearchResult",
    "CheckpointMismatch",
    "search",
    "search_all_groups",
    "unit_orbit_min_candidates",
]

FOUND = "found"
NONE_EXHAUSTED = "none-exhausted"
INCONCLUSIVE = "inconclusive"

_CHUNK_UNITS = 64  # fixed so confirmed prefixes are thread-count independent


@dataclass(frozen=True)
class SearchOptions:
    mode: str = "first"  # "first" or "all"
    threads: int = 1
    cap_nodes: int = 0  # per work unit; <= 0 unlimited
    normalize: bool | None = None  # None: on unless mode == "all"
    structural_prunes: bool = True
    checkpoint: str | None = None
    max_units: int = 0  # stop after this many units this run (0 = no limit)
    kernel: str | None = None  # backend override ("python"/"cython")

    @property
    def normalize_effective(self) -> bool:
        if self.normalize is None:
            return self.mode != "all"
        return self.normalize


@dataclass
class SearchResult:
    status: str
    certificates: list[SplitterSet] = field(default_factory=list)
    nodes: int = 0
    units_total: int = 0
    units_done: int = 0
    prune_reason: str | None = None
    cap_hits: int = 0
    backend: str = ""

    def as_dict(self) -> dict:
        from .splitting import emit_certificate

        return {
            "status": self.status,
            "certificates": [emit_certificate(c) for c in self.certificates],
            "nodes": self.nodes,
            "units_total": self.units_total,
            "units_done": self.units_done,
            "prune_reason": self.prune_reason,
            "cap_hits": self.cap_hits,
            "backend": self.backend,
        }


class CheckpointMismatch(RuntimeError):
    pass


def unit_orbit_min_candidates(group: AbelianGroup) -> list[int]:
    """Encoded elements minimal in their orbit under x -> u*x, gcd(u, exp) = 1.

    Scalar multiplication by a unit of the exponent is an automorphism, and
    any splitter set maps to one whose minimum element is orbit-minimal, so
    restricting s_1 to these is sound for existence and exhaustion.
    """
    order = group.order
    exp = group.exponent
    units = [u for u in range(1, exp + 1) if math.gcd(u, exp) == 1]
    visited = bytearray(order)
    reps = []
    for g in range(1, order):
        if visited[g]:
            continue
        reps.append(g)
        elem = group.decode(g)
        for u in units:
            visited[group.encode(group.scalar_mul(u, elem))] = 1
    return reps


def _build_mult_table(group: AbelianGroup, mags: MagnitudeSet) -> tuple[list[int], int]:
    values = mags.values()
    nm = len(values)
    mult = [0] * (group.order * nm)
    for g in range(group.order):
        elem = group.decode(g)
        row = g * nm
        for i, a in enumerate(values):
            mult[row + i] = group.encode(group.scalar_mul(a, elem))
    return mult, nm


def _structural_prune(
    group: AbelianGroup, mags: MagnitudeSet, t: int, n: int
) -> str | None:
    """Theorem-backed rejections that spare the tree walk entirely."""
    if group.order < 1 + partial_combo_count(n, t, mags):
        return "capacity"
    m = mags.m
    if t == 2 and m is not None and m >= 2:
        if not d2_profile_check(group, m):
            return "2-adic profile"
    if mags.kplus // 2 >= 1:
        # Project out the Z_2 factors (q = 2): the image must still have room
        # for n elements splitting the halved magnitude set.
        reduced = MagnitudeSet(kplus=mags.kplus // 2, kminus=mags.kminus // 2)
        sub_order = group.order // 2 ** group.d(2)
        if sub_order < 1 + partial_combo_count(n, t, reduced):
            return "projection capacity (q=2)"
    return None


# -- worker plumbing ----------------------------------------------------------

_WORKER_CTX = None
_WORKER_ARGS = None


def _worker_init(payload):
    global _WORKER_CTX, _WORKER_ARGS
    radices, mult, nm, n, t, kernel_name = payload
    mod = backend.kernel_module(kernel_name)
    _WORKER_CTX = mod.make_context(radices, mult, nm, n, t)
    _WORKER_ARGS = (mod, payload)


def _run_chunk(args):
    units, cap_nodes, find_all = args
    mod, _ = _WORKER_ARGS
    out = []
    for unit in units:
        status, sols, nodes = mod.search_unit(_WORKER_CTX, unit, cap_nodes, find_all)
        out.append((status, sols, nodes))
    return out


# -- checkpoints --------------------------------------------------------------


def _params_payload(group, mags, t, n, options: SearchOptions) -> dict:
    return {
        "group": group.literal,
        "magnitudes": str(mags),
        "t": t,
        "n": n,
        "mode": options.mode,
        "normalize": options.normalize_effective,
        "structural_prunes": options.structural_prunes,
        "cap_nodes": options.cap_nodes,
    }


def _params_hash(params: dict) -> str:
    return hashlib.sha256(json.dumps(params, sort_keys=True).encode()).hexdigest()[:16]


def _atomic_write(path: str, text: str) -> None:
    d = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".ckpt-")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _load_checkpoint(path: str, params_hash: str) -> dict | None:
    if not os.path.exists(path):
        return None
    with open(path) as fh:
        data = json.load(fh)
    if data.get("params_hash") != params_hash:
        raise CheckpointMismatch(
            f"checkpoint {path} was written for different parameters "
            f"({data.get('params_hash')} != {params_hash})"
        )
    return data


# -- main driver --------------------------------------------------------------


def search(
    group: AbelianGroup,
    mags: MagnitudeSet,
    t: int,
    n: int,
    options: SearchOptions = SearchOptions(),
) -> SearchResult:
    """Exhaustive backtracking search for splitter sets of size n.

    Returns a verified certificate (mode "first"), all of them (mode "all"),
    a proof-of-exhaustion marker, or an explicit inconclusive status when a
    resource cap interrupted the walk.
    """
    if n < 1:
        raise ValueError(f"need n >= 1, got {n}")
    if t > 2:
        return _generic_search(group, mags, t, n, options)

    result = SearchResult(status=NONE_EXHAUSTED, backend=options.kernel or backend.kernel_backend())
    if options.structural_prunes:
        reason = _structural_prune(group, mags, t, n)
        if reason is not None:
            result.prune_reason = reason
            return result

    mod = backend.kernel_module(options.kernel)
    mult, nm = _build_mult_table(group, mags)
    radices = group.factor_orders if group.rank else (1,)
    ctx = mod.make_context(radices, mult, nm, n, t)

    find_all = options.mode == "all"
    if options.normalize_effective:
        s1_candidates = unit_orbit_min_candidates(group)
    else:
        s1_candidates = list(range(1, group.order))

    # Work units: (s1, s2) prefixes, or single-element prefixes when n == 1.
    if n == 1:
        units = [(s1,) for s1 in s1_candidates]
    else:
        units = mod.enumerate_pairs(ctx, s1_candidates)
    result.units_total = len(units)

    params = _params_payload(group, mags, t, n, options)
    phash = _params_hash(params)
    state = None
    if options.checkpoint:
        state = _load_checkpoint(options.checkpoint, phash)
    if state is None:
        state = {
            "schema": 1,
            "params": params,
            "params_hash": phash,
            "units_total": len(units),
            "watermark": 0,
            "nodes": 0,
            "cap_hits": 0,
            "finds": [],
            "complete": False,
        }
    if state["units_total"] != len(units):
        raise CheckpointMismatch("checkpoint unit count does not match this run")

    def finish_from_state(complete: bool) -> SearchResult:
        finds = sorted(state["finds"])
        certs = []
        for _, encoded in finds[: (1 if options.mode == "first" else len(finds))]:
            elems = tuple(group.decode(e) for e in encoded)
            cert = SplitterSet(group=group, magnitudes=mags, t=t, elements=elems)
            cert = verify_full(cert)
            if cert.status not in ("partial", "full"):
                raise AssertionError("search produced a certificate that fails verification")
            certs.append(cert)
        result.certificates = certs
        result.nodes = state["nodes"]
        result.units_done = state["watermark"]
        result.cap_hits = state["cap_hits"]
        if certs:
            result.status = FOUND
            if options.mode == "all" and state["cap_hits"]:
                result.status = INCONCLUSIVE
        elif state["cap_hits"]:
            result.status = INCONCLUSIVE
        elif complete:
            result.status = NONE_EXHAUSTED
        else:
            result.status = INCONCLUSIVE
        return result

    if state.get("complete"):
        return finish_from_state(complete=True)

    start = state["watermark"]
    pending = units[start:]
    if options.max_units > 0:
        pending = pending[: options.max_units]
    chunks = [pending[i : i + _CHUNK_UNITS] for i in range(0, len(pending), _CHUNK_UNITS)]

    def consume(chunk_units, chunk_result) -> bool:
        """Record one confirmed chunk; returns True when the driver may stop."""
        for unit, (status, sols, nodes) in zip(chunk_units, chunk_result):
            idx = state["watermark"]
            state["nodes"] += nodes
            if status == mod.CAP:
                state["cap_hits"] += 1
            for sol in sols:
                state["finds"].append([idx, list(sol)])
            state["watermark"] = idx + 1
        if options.checkpoint:
            _atomic_write(options.checkpoint, json.dumps(state))
        return bool(state["finds"]) and options.mode == "first"

    stopped = False
    if options.threads <= 1 or len(chunks) <= 1:
        payload = (radices, mult, nm, n, t, options.kernel)
        _worker_init(payload)
        for chunk in chunks:
            if consume(chunk, _run_chunk((chunk, options.cap_nodes, find_all))):
                stopped = True
                break
    else:
        payload = (radices, mult, nm, n, t, options.kernel)
        with ProcessPoolExecutor(
            max_workers=options.threads, initializer=_worker_init, initargs=(payload,)
        ) as pool:
            args = ((chunk, options.cap_nodes, find_all) for chunk in chunks)
            results = pool.map(_run_chunk, args)
            for chunk, chunk_result in zip(chunks, results):
                if consume(chunk, chunk_result):
                    stopped = True
                    pool.shutdown(wait=False, cancel_futures=True)
                    break

    complete = stopped or state["watermark"] == len(units)
    if complete:
        state["complete"] = True
        if options.checkpoint:
            _atomic_write(options.checkpoint, json.dumps(state))
    return finish_from_state(complete=complete)


def search_all_groups(
    ball: ErrorBall, options: SearchOptions = SearchOptions()
) -> list[tuple[AbelianGroup, SearchResult]]:
    """Run the search over every Abelian group of order |B| (the only orders
    a full tiling certificate can live in)."""
    size = ball_size(ball)
    out = []
    for group in enumerate_groups(size):
        out.append((group, search(group, ball.magnitudes, ball.t, ball.n, options)))
    return out


# -- generic fallback for t >= 3 ---------------------------------------------


def _generic_search(group, mags, t, n, options: SearchOptions) -> SearchResult:
    """Correct-but-slow search for weight bounds beyond the tuned t <= 2."""
    from itertools import combinations, product

    result = SearchResult(status=NONE_EXHAUSTED, backend="generic")
    if options.structural_prunes:
        reason = _structural_prune(group, mags, t, n)
        if reason is not None:
            result.prune_reason = reason
            return result
    values = mags.values()
    order = group.order
    zero = group.identity()
    elems = [group.decode(g) for g in range(order)]
    find_all = options.mode == "all"
    if options.normalize_effective:
        s1_candidates = set(unit_orbit_min_candidates(group))
    else:
        s1_candidates = set(range(1, order))

    finds: list[tuple[int, ...]] = []
    nodes = 0
    capped = False

    def new_values(chosen: list[int], g: int):
        out = []
        for w in range(1, t + 1):
            for support in combinations(chosen + [g], w):
                if g not in support:
                    continue
                for coeffs in product(values, repeat=w):
                    v = zero
                    for pos, a in zip(support, coeffs):
                        v = group.add(v, group.scalar_mul(a, elems[pos]))
                    out.append(v)
        return out

    def rec(chosen: list[int], used: set, start: int) -> bool:
        nonlocal nodes, capped
        if len(chosen) == n:
            finds.append(tuple(chosen))
            return not find_all
        for g in range(start, order - (n - len(chosen) - 1)):
            if not chosen and g not in s1_candidates:
                continue
            nodes += 1
            if options.cap_nodes > 0 and nodes > options.cap_nodes:
                capped = True
                return True
            vals = new_values(chosen, g)
            if zero in vals:
                continue
            if len(set(vals)) != len(vals) or used & set(vals):
                continue
            chosen.append(g)
            used |= set(vals)
            if rec(chosen, used, g + 1):
                return True
            chosen.pop()
            used -= set(vals)
        return False

    rec([], set(), 1)
    result.nodes = nodes
    for f in finds[: (1 if options.mode == "first" else len(finds))]:
        cert = SplitterSet(
            group=group,
            magnitudes=mags,
            t=t,
            elements=tuple(group.decode(g) for g in f),
        )
        result.certificates.append(verify_full(cert))
    if result.certificates:
        result.status = FOUND if not (capped and find_all) else INCONCLUSIVE
    elif capped:
        result.status = INCONCLUSIVE
    else:
        result.status = NONE_EXHAUSTED
    result.cap_hits = 1 if capped else 0
    return result
