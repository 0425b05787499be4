"""Pure-Python search kernel: backtracking over ascending splitter elements.

Fallback twin of the compiled kernel in _kernel.pyx; the two must traverse
identical trees and return identical (status, solutions, nodes) triples.
Elements are encoded as big-endian mixed-radix integers; `mult` holds the |M|
scalar multiples of every element, flattened row-wise.
"""

from __future__ import annotations

BACKEND = "python"

EXHAUSTED = 0
FOUND = 1
CAP = 2


class KernelContext:
    """Per-(group, magnitudes, n) state reused across work units."""

    def __init__(self, radices: tuple[int, ...], mult: list[int], nm: int, n: int, t: int = 2):
        if t not in (1, 2):
            raise ValueError("kernel handles t in {1, 2}; use the generic driver beyond")
        order = 1
        for q in radices:
            order *= q
        strides = []
        s = 1
        for q in reversed(radices):
            strides.append(s)
            s *= q
        strides.reverse()
        r = len(radices)
        self.radices = tuple(radices)
        self.strides = tuple(strides)
        self.order = order
        self.mult = list(mult)
        self.nm = nm
        self.n = n
        self.t = t
        self.coords = [
            tuple((g // strides[j]) % radices[j] for j in range(r)) for g in range(order)
        ]
        # req[d] = occupancy slots needed to extend d chosen elements to n.
        pair = nm * nm if t == 2 else 0
        req = [0] * (n + 1)
        for d in range(n - 1, -1, -1):
            req[d] = req[d + 1] + nm + pair * d
        self.req = req

    def add(self, x: int, y: int) -> int:
        cx, cy = self.coords[x], self.coords[y]
        v = 0
        for j, q in enumerate(self.radices):
            c = cx[j] + cy[j]
            if c >= q:
                c -= q
            v += c * self.strides[j]
        return v


def make_context(radices, mult, nm, n, t=2) -> KernelContext:
    return KernelContext(tuple(radices), mult, nm, n, t)


class _Frame:
    """Mutable search state shared by placement helpers."""

    __slots__ = ("occ", "trail", "chosen")

    def __init__(self, ctx: KernelContext):
        self.occ = bytearray(ctx.order)
        self.trail: list[int] = []
        self.chosen = [0] * max(ctx.n, 1)


def _try_place(ctx: KernelContext, st: _Frame, g: int, depth: int) -> bool:
    occ = st.occ
    trail = st.trail
    mult = ctx.mult
    nm = ctx.nm
    add = ctx.add
    base = len(trail)
    row = g * nm
    for a in range(nm):
        v = mult[row + a]
        if v == 0 or occ[v]:
            while len(trail) > base:
                occ[trail.pop()] = 0
            return False
        occ[v] = 1
        trail.append(v)
    if ctx.t == 1:
        return True
    for idx in range(depth):
        srow = st.chosen[idx] * nm
        for a in range(nm):
            x = mult[row + a]
            for b in range(nm):
                v = add(x, mult[srow + b])
                if v == 0 or occ[v]:
                    while len(trail) > base:
                        occ[trail.pop()] = 0
                    return False
                occ[v] = 1
                trail.append(v)
    return True


def search_unit(ctx: KernelContext, prefix, cap_nodes: int = 0, find_all: bool = False):
    """Exhaust the subtree under `prefix` (ascending DFS).

    Returns (status, solutions, nodes): solutions are tuples of encoded
    elements; nodes counts candidate placements attempted below the prefix;
    cap_nodes <= 0 means unlimited.
    """
    n = ctx.n
    order = ctx.order
    st = _Frame(ctx)
    trail_base = [0] * (n + 1)

    def undo_to(base: int) -> None:
        occ, trail = st.occ, st.trail
        while len(trail) > base:
            occ[trail.pop()] = 0

    depth = 0
    for p in prefix:
        trail_base[depth] = len(st.trail)
        if not (0 < p < order) or not _try_place(ctx, st, p, depth):
            return EXHAUSTED, [], 0
        st.chosen[depth] = p
        depth += 1
    base_depth = depth

    solutions: list[tuple[int, ...]] = []
    if depth == n:
        solutions.append(tuple(st.chosen[:n]))
        return (EXHAUSTED if find_all else FOUND), solutions, 0

    nodes = 0
    status = EXHAUSTED
    req = ctx.req
    cand = st.chosen[depth - 1] + 1 if depth else 1
    while True:
        placed = False
        if order - 1 - len(st.trail) >= req[depth]:
            limit = order - (n - depth - 1)
            while cand < limit:
                nodes += 1
                if cap_nodes > 0 and nodes > cap_nodes:
                    return CAP, solutions, nodes
                trail_base[depth] = len(st.trail)
                if _try_place(ctx, st, cand, depth):
                    st.chosen[depth] = cand
                    depth += 1
                    if depth == n:
                        solutions.append(tuple(st.chosen[:n]))
                        if not find_all:
                            return FOUND, solutions, nodes
                        depth -= 1
                        undo_to(trail_base[depth])
                        cand += 1
                        continue
                    placed = True
                    break
                cand += 1
        if placed:
            cand = st.chosen[depth - 1] + 1
            continue
        if depth == base_depth:
            break
        depth -= 1
        undo_to(trail_base[depth])
        cand = st.chosen[depth] + 1
    return status, solutions, nodes


def enumerate_pairs(ctx: KernelContext, s1_candidates) -> list[tuple[int, int]]:
    """All (s1, s2) prefixes with s1 in the candidate list, s2 > s1, whose
    combined combinations are distinct and nonzero (work-unit enumeration)."""
    out = []
    st = _Frame(ctx)
    for s1 in s1_candidates:
        if not (0 < s1 < ctx.order):
            continue
        if not _try_place(ctx, st, s1, 0):
            continue
        st.chosen[0] = s1
        base = len(st.trail)
        for s2 in range(s1 + 1, ctx.order):
            if _try_place(ctx, st, s2, 1):
                out.append((s1, s2))
                while len(st.trail) > base:
                    st.occ[st.trail.pop()] = 0
        while st.trail:
            st.occ[st.trail.pop()] = 0
    return out
