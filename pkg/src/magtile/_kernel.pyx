# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled search kernel: backtracking over ascending splitter elements.

Semantics must match _kernel_py exactly (same trees, same statuses, same
node counts); the test suite asserts backend equivalence.
"""

from libc.stdlib cimport calloc, free, malloc

BACKEND = "cython"

EXHAUSTED = 0
FOUND = 1
CAP = 2

DEF STATUS_EXHAUSTED = 0
DEF STATUS_FOUND = 1
DEF STATUS_CAP = 2


DEF ADD_TABLE_MAX_ORDER = 4096  # order^2 int32 <= 67 MB; stays cache-friendly


cdef class KernelContext:
    """Per-(group, magnitudes, n) state reused across work units."""

    cdef int order, nm, n, r, t
    cdef int *radices
    cdef int *strides
    cdef unsigned short *coords   # order * r
    cdef int *mult                # order * nm
    cdef long long *req           # n + 1
    cdef int *add_table           # order * order when small enough, else NULL

    def __cinit__(self, radices, mult, int nm, int n, int t=2):
        if t != 1 and t != 2:
            raise ValueError("kernel handles t in {1, 2}; use the generic driver beyond")
        cdef int r = len(radices)
        cdef int j, g
        cdef long long order = 1
        for j in range(r):
            order *= radices[j]
        if order > 2**31 - 1:
            raise OverflowError("group too large for the compiled kernel")
        self.order = <int>order
        self.nm = nm
        self.n = n
        self.r = r
        self.t = t
        self.radices = <int *>malloc(r * sizeof(int))
        self.strides = <int *>malloc(r * sizeof(int))
        self.coords = <unsigned short *>malloc(<size_t>order * r * sizeof(unsigned short))
        self.mult = <int *>malloc(<size_t>order * nm * sizeof(int))
        self.req = <long long *>malloc((n + 1) * sizeof(long long))
        if (self.radices == NULL or self.strides == NULL or self.coords == NULL
                or self.mult == NULL or self.req == NULL):
            raise MemoryError()
        for j in range(r):
            self.radices[j] = radices[j]
        cdef long long s = 1
        for j in range(r - 1, -1, -1):
            self.strides[j] = <int>s
            s *= radices[j]
        cdef int rem
        for g in range(self.order):
            rem = g
            for j in range(r - 1, -1, -1):
                self.coords[<size_t>g * r + j] = <unsigned short>(rem % self.radices[j])
                rem //= self.radices[j]
        for g in range(self.order * nm):
            self.mult[g] = mult[g]
        cdef long long pair = <long long>nm * nm if t == 2 else 0
        self.req[n] = 0
        for j in range(n - 1, -1, -1):
            self.req[j] = self.req[j + 1] + nm + pair * j
        self.add_table = NULL
        cdef int x, y, v
        if self.order <= ADD_TABLE_MAX_ORDER:
            self.add_table = <int *>malloc(<size_t>self.order * self.order * sizeof(int))
            if self.add_table == NULL:
                raise MemoryError()
            for x in range(self.order):
                for y in range(x, self.order):
                    v = self._add_coords(x, y)
                    self.add_table[<size_t>x * self.order + y] = v
                    self.add_table[<size_t>y * self.order + x] = v

    def __dealloc__(self):
        free(self.radices)
        free(self.strides)
        free(self.coords)
        free(self.mult)
        free(self.req)
        free(self.add_table)

    cdef inline int _add_coords(self, int x, int y):
        cdef int j, c, v = 0
        cdef unsigned short *cx = self.coords + <size_t>x * self.r
        cdef unsigned short *cy = self.coords + <size_t>y * self.r
        for j in range(self.r):
            c = cx[j] + cy[j]
            if c >= self.radices[j]:
                c -= self.radices[j]
            v += c * self.strides[j]
        return v

    cdef inline int add(self, int x, int y):
        if self.add_table != NULL:
            return self.add_table[<size_t>x * self.order + y]
        return self._add_coords(x, y)


def make_context(radices, mult, nm, n, t=2):
    return KernelContext(tuple(radices), mult, nm, n, t)


cdef struct SearchState:
    char *occ
    int *trail
    int trail_len
    int *chosen


cdef int _try_place(KernelContext ctx, SearchState *st, int g, int depth):
    cdef int base = st.trail_len
    cdef int row = g * ctx.nm
    cdef int a, b, idx, srow, v, x
    for a in range(ctx.nm):
        v = ctx.mult[row + a]
        if v == 0 or st.occ[v]:
            while st.trail_len > base:
                st.trail_len -= 1
                st.occ[st.trail[st.trail_len]] = 0
            return 0
        st.occ[v] = 1
        st.trail[st.trail_len] = v
        st.trail_len += 1
    if ctx.t == 1:
        return 1
    for idx in range(depth):
        srow = st.chosen[idx] * ctx.nm
        for a in range(ctx.nm):
            x = ctx.mult[row + a]
            for b in range(ctx.nm):
                v = ctx.add(x, ctx.mult[srow + b])
                if v == 0 or st.occ[v]:
                    while st.trail_len > base:
                        st.trail_len -= 1
                        st.occ[st.trail[st.trail_len]] = 0
                    return 0
                st.occ[v] = 1
                st.trail[st.trail_len] = v
                st.trail_len += 1
    return 1


def search_unit(KernelContext ctx, prefix, long long cap_nodes=0, bint find_all=False):
    """Exhaust the subtree under `prefix`; see _kernel_py.search_unit."""
    cdef int n = ctx.n
    cdef int order = ctx.order
    cdef int trail_cap = ctx.nm * n + ctx.nm * ctx.nm * (n * (n - 1) // 2) + 1
    cdef SearchState st
    st.occ = <char *>calloc(order, sizeof(char))
    st.trail = <int *>malloc(trail_cap * sizeof(int))
    st.chosen = <int *>malloc((n if n > 0 else 1) * sizeof(int))
    cdef int *trail_base = <int *>malloc((n + 1) * sizeof(int))
    if st.occ == NULL or st.trail == NULL or st.chosen == NULL or trail_base == NULL:
        free(st.occ); free(st.trail); free(st.chosen); free(trail_base)
        raise MemoryError()
    st.trail_len = 0

    solutions = []
    cdef long long nodes = 0
    cdef int status = STATUS_EXHAUSTED
    cdef int depth = 0
    cdef int base_depth, cand, limit, p
    cdef bint placed
    try:
        for p in prefix:
            trail_base[depth] = st.trail_len
            if p <= 0 or p >= order or not _try_place(ctx, &st, p, depth):
                return EXHAUSTED, [], 0
            st.chosen[depth] = p
            depth += 1
        base_depth = depth

        if depth == n:
            solutions.append(tuple(st.chosen[i] for i in range(n)))
            return (EXHAUSTED if find_all else FOUND), solutions, 0

        cand = st.chosen[depth - 1] + 1 if depth else 1
        while True:
            placed = False
            if order - 1 - st.trail_len >= ctx.req[depth]:
                limit = order - (n - depth - 1)
                while cand < limit:
                    nodes += 1
                    if cap_nodes > 0 and nodes > cap_nodes:
                        return CAP, solutions, nodes
                    trail_base[depth] = st.trail_len
                    if _try_place(ctx, &st, cand, depth):
                        st.chosen[depth] = cand
                        depth += 1
                        if depth == n:
                            solutions.append(tuple(st.chosen[i] for i in range(n)))
                            if not find_all:
                                return FOUND, solutions, nodes
                            depth -= 1
                            while st.trail_len > trail_base[depth]:
                                st.trail_len -= 1
                                st.occ[st.trail[st.trail_len]] = 0
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
            while st.trail_len > trail_base[depth]:
                st.trail_len -= 1
                st.occ[st.trail[st.trail_len]] = 0
            cand = st.chosen[depth] + 1
        return status, solutions, nodes
    finally:
        free(st.occ)
        free(st.trail)
        free(st.chosen)
        free(trail_base)


def enumerate_pairs(KernelContext ctx, s1_candidates):
    """All valid (s1, s2) work-unit prefixes; see _kernel_py.enumerate_pairs."""
    cdef int order = ctx.order
    cdef int trail_cap = ctx.nm * 2 + ctx.nm * ctx.nm + 1
    cdef SearchState st
    st.occ = <char *>calloc(order, sizeof(char))
    st.trail = <int *>malloc(trail_cap * sizeof(int))
    st.chosen = <int *>malloc(2 * sizeof(int))
    if st.occ == NULL or st.trail == NULL or st.chosen == NULL:
        free(st.occ); free(st.trail); free(st.chosen)
        raise MemoryError()
    st.trail_len = 0
    out = []
    cdef int s1, s2, base
    try:
        for s1 in s1_candidates:
            if s1 <= 0 or s1 >= order:
                continue
            if not _try_place(ctx, &st, s1, 0):
                continue
            st.chosen[0] = s1
            base = st.trail_len
            for s2 in range(s1 + 1, order):
                if _try_place(ctx, &st, s2, 1):
                    out.append((s1, s2))
                    while st.trail_len > base:
                        st.trail_len -= 1
                        st.occ[st.trail[st.trail_len]] = 0
            while st.trail_len > 0:
                st.trail_len -= 1
                st.occ[st.trail[st.trail_len]] = 0
        return out
    finally:
        free(st.occ)
        free(st.trail)
        free(st.chosen)
