"""Integer lattices, normal forms, and the splitting <-> tiling bridge.

The bridge realizes the two constructive directions: a full splitting of G
yields the kernel lattice of x -> x . (s_1, ..., s_n), and a lattice whose
determinant matches the ball size yields a splitting of Z^n / Lambda. An
independent geometric verifier checks pack-and-cover on a finite box without
touching the group machinery. All arithmetic is unbounded-integer exact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import product

from .balls import ErrorBall, ball_enumerate, ball_size
from .groups import AbelianGroup
from .numtheory import factorize
from .splitting import FULL, SplitterSet, verify_full

__all__ = [
    "IntegerLattice",
    "hermite_normal_form",
    "smith_normal_form",
    "det_int",
    "lattice_from_splitting",
    "quotient_splitting",
    "verify_tiling_box",
    "TilingCheck",
    "emit_lattice",
    "parse_lattice",
]

Matrix = list[list[int]]

GEOMETRIC_DIM_CAP = 6


def _identity(k: int) -> Matrix:
    return [[1 if i == j else 0 for j in range(k)] for i in range(k)]


def det_int(a: Matrix) -> int:
    """Exact determinant by fraction-free (Bareiss) elimination."""
    n = len(a)
    if any(len(row) != n for row in a):
        raise ValueError("determinant needs a square matrix")
    m = [row[:] for row in a]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k] != 0:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
            m[i][k] = 0
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def hermite_normal_form(a: Matrix) -> tuple[Matrix, Matrix]:
    """Row-style HNF: returns (H, U) with H = U A, U unimodular, H in row
    echelon form with positive pivots and entries above each pivot reduced
    into [0, pivot)."""
    rows = len(a)
    if rows == 0:
        return [], []
    cols = len(a[0])
    h = [list(map(int, row)) for row in a]
    if any(len(row) != cols for row in h):
        raise ValueError("ragged matrix")
    u = _identity(rows)
    pivot_row = 0
    for col in range(cols):
        if pivot_row >= rows:
            break
        # Clear everything below pivot_row in this column with gcd row ops.
        for i in range(pivot_row + 1, rows):
            if h[i][col] == 0:
                continue
            if h[pivot_row][col] == 0:
                h[pivot_row], h[i] = h[i], h[pivot_row]
                u[pivot_row], u[i] = u[i], u[pivot_row]
                continue
            g, x, y = _xgcd(h[pivot_row][col], h[i][col])
            p_over, i_over = h[pivot_row][col] // g, h[i][col] // g
            new_p = [x * pr + y * ir for pr, ir in zip(h[pivot_row], h[i])]
            new_i = [-i_over * pr + p_over * ir for pr, ir in zip(h[pivot_row], h[i])]
            h[pivot_row], h[i] = new_p, new_i
            new_pu = [x * pr + y * ir for pr, ir in zip(u[pivot_row], u[i])]
            new_iu = [-i_over * pr + p_over * ir for pr, ir in zip(u[pivot_row], u[i])]
            u[pivot_row], u[i] = new_pu, new_iu
        if h[pivot_row][col] == 0:
            continue
        if h[pivot_row][col] < 0:
            h[pivot_row] = [-v for v in h[pivot_row]]
            u[pivot_row] = [-v for v in u[pivot_row]]
        piv = h[pivot_row][col]
        for i in range(pivot_row):
            q = h[i][col] // piv
            if q:
                h[i] = [v - q * w for v, w in zip(h[i], h[pivot_row])]
                u[i] = [v - q * w for v, w in zip(u[i], u[pivot_row])]
        pivot_row += 1
    return h, u


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    """g, x, y with a x + b y = g = gcd(a, b) > 0."""
    old_r, r = a, b
    old_x, x = 1, 0
    old_y, y = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_x, x = x, old_x - q * x
        old_y, y = y, old_y - q * y
    if old_r < 0:
        return -old_r, -old_x, -old_y
    return old_r, old_x, old_y


def smith_normal_form(a: Matrix) -> tuple[Matrix, Matrix, Matrix]:
    """Returns (D, U, V) with D = U A V diagonal, d_1 | d_2 | ..., and U, V
    unimodular."""
    rows = len(a)
    cols = len(a[0]) if rows else 0
    d = [list(map(int, row)) for row in a]
    u = _identity(rows)
    v = _identity(cols)

    def row_op(i: int, j: int, g: int, x: int, y: int, pi: int, pj: int) -> None:
        d[i], d[j] = (
            [x * ri + y * rj for ri, rj in zip(d[i], d[j])],
            [-pj * ri + pi * rj for ri, rj in zip(d[i], d[j])],
        )
        u[i], u[j] = (
            [x * ri + y * rj for ri, rj in zip(u[i], u[j])],
            [-pj * ri + pi * rj for ri, rj in zip(u[i], u[j])],
        )

    def col_op(i: int, j: int, g: int, x: int, y: int, pi: int, pj: int) -> None:
        for row in d:
            row[i], row[j] = x * row[i] + y * row[j], -pj * row[i] + pi * row[j]
        for row in v:
            row[i], row[j] = x * row[i] + y * row[j], -pj * row[i] + pi * row[j]

    t = 0
    limit = min(rows, cols)
    while t < limit:
        # Bring a nonzero entry to (t, t).
        pivot = None
        for i in range(t, rows):
            for j in range(t, cols):
                if d[i][j] != 0:
                    pivot = (i, j)
                    break
            if pivot:
                break
        if pivot is None:
            break
        pi, pj = pivot
        if pi != t:
            d[t], d[pi] = d[pi], d[t]
            u[t], u[pi] = u[pi], u[t]
        if pj != t:
            for row in d:
                row[t], row[pj] = row[pj], row[t]
            for row in v:
                row[t], row[pj] = row[pj], row[t]
        while True:
            # Clear column t.
            for i in range(t + 1, rows):
                if d[i][t] != 0:
                    g, x, y = _xgcd(d[t][t], d[i][t])
                    row_op(t, i, g, x, y, d[t][t] // g, d[i][t] // g)
            # Clear row t (may reintroduce column entries).
            for j in range(t + 1, cols):
                if d[t][j] != 0:
                    g, x, y = _xgcd(d[t][t], d[t][j])
                    col_op(t, j, g, x, y, d[t][t] // g, d[t][j] // g)
            if all(d[i][t] == 0 for i in range(t + 1, rows)) and all(
                d[t][j] == 0 for j in range(t + 1, cols)
            ):
                break
        # Divisibility: fold any non-multiple into the pivot.
        fixed = True
        for i in range(t + 1, rows):
            for j in range(t + 1, cols):
                if d[t][t] and d[i][j] % d[t][t] != 0:
                    d[t] = [x + y for x, y in zip(d[t], d[i])]
                    u[t] = [x + y for x, y in zip(u[t], u[i])]
                    fixed = False
                    break
            if not fixed:
                break
        if fixed:
            if d[t][t] < 0:
                d[t] = [-x for x in d[t]]
                u[t] = [-x for x in u[t]]
            t += 1
    return d, u, v


@dataclass(frozen=True)
class IntegerLattice:
    """Full-rank lattice in Z^n given by generator rows, HNF-canonicalized."""

    generator: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        n = len(self.generator)
        if n == 0 or any(len(row) != n for row in self.generator):
            raise ValueError("generator must be square and nonempty")
        if det_int([list(r) for r in self.generator]) == 0:
            raise ValueError("generator is rank deficient")

    @property
    def n(self) -> int:
        return len(self.generator)

    @property
    def determinant(self) -> int:
        return abs(det_int([list(r) for r in self.generator]))

    def canonical(self) -> "IntegerLattice":
        h, _ = hermite_normal_form([list(r) for r in self.generator])
        return IntegerLattice(generator=tuple(tuple(row) for row in h))


def lattice_from_splitting(s: SplitterSet) -> IntegerLattice:
    """Kernel lattice of x -> x . (s_1, ..., s_n) for a verified full
    splitting; its determinant is |G| and Z^n modulo it recovers G."""
    cert = s if s.status == FULL else verify_full(s)
    if cert.status != FULL:
        raise ValueError("lattice_from_splitting needs a full splitting")
    group = cert.group
    n = cert.n
    r = group.rank
    qs = group.factor_orders
    # Left-kernel of the (n + r) x r stack [images ; diag(q)]: rows u with
    # u . stack = 0 project (first n coords) onto ker phi.
    stack = [[cert.elements[i][j] for j in range(r)] for i in range(n)]
    stack += [[qs[j] if jj == j else 0 for j in range(r)] for jj in range(r)]
    h, u = hermite_normal_form(stack)
    kernel_rows = [u[i][:n] for i in range(len(h)) if all(v == 0 for v in h[i])]
    if len(kernel_rows) != n:
        raise AssertionError(f"kernel rank {len(kernel_rows)} != n = {n}")
    lat = IntegerLattice(generator=tuple(tuple(row) for row in kernel_rows)).canonical()
    if lat.determinant != group.order:
        raise AssertionError(
            f"kernel determinant {lat.determinant} != |G| = {group.order}"
        )
    return lat


def quotient_splitting(lat: IntegerLattice, ball: ErrorBall) -> SplitterSet:
    """Z^n / Lambda as an Abelian group with the standard-basis images as the
    splitter set; rejected up front unless det matches the ball size."""
    size = ball_size(ball)
    if lat.n != ball.n:
        raise ValueError(f"lattice dimension {lat.n} != ball dimension {ball.n}")
    if lat.determinant != size:
        raise ValueError(
            f"determinant {lat.determinant} != ball size {size}: not a tiling candidate"
        )
    a = [list(row) for row in lat.generator]
    d, _, v = smith_normal_form(a)
    n = lat.n
    diag = [d[i][i] for i in range(n)]
    # x + Lambda -> (x . V mod diag): the kernel is exactly the row span of A.
    # Each Z_d splits into prime-power coordinates by CRT (x -> x mod p^e).
    coord_spec: list[tuple[int, int, int, int]] = []  # (p, e, p^e, source col)
    for j in range(n):
        if diag[j] <= 1:
            continue
        f = factorize(diag[j])
        if not f.complete:
            raise ValueError(f"could not factor elementary divisor {diag[j]}")
        for p, e in f.factors:
            coord_spec.append((p, e, p**e, j))
    coord_spec.sort(key=lambda it: (it[0], it[1]))
    group = AbelianGroup(factors=tuple((p, e) for p, e, _, _ in coord_spec))
    elements = []
    for i in range(n):
        elements.append(tuple(v[i][j] % q for _, _, q, j in coord_spec))
    cert = SplitterSet(
        group=group,
        magnitudes=ball.magnitudes,
        t=ball.t,
        elements=tuple(elements),
    )
    return verify_full(cert)


@dataclass
class TilingCheck:
    ok: bool
    status: str  # "verified" | "failed" | "inconclusive"
    witness: tuple[int, ...] | None = None
    cover_count: int | None = None


def _lattice_points_in_box(lat: IntegerLattice, radius: int) -> list[tuple[int, ...]]:
    """All lattice points with infinity norm <= radius, by bounded recursion
    over the HNF basis (integer arithmetic only).

    With H upper triangular, coordinate i is finalized once rows 0..i have
    coefficients, so choosing c_0, c_1, ... in order bounds each c_i exactly.
    """
    h = [list(r) for r in lat.canonical().generator]
    n = lat.n
    points: list[tuple[int, ...]] = []

    def rec(i: int, partial: list[int]) -> None:
        if i == n:
            points.append(tuple(partial))
            return
        piv = h[i][i]
        lo = -((radius + partial[i]) // piv)
        hi = (radius - partial[i]) // piv
        for c in range(lo, hi + 1):
            nxt = partial[:]
            for j in range(i, n):
                nxt[j] += c * h[i][j]
            rec(i + 1, nxt)

    rec(0, [0] * n)
    return points


def verify_tiling_box(
    ball: ErrorBall, lat: IntegerLattice, radius: int
) -> TilingCheck:
    """Geometric pack-and-cover check: every point of the inner box (margin
    k+ + 1) must be covered by exactly one translate v + B with v in the
    outer box (margin k+). Independent of the group machinery."""
    if ball.n != lat.n:
        raise ValueError("dimension mismatch")
    if ball.n > GEOMETRIC_DIM_CAP:
        return TilingCheck(ok=False, status="inconclusive")
    if radius < 2 * (ball.kplus + ball.kminus):
        raise ValueError(
            f"radius {radius} too small; need >= {2 * (ball.kplus + ball.kminus)}"
        )
    inner = radius - (ball.kplus + 1)
    outer = radius + ball.kplus
    lattice_points = set(_lattice_points_in_box(lat, outer))
    vectors = ball_enumerate(ball)
    for p in product(range(-inner, inner + 1), repeat=ball.n):
        count = 0
        for b in vectors:
            v = tuple(p[i] - b[i] for i in range(ball.n))
            if v in lattice_points:
                count += 1
                if count > 1:
                    break
        if count != 1:
            return TilingCheck(ok=False, status="failed", witness=p, cover_count=count)
    return TilingCheck(ok=True, status="verified")


# -- lattice files --------------------------------------------------------------


def emit_lattice(lat: IntegerLattice) -> str:
    lines = [str(lat.n)]
    for row in lat.generator:
        lines.append(" ".join(str(v) for v in row))
    return "\n".join(lines) + "\n"


def parse_lattice(text: str) -> IntegerLattice:
    lines = [ln for ln in text.strip().splitlines() if ln.strip()]
    if not lines:
        raise ValueError("empty lattice file")
    n = int(lines[0].strip())
    if len(lines) != n + 1:
        raise ValueError(f"expected {n} rows, got {len(lines) - 1}")
    rows = []
    for ln in lines[1:]:
        row = tuple(int(v) for v in ln.split())
        if len(row) != n:
            raise ValueError(f"row {ln!r} does not have {n} entries")
        rows.append(row)
    return IntegerLattice(generator=tuple(rows))
