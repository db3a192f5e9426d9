"""Exact integer and rational linear algebra.

Z-solvability of classical linear systems via column-style Hermite normal
form, full-rank testing by fraction-free (Bareiss) elimination, membership in
the nonnegative rational cone by an exact simplex with Bland's rule, and the
exponential norm bound driving the bounded nonnegative search.  No floating
point anywhere.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .core import IntVector, ShapeError


@dataclass(frozen=True)
class IntMatrix:
    """Immutable rectangular matrix of arbitrary-precision integers."""

    rows: int
    cols: int
    entries: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        ent = tuple(tuple(row) for row in self.entries)
        if len(ent) != self.rows or any(len(row) != self.cols for row in ent):
            raise ShapeError("matrix entries do not match declared shape")
        object.__setattr__(self, "entries", ent)

    @staticmethod
    def from_rows(rows: Sequence[Sequence[int]]) -> "IntMatrix":
        r = len(rows)
        c = len(rows[0]) if r else 0
        return IntMatrix(r, c, tuple(tuple(row) for row in rows))

    @staticmethod
    def from_columns(cols: Sequence[Sequence[int]], nrows: int | None = None) -> "IntMatrix":
        if cols:
            nrows = len(cols[0])
        elif nrows is None:
            raise ShapeError("empty column list needs an explicit row count")
        return IntMatrix.from_rows([[col[i] for col in cols] for i in range(nrows)])

    def column(self, j: int) -> tuple[int, ...]:
        return tuple(self.entries[i][j] for i in range(self.rows))

    def mul_vec(self, x: Sequence[int]) -> tuple[int, ...]:
        if len(x) != self.cols:
            raise ShapeError("vector length does not match column count")
        return tuple(
            sum(self.entries[i][j] * x[j] for j in range(self.cols))
            for i in range(self.rows)
        )


@dataclass(frozen=True)
class NormReport:
    inf_norm: int
    one_inf_norm: int


def inf_norm(v: Iterable[int]) -> int:
    return max((abs(x) for x in v), default=0)


def one_norm(v: Iterable[int]) -> int:
    return sum(abs(x) for x in v)


def matrix_one_inf_norm(m: IntMatrix) -> int:
    """Max over columns of the column 1-norm."""
    return max((one_norm(m.column(j)) for j in range(m.cols)), default=0)


def norm_report(v: Sequence[int]) -> NormReport:
    return NormReport(inf_norm=inf_norm(v), one_inf_norm=one_norm(v))


def z_solve_system(m: IntMatrix, y: Sequence[int]) -> Optional[tuple[int, ...]]:
    """Some integer solution x of M*x = y, or None.

    Column-style Hermite normal form: column operations (recorded in a
    unimodular transform) bring M to echelon form, a triangular solve with
    exact divisibility checks decides solvability, and the returned x is
    verified by multiplication before returning."""
    if len(y) != m.rows:
        raise ShapeError("right-hand side length does not match row count")
    r, n = m.rows, m.cols
    # column-major working copies
    h = [list(m.column(j)) for j in range(n)]
    u = [[1 if i == j else 0 for i in range(n)] for j in range(n)]
    pivots: list[tuple[int, int]] = []  # (row, column-position)
    c = 0
    for i in range(r):
        if c == n:
            break
        while True:
            nz = [j for j in range(c, n) if h[j][i] != 0]
            if not nz:
                break
            jmin = min(nz, key=lambda j: abs(h[j][i]))
            h[c], h[jmin] = h[jmin], h[c]
            u[c], u[jmin] = u[jmin], u[c]
            done = True
            for j in range(c + 1, n):
                if h[j][i]:
                    q = h[j][i] // h[c][i]
                    h[j] = [a - q * b for a, b in zip(h[j], h[c])]
                    u[j] = [a - q * b for a, b in zip(u[j], u[c])]
                    if h[j][i]:
                        done = False
            if done:
                break
        if c < n and h[c][i] != 0:
            pivots.append((i, c))
            c += 1
    residual = list(y)
    t = [0] * n
    for i, c in pivots:
        piv = h[c][i]
        if residual[i] % piv:
            return None
        coeff = residual[i] // piv
        t[c] = coeff
        if coeff:
            residual = [a - coeff * b for a, b in zip(residual, h[c])]
    if any(residual):
        return None
    x = tuple(sum(u[c][j] * t[c] for c in range(n)) for j in range(n))
    assert m.mul_vec(x) == tuple(y), "HNF solver produced a non-solution"
    return x


def _graded_lex_boxes(n: int, bound: int):
    """All x in N^n with ||x||_inf <= bound, graded by sum then lexicographic."""
    for total in range(0, n * bound + 1):
        def parts(rem: int, slots: int):
            if slots == 0:
                if rem == 0:
                    yield ()
                return
            lo = max(0, rem - (slots - 1) * bound)
            for first in range(min(bound, rem), lo - 1, -1):
                for rest in parts(rem - first, slots - 1):
                    yield (first, *rest)
        yield from parts(total, n)


def n_solve_bounded(
    m: IntMatrix, y: Sequence[int], bound: int
) -> Optional[tuple[int, ...]]:
    """Exhaustive search for x in N^m with M*x = y and ||x||_inf <= bound.

    Deterministic graded-lexicographic enumeration; the first solution found
    is returned.  When bound >= pottier_base_bound(M, y), absence is a
    certified NO (any minimal solution fits in the box)."""
    if bound < 0:
        raise ShapeError("bound must be nonnegative")
    target = tuple(y)
    for x in _graded_lex_boxes(m.cols, bound):
        if m.mul_vec(x) == target:
            return x
    return None


def pottier_base_bound(m: IntMatrix, y: Sequence[int]) -> int:
    """(||M||_{1,inf} + ||y||_inf + 2) ** (rows + cols), exactly."""
    return (matrix_one_inf_norm(m) + inf_norm(y) + 2) ** (m.rows + m.cols)


def cone_member_certificate(
    gens: Sequence[IntVector], y: Sequence[int]
):
    """(True, rational coefficients q >= 0 with sum q_i g_i = y) or
    (False, Farkas functional z with z.g_i >= 0 for all i and z.y < 0).

    Phase-1 exact-rational simplex with Bland's rule; always terminates."""
    d = len(y)
    for g in gens:
        if len(g) != d:
            raise ShapeError("generator dimension mismatch")
    n = len(gens)
    sign = [1 if y[i] >= 0 else -1 for i in range(d)]
    # tableau rows: d constraints; columns: n real + d artificial + rhs
    tab = [
        [Fraction(sign[i] * gens[j][i]) for j in range(n)]
        + [Fraction(1 if t == i else 0) for t in range(d)]
        + [Fraction(sign[i] * y[i])]
        for i in range(d)
    ]
    cost = [Fraction(0)] * n + [Fraction(1)] * d
    basis = list(range(n, n + d))
    while True:
        # reduced costs from scratch (d is small; keeps the pivoting simple)
        cb = [cost[b] for b in basis]
        rc = [
            cost[j] - sum(cb[i] * tab[i][j] for i in range(d))
            for j in range(n + d)
        ]
        entering = next((j for j in range(n + d) if rc[j] < 0), None)
        if entering is None:
            break
        ratios = [
            (tab[i][n + d] / tab[i][entering], basis[i], i)
            for i in range(d)
            if tab[i][entering] > 0
        ]
        if not ratios:
            raise ArithmeticError("phase-1 objective unbounded below (impossible)")
        _, _, leave = min(ratios, key=lambda t: (t[0], t[1]))
        piv = tab[leave][entering]
        tab[leave] = [a / piv for a in tab[leave]]
        for i in range(d):
            if i != leave and tab[i][entering]:
                f = tab[i][entering]
                tab[i] = [a - f * b for a, b in zip(tab[i], tab[leave])]
        basis[leave] = entering
    cb = [cost[b] for b in basis]
    obj = sum(cb[i] * tab[i][n + d] for i in range(d))
    if obj == 0:
        q = [Fraction(0)] * n
        for i, b in enumerate(basis):
            if b < n:
                q[b] = tab[i][n + d]
        assert all(qi >= 0 for qi in q)
        for i in range(d):
            total = sum(q[j] * gens[j][i] for j in range(n))
            assert total == y[i], "simplex certificate failed re-verification"
        return True, tuple(q)
    # simplex multipliers from the artificial columns' reduced costs
    rc = [
        cost[j] - sum(cb[i] * tab[i][j] for i in range(d))
        for j in range(n + d)
    ]
    pi = [1 - rc[n + i] for i in range(d)]
    z = tuple(-sign[i] * pi[i] for i in range(d))
    zy = sum(z[i] * y[i] for i in range(d))
    assert zy < 0, "Farkas functional failed: z.y must be negative"
    for j in range(n):
        zg = sum(z[i] * gens[j][i] for i in range(d))
        assert zg >= 0, "Farkas functional failed: z.g must be nonnegative"
    return False, z


def cone_member(gens: Sequence[IntVector], y: Sequence[int]) -> bool:
    """True iff y is a nonnegative rational combination of gens."""
    ok, _ = cone_member_certificate(gens, y)
    return ok


def rank(m: IntMatrix) -> int:
    """Rank over the rationals, fraction-free Bareiss elimination."""
    a = [list(row) for row in m.entries]
    r, c = m.rows, m.cols
    rk = 0
    prev = 1
    for _ in range(min(r, c)):
        piv = None
        for i in range(rk, r):
            for j in range(rk, c):
                if a[i][j]:
                    piv = (i, j)
                    break
            if piv:
                break
        if piv is None:
            break
        pi, pj = piv
        a[rk], a[pi] = a[pi], a[rk]
        for row in a:
            row[rk], row[pj] = row[pj], row[rk]
        p = a[rk][rk]
        for i in range(rk + 1, r):
            for j in range(rk + 1, c):
                a[i][j] = (a[i][j] * p - a[i][rk] * a[rk][j]) // prev
            a[i][rk] = 0
        prev = p
        rk += 1
    return rk


def rank_full(m: IntMatrix) -> bool:
    """True iff the rank over the rationals equals min(rows, cols)."""
    return rank(m) == min(m.rows, m.cols)
