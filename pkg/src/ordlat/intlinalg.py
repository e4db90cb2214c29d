"""Exact integer linear algebra over arbitrary-precision ints.

Row-style Hermite normal form with full transformation tracking: every
result row is an explicit integer combination of the input rows, which is
what lets certificates carry provenance for the generators they introduce.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

Row = Tuple[int, ...]


@dataclass(frozen=True, slots=True)
class HnfResult:
    h: Tuple[Row, ...]        # echelon form, zero rows at the bottom
    u: Tuple[Row, ...]        # unimodular, u @ input == h
    pivots: Tuple[int, ...]   # pivot column of each nonzero row of h

    @property
    def rank(self) -> int:
        return len(self.pivots)


def hnf_rows(rows: Sequence[Sequence[int]]) -> HnfResult:
    """Hermite normal form by row operations.

    Pivots are positive, entries above each pivot lie in [0, pivot), and
    rows below a pivot are zero in its column.
    """
    m = len(rows)
    n = len(rows[0]) if m else 0
    h = [list(map(int, r)) for r in rows]
    for r in h:
        if len(r) != n:
            raise ValueError("ragged matrix")
    u = [[1 if i == j else 0 for j in range(m)] for i in range(m)]

    def addmul(dst: int, src: int, q: int) -> None:
        hd, hs = h[dst], h[src]
        for j in range(n):
            hd[j] -= q * hs[j]
        ud, us = u[dst], u[src]
        for j in range(m):
            ud[j] -= q * us[j]

    r = 0
    pivots: List[int] = []
    for c in range(n):
        if r == m:
            break
        while True:
            nz = [i for i in range(r, m) if h[i][c]]
            if not nz:
                break
            i0 = min(nz, key=lambda i: (abs(h[i][c]), i))
            if i0 != r:
                h[r], h[i0] = h[i0], h[r]
                u[r], u[i0] = u[i0], u[r]
            if h[r][c] < 0:
                h[r] = [-x for x in h[r]]
                u[r] = [-x for x in u[r]]
            clean = True
            for i in range(r + 1, m):
                if h[i][c]:
                    addmul(i, r, h[i][c] // h[r][c])
                    if h[i][c]:
                        clean = False
            if clean:
                break
        if h[r][c]:
            for i in range(r):
                q = h[i][c] // h[r][c]
                if q:
                    addmul(i, r, q)
            pivots.append(c)
            r += 1
    return HnfResult(
        h=tuple(tuple(row) for row in h),
        u=tuple(tuple(row) for row in u),
        pivots=tuple(pivots),
    )


def row_rank(rows: Sequence[Sequence[int]]) -> int:
    return hnf_rows(rows).rank


def solve_in_rowspace(
    rows: Sequence[Sequence[int]], target: Sequence[int]
) -> Optional[Tuple[int, ...]]:
    """Integer coefficients x with x @ rows == target, or None.

    When the rows are independent the solution is unique; otherwise this
    returns the representative produced by back-substitution over the
    Hermite form.
    """
    m = len(rows)
    if m == 0:
        return () if not any(target) else None
    n = len(rows[0])
    if len(target) != n:
        raise ValueError("dimension mismatch")
    res = hnf_rows(rows)
    residual = list(map(int, target))
    y = [0] * m
    for i, c in enumerate(res.pivots):
        piv = res.h[i][c]
        if residual[c] % piv:
            return None
        q = residual[c] // piv
        y[i] = q
        if q:
            hr = res.h[i]
            for j in range(n):
                residual[j] -= q * hr[j]
    if any(residual):
        return None
    return tuple(
        sum(y[i] * res.u[i][j] for i in range(m)) for j in range(m)
    )


def lattice_basis(
    rows: Sequence[Sequence[int]],
) -> Tuple[Tuple[Row, ...], Tuple[Row, ...]]:
    """Basis of the integer row span, plus provenance.

    Returns (basis, combos) where basis rows are the nonzero Hermite rows
    and combos[i] expresses basis[i] as a combination of the input rows.
    """
    res = hnf_rows(rows)
    k = res.rank
    return res.h[:k], res.u[:k]
