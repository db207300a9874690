"""Exact integer linear algebra: column echelon (Hermite-style) reduction.

Everything works on plain Python ints, so there is no overflow and no
rounding.  Matrices are lists of rows; vectors are tuples or lists.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

Vector = tuple[int, ...]


def xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Return (g, x, y) with a*x + b*y == g == gcd(a, b) >= 0."""
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        return -a, -x0, -y0
    return a, x0, y0


@dataclass(frozen=True)
class ColumnEchelon:
    """A * U = H with U unimodular and H in column echelon form.

    ``pivots[j]`` is the row holding the pivot of column ``j`` for
    ``j < rank``; columns of H from ``rank`` on are zero, so the matching
    columns of U span the integer kernel of A.
    """

    rows: int
    cols: int
    h_cols: tuple[Vector, ...]
    u_cols: tuple[Vector, ...]
    pivots: tuple[int, ...]

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def kernel(self) -> list[Vector]:
        return list(self.u_cols[self.rank:])

    def solve(self, rhs: Sequence[int]) -> Vector | None:
        """Some integer z with A z = rhs, or None if there is none."""
        if len(rhs) != self.rows:
            raise ValueError(f"expected {self.rows} entries, got {len(rhs)}")
        residual = list(rhs)
        y = [0] * self.rank
        j = 0
        for i in range(self.rows):
            if j < self.rank and self.pivots[j] == i:
                col = self.h_cols[j]
                q, r = divmod(residual[i], col[i])
                if r:
                    return None
                y[j] = q
                if q:
                    for k in range(i, self.rows):
                        residual[k] -= q * col[k]
                j += 1
            elif residual[i]:
                return None
        z = [0] * self.cols
        for j, coeff in enumerate(y):
            if coeff:
                col = self.u_cols[j]
                for k in range(self.cols):
                    z[k] += coeff * col[k]
        return tuple(z)

    def contains(self, rhs: Sequence[int]) -> bool:
        """Is rhs in the column lattice of A?  Cheaper than solve()."""
        residual = list(rhs)
        j = 0
        for i in range(self.rows):
            if j < self.rank and self.pivots[j] == i:
                col = self.h_cols[j]
                q, r = divmod(residual[i], col[i])
                if r:
                    return False
                if q:
                    for k in range(i, self.rows):
                        residual[k] -= q * col[k]
                j += 1
            elif residual[i]:
                return False
        return True


def column_echelon(columns: Sequence[Sequence[int]], rows: int) -> ColumnEchelon:
    """Reduce the matrix whose columns are ``columns`` (each of length ``rows``)."""
    d = len(columns)
    h = [list(c) for c in columns]
    for c in h:
        if len(c) != rows:
            raise ValueError(f"column of length {len(c)} in a {rows}-row matrix")
    u = [[1 if i == j else 0 for i in range(d)] for j in range(d)]
    pivots: list[int] = []
    k = 0
    for i in range(rows):
        if k == d:
            break
        for j in range(k + 1, d):
            b = h[j][i]
            if not b:
                continue
            a = h[k][i]
            g, x, y = xgcd(a, b)
            p, q = a // g, b // g
            hk, hj = h[k], h[j]
            h[k] = [x * s + y * t for s, t in zip(hk, hj)]
            h[j] = [p * t - q * s for s, t in zip(hk, hj)]
            uk, uj = u[k], u[j]
            u[k] = [x * s + y * t for s, t in zip(uk, uj)]
            u[j] = [p * t - q * s for s, t in zip(uk, uj)]
        if h[k][i]:
            if h[k][i] < 0:
                h[k] = [-v for v in h[k]]
                u[k] = [-v for v in u[k]]
            # keep earlier entries in this row reduced modulo the pivot
            for j in range(k):
                q = h[j][i] // h[k][i]
                if q:
                    h[j] = [s - q * t for s, t in zip(h[j], h[k])]
                    u[j] = [s - q * t for s, t in zip(u[j], u[k])]
            pivots.append(i)
            k += 1
    return ColumnEchelon(
        rows=rows,
        cols=d,
        h_cols=tuple(tuple(c) for c in h),
        u_cols=tuple(tuple(c) for c in u),
        pivots=tuple(pivots),
    )


def solve_system(columns: Sequence[Sequence[int]], rhs: Sequence[int]) -> tuple[Vector, list[Vector]] | None:
    """All integer solutions of A z = rhs as (particular, kernel basis), or None."""
    ech = column_echelon(columns, len(rhs))
    z = ech.solve(rhs)
    if z is None:
        return None
    return z, ech.kernel()


def lattice_basis(vectors: Sequence[Sequence[int]], dim: int) -> list[Vector]:
    """A basis (Hermite column form) of the lattice spanned by ``vectors``."""
    if not vectors:
        return []
    ech = column_echelon(vectors, dim)
    return list(ech.h_cols[: ech.rank])
