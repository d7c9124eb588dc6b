"""Dense exact linear algebra over Q or Q(i).

Matrices are lists of rows.  Entries may be ``int``, ``Fraction`` or
``GaussRational``; everything is coerced to :class:`GaussRational` on the
way in so pivots can be divided exactly.
"""

from __future__ import annotations

from typing import Sequence

from .gauss import ONE, ZERO, GaussRational, gq


class InconsistentSystem(ValueError):
    """Raised by :func:`solve` when ``A x = b`` has no solution."""


def as_matrix(rows: Sequence[Sequence]) -> list[list[GaussRational]]:
    return [[gq(x) for x in row] for row in rows]


def rref(rows: Sequence[Sequence], ncols: int | None = None) -> tuple[list[list[GaussRational]], list[int]]:
    """Reduced row echelon form; returns the nonzero rows and their pivot columns."""
    m = as_matrix(rows)
    if ncols is None:
        ncols = len(m[0]) if m else 0
    pivots: list[int] = []
    r = 0
    nrows = len(m)
    for c in range(ncols):
        if r == nrows:
            break
        piv = next((i for i in range(r, nrows) if m[i][c]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        prow = m[r]
        inv = ONE / prow[c]
        if inv != ONE:
            prow = [x * inv if x else ZERO for x in prow]
            m[r] = prow
        nz = [j for j in range(c, ncols) if prow[j]]
        for i in range(nrows):
            if i == r:
                continue
            f = m[i][c]
            if f:
                row = m[i]
                for j in nz:
                    row[j] = row[j] - f * prow[j]
        pivots.append(c)
        r += 1
    return m[:r], pivots


def rank(rows: Sequence[Sequence], ncols: int | None = None) -> int:
    if not rows:
        return 0
    return len(rref(rows, ncols)[1])


def nullspace(rows: Sequence[Sequence], ncols: int) -> list[list[GaussRational]]:
    """Kernel basis, returned in reduced row echelon form."""
    if not rows:
        basis = [[ONE if j == i else ZERO for j in range(ncols)] for i in range(ncols)]
        return basis
    red, pivots = rref(rows, ncols)
    pivset = set(pivots)
    free = [c for c in range(ncols) if c not in pivset]
    basis = []
    for f in free:
        v = [ZERO] * ncols
        v[f] = ONE
        for row, p in zip(red, pivots):
            if row[f]:
                v[p] = -row[f]
        basis.append(v)
    if not basis:
        return []
    return rref(basis, ncols)[0]


def solve(a: Sequence[Sequence], b: Sequence) -> list[GaussRational]:
    """One solution of ``a x = b`` (free variables set to zero)."""
    if len(a) != len(b):
        raise ValueError("row count of a and length of b differ")
    ncols = len(a[0]) if a else 0
    aug = [list(row) + [bi] for row, bi in zip(a, b)]
    red, pivots = rref(aug, ncols + 1)
    if pivots and pivots[-1] == ncols:
        raise InconsistentSystem("system has no solution")
    x = [ZERO] * ncols
    for row, p in zip(red, pivots):
        x[p] = row[ncols]
    return x


def det(a: Sequence[Sequence]) -> GaussRational:
    m = as_matrix(a)
    n = len(m)
    if any(len(row) != n for row in m):
        raise ValueError("determinant of a non-square matrix")
    result = ONE
    for c in range(n):
        piv = next((i for i in range(c, n) if m[i][c]), None)
        if piv is None:
            return ZERO
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            result = -result
        p = m[c][c]
        result = result * p
        for i in range(c + 1, n):
            f = m[i][c]
            if f:
                f = f / p
                row, prow = m[i], m[c]
                for j in range(c + 1, n):
                    if prow[j]:
                        row[j] = row[j] - f * prow[j]
    return result


def inverse(a: Sequence[Sequence]) -> list[list[GaussRational]]:
    n = len(a)
    aug = [list(row) + [ONE if j == i else ZERO for j in range(n)] for i, row in enumerate(a)]
    red, pivots = rref(aug, 2 * n)
    if pivots[:n] != list(range(n)) or len(pivots) < n or pivots[n - 1] >= n:
        raise ZeroDivisionError("matrix is singular")
    return [row[n:] for row in red]


def matmul(a: Sequence[Sequence], b: Sequence[Sequence]) -> list[list[GaussRational]]:
    bt = list(zip(*b))
    out = []
    for row in a:
        out.append([_dot(row, col) for col in bt])
    return out


def matvec(a: Sequence[Sequence], v: Sequence) -> list[GaussRational]:
    return [_dot(row, v) for row in a]


def _dot(u, v) -> GaussRational:
    s = ZERO
    for x, y in zip(u, v):
        if x and y:
            s = s + x * y
    return s


def identity(n: int) -> list[list[GaussRational]]:
    return [[ONE if i == j else ZERO for j in range(n)] for i in range(n)]


class SpanReducer:
    """Membership and coordinates with respect to a fixed list of vectors.

    The generators are row-reduced once; every query then costs one pass
    over the pivots.  Coordinates are expressed in the *original*
    generators, which must be linearly independent for :meth:`coordinates`.
    """

    def __init__(self, generators: Sequence[Sequence], ncols: int):
        self.ncols = ncols
        self.count = len(generators)
        aug = [
            list(g) + [ONE if j == i else ZERO for j in range(self.count)]
            for i, g in enumerate(generators)
        ]
        red, pivots = rref(aug, ncols + self.count) if aug else ([], [])
        keep = [(row, p) for row, p in zip(red, pivots) if p < ncols]
        self.rows = [row for row, _ in keep]
        self.pivots = [p for _, p in keep]
        self.rank = len(self.rows)

    def reduce(self, v: Sequence) -> tuple[list[GaussRational], list[GaussRational]]:
        """Return ``(residual, combination)`` with ``v - residual = sum(comb[i]*gen[i])``."""
        work = [gq(x) for x in v] + [ZERO] * self.count
        for row, p in zip(self.rows, self.pivots):
            f = work[p]
            if f:
                for j, x in enumerate(row):
                    if x:
                        work[j] = work[j] - f * x
        residual = work[: self.ncols]
        comb = [-x for x in work[self.ncols:]]
        return residual, comb

    def contains(self, v: Sequence) -> bool:
        residual, _ = self.reduce(v)
        return not any(residual)

    def coordinates(self, v: Sequence) -> list[GaussRational] | None:
        if self.rank != self.count:
            raise ValueError("generators are linearly dependent; coordinates not unique")
        residual, comb = self.reduce(v)
        if any(residual):
            return None
        return comb
