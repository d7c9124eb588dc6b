"""Matrices whose entries are :class:`MultiPoly` in a shared ring."""

from __future__ import annotations

from typing import Sequence

from .gauss import GaussRational
from .poly import MultiPoly


class PolyMatrix:
    __slots__ = ("rows", "cols", "nvars", "entries")

    def __init__(self, entries: Sequence[Sequence[MultiPoly]]):
        entries = tuple(tuple(row) for row in entries)
        if not entries or not entries[0]:
            raise ValueError("empty PolyMatrix")
        cols = len(entries[0])
        if any(len(row) != cols for row in entries):
            raise ValueError("ragged PolyMatrix")
        nvars = entries[0][0].nvars
        if any(e.nvars != nvars for row in entries for e in row):
            raise ValueError("PolyMatrix entries must share nvars")
        self.rows = len(entries)
        self.cols = cols
        self.nvars = nvars
        self.entries = entries

    @classmethod
    def identity(cls, n: int, nvars: int) -> "PolyMatrix":
        return cls([[MultiPoly.one(nvars) if i == j else MultiPoly.zero(nvars) for j in range(n)] for i in range(n)])

    @classmethod
    def constant(cls, rows: Sequence[Sequence], nvars: int) -> "PolyMatrix":
        return cls([[MultiPoly.constant(nvars, x) for x in row] for row in rows])

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def is_square(self) -> bool:
        return self.rows == self.cols

    def transpose(self) -> "PolyMatrix":
        return PolyMatrix(list(zip(*self.entries)))

    def __add__(self, other: "PolyMatrix") -> "PolyMatrix":
        self._check_shape(other)
        return PolyMatrix([[a + b for a, b in zip(r1, r2)] for r1, r2 in zip(self.entries, other.entries)])

    def __sub__(self, other: "PolyMatrix") -> "PolyMatrix":
        self._check_shape(other)
        return PolyMatrix([[a - b for a, b in zip(r1, r2)] for r1, r2 in zip(self.entries, other.entries)])

    def __mul__(self, other):
        if isinstance(other, PolyMatrix):
            if self.cols != other.rows:
                raise ValueError("shape mismatch in PolyMatrix product")
            out = []
            for row in self.entries:
                new = []
                for j in range(other.cols):
                    acc = MultiPoly.zero(self.nvars)
                    for k, a in enumerate(row):
                        b = other.entries[k][j]
                        if a.terms and b.terms:
                            acc = acc + a * b
                    new.append(acc)
                out.append(new)
            return PolyMatrix(out)
        if isinstance(other, MultiPoly):
            return PolyMatrix([[a * other for a in row] for row in self.entries])
        return PolyMatrix([[a.scale(other) for a in row] for row in self.entries])

    def apply(self, vec: Sequence[MultiPoly]) -> list[MultiPoly]:
        """Matrix times a column of polynomials."""
        if len(vec) != self.cols:
            raise ValueError("vector length does not match column count")
        out = []
        for row in self.entries:
            acc = MultiPoly.zero(self.nvars)
            for a, v in zip(row, vec):
                if a.terms and v.terms:
                    acc = acc + a * v
            out.append(acc)
        return out

    def evaluate(self, point) -> list[list[GaussRational]]:
        return [[e.evaluate(point) for e in row] for row in self.entries]

    def substitute(self, images: Sequence[MultiPoly]) -> "PolyMatrix":
        cache: dict = {}
        return PolyMatrix([[e.substitute(images, cache) for e in row] for row in self.entries])

    def is_zero(self) -> bool:
        return all(not e.terms for row in self.entries for e in row)

    def _check_shape(self, other: "PolyMatrix") -> None:
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ValueError("shape mismatch")
        if self.nvars != other.nvars:
            raise ValueError("nvars mismatch")

    def __eq__(self, other):
        if not isinstance(other, PolyMatrix):
            return NotImplemented
        return self.entries == other.entries

    def __hash__(self):
        return hash(self.entries)

    def __repr__(self):
        body = "; ".join(", ".join(str(e) for e in row) for row in self.entries)
        return f"PolyMatrix([{body}])"

    # -- determinants ------------------------------------------------------
    def det(self) -> MultiPoly:
        return adjugate_det(self, need_adjugate=False)[1]

    def adjugate_det(self) -> tuple["PolyMatrix", MultiPoly]:
        return adjugate_det(self)


COFACTOR_LIMIT = 4


def adjugate_det(m: PolyMatrix, need_adjugate: bool = True) -> tuple[PolyMatrix | None, MultiPoly]:
    """Adjugate and determinant, with ``m * adj == det * Id``.

    Up to 4x4 this is memoised cofactor expansion; larger matrices use
    fraction-free (Bareiss) elimination for every minor.
    """
    if not m.is_square():
        raise ValueError("adjugate of a non-square matrix")
    n = m.rows
    nv = m.nvars
    if n == 1:
        return PolyMatrix([[MultiPoly.one(nv)]]), m.entries[0][0]
    if n <= COFACTOR_LIMIT:
        minor = _MinorCache(m)
        full = tuple(range(n))
        d = minor(full, full)
        if not need_adjugate:
            return None, d
        adj = [[None] * n for _ in range(n)]
        for i in range(n):
            rows = tuple(r for r in range(n) if r != i)
            for j in range(n):
                cols = tuple(c for c in range(n) if c != j)
                c = minor(rows, cols)
                adj[j][i] = -c if (i + j) % 2 else c
        return PolyMatrix(adj), d
    d = bareiss_det(m.entries)
    if not need_adjugate:
        return None, d
    adj = [[None] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            sub = [[m.entries[r][c] for c in range(n) if c != j] for r in range(n) if r != i]
            c = bareiss_det(sub)
            adj[j][i] = -c if (i + j) % 2 else c
    return PolyMatrix(adj), d


class _MinorCache:
    def __init__(self, m: PolyMatrix):
        self.m = m
        self.memo: dict = {}

    def __call__(self, rows: tuple, cols: tuple) -> MultiPoly:
        key = (rows, cols)
        hit = self.memo.get(key)
        if hit is not None:
            return hit
        ent = self.m.entries
        if len(rows) == 1:
            val = ent[rows[0]][cols[0]]
        else:
            r0 = rows[0]
            rest = rows[1:]
            val = MultiPoly.zero(self.m.nvars)
            for k, c in enumerate(cols):
                a = ent[r0][c]
                if not a.terms:
                    continue
                sub = self(rest, cols[:k] + cols[k + 1:])
                if not sub.terms:
                    continue
                term = a * sub
                val = val - term if k % 2 else val + term
        self.memo[key] = val
        return val


def bareiss_det(entries: Sequence[Sequence[MultiPoly]]) -> MultiPoly:
    """Fraction-free determinant; every division below is exact."""
    m = [list(row) for row in entries]
    n = len(m)
    nv = m[0][0].nvars
    sign = 1
    prev = MultiPoly.one(nv)
    for k in range(n - 1):
        if not m[k][k].terms:
            swap = next((i for i in range(k + 1, n) if m[i][k].terms), None)
            if swap is None:
                return MultiPoly.zero(nv)
            m[k], m[swap] = m[swap], m[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = m[i][j] * m[k][k] - m[i][k] * m[k][j]
                q = num.divide_exact(prev)
                if q is None:
                    raise ArithmeticError("Bareiss step was not exact")
                m[i][j] = q
        prev = m[k][k]
    d = m[n - 1][n - 1]
    return -d if sign < 0 else d
