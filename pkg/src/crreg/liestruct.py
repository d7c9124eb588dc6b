"""Structure of a finite-dimensional algebra of polynomial vector fields.

Structure constants, the grading by ``ad(eta)``, isotropy subalgebras and
the matrix of the pushforward ``xi -> g_* xi`` for a birational ``g``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from itertools import combinations
from typing import Sequence

from .birat import RationalMapQP
from .exact import ZERO, GaussRational, MultiPoly, gq, nullspace, rank, rref, solve
from .exact.linalg import InconsistentSystem, matmul
from .holsolver import LieAlgebraBasis, as_complex
from .manifolds import SamplingExhausted, random_gauss
from .vfields import FieldCoordinates, PolyVectorField, bracket, euler_field, evaluate_field, homogeneous_components


class NotClosedError(ValueError):
    """A bracket (or a homogeneous component) left the span of the basis."""


class GradingError(ValueError):
    pass


class IsotropyError(ValueError):
    pass


class NotPreservedError(ValueError):
    """``g_*`` maps some basis element outside the algebra."""


class PushforwardVerificationError(RuntimeError):
    pass


# ---------------------------------------------------------------------------
# Structure constants
# ---------------------------------------------------------------------------


@dataclass
class StructureConstants:
    dim: int
    tensor: list  # tensor[i][j][k]

    def bracket_coords(self, u: Sequence, v: Sequence) -> list[GaussRational]:
        out = [ZERO] * self.dim
        for i, ui in enumerate(u):
            if not ui:
                continue
            for j, vj in enumerate(v):
                if not vj or i == j:
                    continue
                s = ui * vj
                row = self.tensor[i][j]
                for k in range(self.dim):
                    if row[k]:
                        out[k] = out[k] + s * row[k]
        return out

    def is_antisymmetric(self) -> bool:
        t, r = self.tensor, range(self.dim)
        return all(t[i][j][k] == -t[j][i][k] for i in r for j in r for k in r)

    def jacobi_residual(self, a: int, b: int, c: int) -> list[GaussRational]:
        e = lambda i: [GaussRational(1) if k == i else ZERO for k in range(self.dim)]  # noqa: E731
        x, y, z = e(a), e(b), e(c)
        br = self.bracket_coords
        terms = (br(x, br(y, z)), br(y, br(z, x)), br(z, br(x, y)))
        return [p + q + s for p, q, s in zip(*terms)]

    def satisfies_jacobi(self) -> bool:
        return all(not any(self.jacobi_residual(a, b, c)) for a, b, c in combinations(range(self.dim), 3))

    def ad(self, i: int) -> list[list[GaussRational]]:
        """Matrix of ``ad(xi_i)`` acting on coordinate columns."""
        return [[self.tensor[i][j][k] for j in range(self.dim)] for k in range(self.dim)]

    def killing_form(self) -> list[list[GaussRational]]:
        ads = [self.ad(i) for i in range(self.dim)]
        out = []
        for i in range(self.dim):
            row = []
            for j in range(self.dim):
                prod = matmul(ads[i], ads[j])
                row.append(sum((prod[k][k] for k in range(self.dim)), ZERO))
            out.append(row)
        return out


def structure_constants(L: LieAlgebraBasis) -> StructureConstants:
    """Expand every bracket ``[xi_i, xi_j]`` in the basis ``L``."""
    dim = L.dim
    zero = [ZERO] * dim
    tensor = [[list(zero) for _ in range(dim)] for _ in range(dim)]
    for i in range(dim):
        for j in range(i + 1, dim):
            br = bracket(L[i], L[j])
            c = L.coordinates(br)
            if c is None:
                raise NotClosedError(f"[e{i}, e{j}] = {br.to_str()} is outside the span")
            tensor[i][j] = list(c)
            tensor[j][i] = [-x for x in c]
    return StructureConstants(dim, tensor)


def inertia(sym: Sequence[Sequence]) -> tuple[int, int, int]:
    """(positive, negative, zero) counts of a symmetric rational matrix, by congruence."""
    a = [[gq(x) for x in row] for row in sym]
    n = len(a)
    for x in range(n):
        for y in range(n):
            if not a[x][y].is_real():
                raise ValueError("matrix must be real")
    pos = neg = 0
    active = list(range(n))
    while active:
        piv = next((i for i in active if a[i][i]), None)
        if piv is None:
            pair = next(((i, j) for i in active for j in active if i != j and a[i][j]), None)
            if pair is None:
                break
            i, j = pair
            # row/col i += row/col j makes the diagonal entry 2 a_ij
            for k in range(n):
                a[i][k] = a[i][k] + a[j][k]
            for k in range(n):
                a[k][i] = a[k][i] + a[k][j]
            piv = i
        d = a[piv][piv]
        if d.re > 0:
            pos += 1
        else:
            neg += 1
        active.remove(piv)
        for r in active:
            f = a[r][piv] / d
            if f:
                for k in range(n):
                    a[r][k] = a[r][k] - f * a[piv][k]
        for r in active:
            a[piv][r] = ZERO
            a[r][piv] = ZERO
    return pos, neg, n - pos - neg


def killing_signature(B: LieAlgebraBasis) -> tuple[int, int, int]:
    """Inertia of the Killing form of a real basis (a diagnostic for the real form)."""
    if B.ground != "real":
        raise ValueError("signature needs a real basis")
    return inertia(structure_constants(B).killing_form())


# ---------------------------------------------------------------------------
# Grading
# ---------------------------------------------------------------------------


@dataclass
class GradedAlgebra:
    ambient_dim: int
    parts: dict  # weight -> tuple of PolyVectorField

    def dims(self) -> dict[int, int]:
        return {m: len(v) for m, v in sorted(self.parts.items())}

    def weights(self) -> list[int]:
        return sorted(self.parts)

    def basis(self) -> LieAlgebraBasis:
        elems = tuple(f for m in self.weights() for f in self.parts[m])
        return LieAlgebraBasis("complex", self.ambient_dim, None, elems)

    def part_basis(self, m: int) -> LieAlgebraBasis:
        return LieAlgebraBasis("complex", self.ambient_dim, None, self.parts.get(m, ()))

    def bracket_respects_grading(self) -> bool:
        """``[l^m, l^l]`` lies in ``l^{m+l}`` (zero when that part is absent)."""
        for m in self.weights():
            for l in self.weights():
                target = self.part_basis(m + l)
                for x in self.parts[m]:
                    for y in self.parts[l]:
                        br = bracket(x, y)
                        if br.is_zero():
                            continue
                        if not target.elements or not target.contains(br):
                            return False
        return True


def grade_by_euler(L: LieAlgebraBasis) -> GradedAlgebra:
    L = as_complex(L)
    n = L.ambient_dim
    if not L.contains(euler_field(n)):
        raise GradingError("the Euler field is not in the algebra")
    pieces: dict[int, list[PolyVectorField]] = {}
    for xi in L.elements:
        for m, part in homogeneous_components(xi):
            if not L.contains(part):
                raise GradingError(f"weight-{m} component {part.to_str()} escapes the algebra; raise the degree cap")
            pieces.setdefault(m, []).append(part)
    parts = {}
    for m, fields in sorted(pieces.items()):
        coords = FieldCoordinates.spanning(fields, n)
        red, _ = rref([coords.vector(f) for f in fields], len(coords))
        parts[m] = tuple(coords.field(v) for v in red)
    graded = GradedAlgebra(n, parts)
    if sum(graded.dims().values()) != L.dim:
        raise GradingError("weight spaces do not add up to the algebra")
    return graded


# ---------------------------------------------------------------------------
# Isotropy
# ---------------------------------------------------------------------------


@dataclass
class IsotropyBasis:
    base_point: tuple
    coefficient_rows: list  # rows in the coordinates of the parent basis
    elements: tuple

    @property
    def dim(self) -> int:
        return len(self.elements)


def evaluation_matrix(L: LieAlgebraBasis, a: Sequence) -> list[list[GaussRational]]:
    """``n x dim L``; column ``i`` is ``xi_i(a)``."""
    cols = [evaluate_field(xi, a) for xi in L.elements]
    return [[c[r] for c in cols] for r in range(L.ambient_dim)]


def isotropy_subalgebra(L: LieAlgebraBasis, a: Sequence) -> IsotropyBasis:
    L = as_complex(L)
    a = tuple(gq(x) for x in a)
    if len(a) != L.ambient_dim:
        raise ValueError("point dimension does not match the algebra")
    rows = nullspace(evaluation_matrix(L, a), L.dim)
    if L.dim - len(rows) != L.ambient_dim:
        raise IsotropyError(
            f"isotropy has codimension {L.dim - len(rows)}, expected {L.ambient_dim}; constants missing from the algebra?"
        )
    return IsotropyBasis(a, rows, tuple(L.combine(r) for r in rows))


# ---------------------------------------------------------------------------
# Pushforward
# ---------------------------------------------------------------------------


@dataclass
class PushforwardMatrix:
    matrix: list  # column i = coordinates of g_* xi_i
    map_ref: str = "g"
    samples_used: int = 0

    @property
    def dim(self) -> int:
        return len(self.matrix)

    def apply(self, vec: Sequence) -> list[GaussRational]:
        return [sum((r[j] * gq(vec[j]) for j in range(self.dim)), ZERO) for r in self.matrix]

    def __matmul__(self, other: "PushforwardMatrix") -> "PushforwardMatrix":
        return PushforwardMatrix(matmul(self.matrix, other.matrix), f"{self.map_ref}*{other.map_ref}")

    def preserves(self, sc: StructureConstants) -> bool:
        """``nu [e_i, e_j] = [nu e_i, nu e_j]`` for all basis pairs."""
        cols = [[row[i] for row in self.matrix] for i in range(self.dim)]
        for i in range(self.dim):
            for j in range(i + 1, self.dim):
                lhs = self.apply(sc.tensor[i][j])
                if lhs != sc.bracket_coords(cols[i], cols[j]):
                    return False
        return True

    def is_invertible(self) -> bool:
        return rank(self.matrix, self.dim) == self.dim


def _pushforward_samples(L: LieAlgebraBasis, g: RationalMapQP, seed: int, max_trials: int):
    rng = random.Random(seed)
    system, rhs_cols, used = [], [[] for _ in range(L.dim)], 0
    inv = g.inverse
    for _ in range(max_trials):
        if system and rank(system, L.dim) == L.dim:
            break
        s = [random_gauss(rng) for _ in range(g.n)]
        if not g.is_regular_at(s):
            continue
        p = g(s)
        if inv is not None and not inv.is_regular_at(p):
            continue
        used += 1
        qinv = g.derivative_at(s)
        vals_at_p = [evaluate_field(xi, p) for xi in L.elements]
        for r in range(g.n):
            system.append([v[r] for v in vals_at_p])
        for i, xi in enumerate(L.elements):
            pushed = [sum((qinv[r][c] * x for c, x in enumerate(evaluate_field(xi, s))), ZERO) for r in range(g.n)]
            rhs_cols[i].extend(pushed)
    if rank(system, L.dim) < L.dim:
        raise SamplingExhausted("sample points do not separate the basis")
    return system, rhs_cols, used


def _homogenized(xi: PolyVectorField, P: list[MultiPoly], D: MultiPoly, d: int, cache: dict) -> list[MultiPoly]:
    """``D^d * xi(P / D)`` as a polynomial vector."""
    n = xi.n
    dpow = cache.setdefault("D", [MultiPoly.one(n)])
    while len(dpow) <= d:
        dpow.append(dpow[-1] * D)
    out = []
    for comp in xi.components:
        acc = MultiPoly.zero(n)
        for e, c in comp.terms.items():
            key = ("m", e)
            mono = cache.get(key)
            if mono is None:
                mono = MultiPoly.one(n)
                for v, k in enumerate(e):
                    if k:
                        mono = mono * P[v] ** k
                cache[key] = mono
            acc = acc + (mono * dpow[d - sum(e)]).scale(c)
        out.append(acc)
    return out


def verify_pushforward(L: LieAlgebraBasis, g: RationalMapQP, nu: PushforwardMatrix) -> None:
    """Exact check that ``q(z) * zeta_i(g(z)) = xi_i(z)`` with ``zeta_i = sum_k nu[k][i] xi_k``."""
    P, D = g.numerators, g.det_q
    cache: dict = {}
    for i, xi in enumerate(L.elements):
        zeta = L.combine([row[i] for row in nu.matrix])
        if zeta.is_zero():
            raise PushforwardVerificationError(f"g_* annihilates basis element {i}")
        d = max(zeta.degree(), 0)
        lhs = g.q.apply(_homogenized(zeta, P, D, d, cache))
        dd = cache["D"][d]
        for r in range(g.n):
            if lhs[r] != dd * xi.components[r]:
                raise PushforwardVerificationError(f"pushforward of basis element {i} fails the exact identity")


def pushforward_matrix(
    L: LieAlgebraBasis, g: RationalMapQP, seed: int = 0, max_trials: int = 500, verify: bool = True
) -> PushforwardMatrix:
    """Matrix of ``xi -> g_* xi`` in the basis ``L``.

    Uses ``(g_* xi)(g(s)) = q(s)^{-1} xi(s)`` at sample points until the
    values separate the basis, then confirms the result symbolically.
    """
    L = as_complex(L)
    if L.ambient_dim != g.n:
        raise ValueError("map and algebra live on different spaces")
    system, rhs_cols, used = _pushforward_samples(L, g, seed, max_trials)
    cols = []
    for i, rhs in enumerate(rhs_cols):
        try:
            cols.append(solve(system, rhs))
        except InconsistentSystem:
            raise NotPreservedError(f"g_* of basis element {i} is not in the algebra") from None
    matrix = [[cols[i][k] for i in range(L.dim)] for k in range(L.dim)]
    nu = PushforwardMatrix(matrix, g.label(), used)
    if verify:
        try:
            verify_pushforward(L, g, nu)
        except PushforwardVerificationError as exc:
            raise NotPreservedError(str(exc)) from None
    return nu


def pushforward_field(L: LieAlgebraBasis, nu: PushforwardMatrix, xi: PolyVectorField) -> PolyVectorField:
    L = as_complex(L)
    c = L.coordinates(xi)
    if c is None:
        raise ValueError("field is not in the algebra")
    return L.combine(nu.apply(c))


__all__ = [
    "StructureConstants",
    "structure_constants",
    "NotClosedError",
    "GradedAlgebra",
    "GradingError",
    "grade_by_euler",
    "IsotropyBasis",
    "IsotropyError",
    "isotropy_subalgebra",
    "evaluation_matrix",
    "PushforwardMatrix",
    "NotPreservedError",
    "pushforward_matrix",
    "pushforward_field",
    "verify_pushforward",
    "inertia",
    "killing_signature",
]
