"""Infinitesimal CR-automorphisms of bounded degree.

:func:`solve_hol` sets every complex coefficient of a degree-``<= d`` field
free (real and imaginary parts separately), demands that the tangency
residual vanish, and solves the resulting linear system over Q.  The
kernel, in reduced row echelon form, is the canonical basis of hol(M)
truncated at degree ``d``.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Sequence

from .exact import ONE, I, GaussRational, SpanReducer, gq, nullspace, rank, rref
from .manifolds import ManifoldSpec, QuadricSpec, TubeSpec, check_hermitian_nondegenerate, check_tube_conditions, membership, residual_operator
from .vfields import FieldCoordinates, PolyVectorField, bracket, euler_field, evaluate_field

log = logging.getLogger(__name__)


class NotOnManifold(ValueError):
    pass


@dataclass
class LieAlgebraBasis:
    ground: str
    ambient_dim: int
    degree_cap: int | None
    elements: tuple
    closed: bool | None = None
    _coords: FieldCoordinates | None = field(default=None, repr=False, compare=False)
    _reducer: SpanReducer | None = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        if self.ground not in ("real", "complex"):
            raise ValueError("ground must be 'real' or 'complex'")
        self.elements = tuple(self.elements)
        if any(e.n != self.ambient_dim for e in self.elements):
            raise ValueError("basis element dimension does not match ambient_dim")

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __getitem__(self, i):
        return self.elements[i]

    @property
    def dim(self) -> int:
        return len(self.elements)

    def coords(self) -> FieldCoordinates:
        if self._coords is None:
            self._coords = FieldCoordinates.spanning(self.elements, self.ambient_dim) if self.elements else FieldCoordinates(self.ambient_dim, [])
        return self._coords

    def _vec(self, xi: PolyVectorField):
        c = self.coords()
        return c.real_vector(xi) if self.ground == "real" else c.vector(xi)

    def reducer(self) -> SpanReducer:
        if self._reducer is None:
            c = self.coords()
            width = 2 * len(c) if self.ground == "real" else len(c)
            self._reducer = SpanReducer([self._vec(e) for e in self.elements], width)
        return self._reducer

    def contains(self, xi: PolyVectorField) -> bool:
        if not self.coords().covers(xi):
            return False
        return self.reducer().contains(self._vec(xi))

    def coordinates(self, xi: PolyVectorField) -> list[GaussRational] | None:
        """Coefficients of ``xi`` in this basis (``None`` when outside the span)."""
        if not self.coords().covers(xi):
            return None
        return self.reducer().coordinates(self._vec(xi))

    def combine(self, coeffs: Sequence) -> PolyVectorField:
        total = PolyVectorField.zero(self.ambient_dim)
        for c, e in zip(coeffs, self.elements):
            c = gq(c)
            if c:
                total = total + e.scale(c)
        return total

    def is_bracket_closed(self) -> bool:
        for i, a in enumerate(self.elements):
            for b in self.elements[i + 1:]:
                if not self.contains(bracket(a, b)):
                    return False
        return True


@dataclass(frozen=True)
class SolvableWitness:
    constants_present: bool
    euler_present: bool

    @property
    def passed(self) -> bool:
        return self.constants_present and self.euler_present


def hol_constraint_matrix(M: ManifoldSpec, degree_cap: int):
    """Real constraint matrix; columns are (re, im) parts of each coefficient."""
    n = M.ambient_dim
    coords = FieldCoordinates.up_to_degree(n, degree_cap)
    residual = residual_operator(M)
    columns = []
    for key in coords.keys:
        for unit in (ONE, I):
            xi = PolyVectorField.from_terms(n, {key: unit})
            col = {}
            for j, r in enumerate(residual(xi)):
                for e, c in r.terms.items():
                    col[(j, e)] = c
            columns.append(col)
    row_keys = sorted({k for col in columns for k in col})
    rows = [[col.get(k, 0) for col in columns] for k in row_keys]
    return coords, rows


def solve_hol(M: ManifoldSpec, degree_cap: int = 2, check_closure: bool = True) -> LieAlgebraBasis:
    """Real basis of the polynomial fields of degree ``<= degree_cap`` tangent to ``M``."""
    if degree_cap < 1:
        raise ValueError("degree_cap must be at least 1")
    coords, rows = hol_constraint_matrix(M, degree_cap)
    kernel = nullspace(rows, 2 * len(coords))
    elements = tuple(coords.field_from_real(v) for v in kernel)
    basis = LieAlgebraBasis("real", M.ambient_dim, degree_cap, elements)
    if check_closure:
        basis.closed = basis.is_bracket_closed()
        if not basis.closed:
            log.warning("hol(M) truncated at degree %d is not bracket-closed; raise the cap", degree_cap)
    return basis


@dataclass(frozen=True)
class StabilizationReport:
    degree_cap: int
    dim: int
    next_dim: int

    @property
    def stable(self) -> bool:
        return self.dim == self.next_dim


def solve_hol_stabilized(M: ManifoldSpec, degree_cap: int = 2) -> tuple[LieAlgebraBasis, StabilizationReport]:
    """Solve at ``d`` and ``d + 1``; a heuristic, not a certificate of the true dimension."""
    basis = solve_hol(M, degree_cap)
    bigger = solve_hol(M, degree_cap + 1, check_closure=False)
    return basis, StabilizationReport(degree_cap, basis.dim, bigger.dim)


def complexify(B: LieAlgebraBasis) -> tuple[LieAlgebraBasis, bool]:
    """Complex span of a real basis, and whether ``B`` is totally real."""
    if not B.elements:
        raise ValueError("cannot complexify an empty basis")
    coords = B.coords()
    red, _ = rref([coords.vector(e) for e in B.elements], len(coords))
    elements = tuple(coords.field(v) for v in red)
    L = LieAlgebraBasis("complex", B.ambient_dim, B.degree_cap, elements, closed=B.closed)
    return L, len(elements) == len(B.elements)


def as_complex(B: LieAlgebraBasis) -> LieAlgebraBasis:
    return B if B.ground == "complex" else complexify(B)[0]


def check_property_p(L: LieAlgebraBasis) -> SolvableWitness:
    L = as_complex(L)
    n = L.ambient_dim
    constants = all(L.contains(PolyVectorField.unit(n, j)) for j in range(n))
    return SolvableWitness(constants, L.contains(euler_field(n)))


def check_semi_homogeneous(M: ManifoldSpec, B: LieAlgebraBasis, a: Sequence) -> bool:
    """Do the values ``xi(a)`` span all of E over C?"""
    if not membership(M, a):
        raise NotOnManifold(f"point {list(map(str, a))} is not on the manifold")
    values = [evaluate_field(xi, a) for xi in B.elements]
    return bool(values) and rank(values, B.ambient_dim) == B.ambient_dim


def check_holomorphic_nondegenerate(B: LieAlgebraBasis) -> bool:
    """Totally real capped algebra (``B`` meets ``i B`` only in 0)."""
    return complexify(B)[1]


def shifted_euler(a: Sequence) -> PolyVectorField:
    """``(z - a) d/dz``."""
    n = len(a)
    eta = euler_field(n)
    return eta - PolyVectorField.constant(a)


@dataclass(frozen=True)
class SufficientConditions:
    holomorphically_nondegenerate: bool
    minimal: bool
    semi_homogeneous: bool
    shifted_euler_present: bool

    @property
    def passed(self) -> bool:
        return all((self.holomorphically_nondegenerate, self.minimal, self.semi_homogeneous, self.shifted_euler_present))


def check_sufficient_conditions(M: ManifoldSpec, a: Sequence, degree_cap: int = 2, basis: LieAlgebraBasis | None = None) -> SufficientConditions:
    """The four desk-checkable conditions that together imply Property (P).

    Minimality is read off the data: condition (i) on the Hermitian form
    for quadrics, the affine-hyperplane test for tubes.
    """
    B = basis if basis is not None else solve_hol(M, degree_cap, check_closure=False)
    L, totally_real = complexify(B)
    if isinstance(M, QuadricSpec):
        minimal = check_hermitian_nondegenerate(M.form).independent
    elif isinstance(M, TubeSpec):
        minimal = check_tube_conditions(M).not_in_hyperplane
    else:
        raise TypeError(f"unsupported manifold type {type(M).__name__}")
    return SufficientConditions(
        totally_real,
        minimal,
        check_semi_homogeneous(M, B, a),
        L.contains(shifted_euler([gq(x) for x in a])),
    )
