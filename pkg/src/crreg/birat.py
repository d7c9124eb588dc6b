"""Birational maps in the normal form ``g(z) = q(z)^{-1} p(z)``.

Given a map symbolically, :func:`pullback_pq` recovers the polynomial data
from ``g^*(eta) = p(z) d/dz`` and ``g^*(alpha d/dz) = (q(z) alpha) d/dz``,
i.e. ``q = g'^{-1}`` and ``p = q g``.  :func:`reconstruct_from_pq` goes back.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence

from .exact import (
    ZERO,
    GaussRational,
    MultiPoly,
    PolyMatrix,
    RationalFunction,
    adjugate_det,
    common_denominator,
    compose_rational,
    poly_lcm,
)
from .exact.linalg import inverse as matrix_inverse
from .exact.linalg import matvec
from .manifolds import ManifoldSpec, SamplingExhausted, membership, random_gauss, sample_points


class NonPolynomialError(ValueError):
    """``p`` or ``q`` is not polynomial; the map does not preserve any polynomial algebra containing the solvable one."""

    def __init__(self, what: str, fraction: RationalFunction):
        super().__init__(f"{what} is not polynomial: {fraction.to_str()}")
        self.what = what
        self.fraction = fraction


class InconsistentPQ(ValueError):
    """``(p, q)`` does not come from a genuine pullback: ``g' != q^{-1}`` somewhere."""


class OutsideRegularSet(ValueError):
    pass


@dataclass(frozen=True)
class RationalMap:
    """A rational self-map of C^n given by its components."""

    components: tuple

    def __post_init__(self):
        comps = tuple(c if isinstance(c, RationalFunction) else RationalFunction.from_poly(c) for c in self.components)
        n = len(comps)
        if n == 0 or any(c.nvars != n for c in comps):
            raise ValueError("a rational self-map of C^n needs n components in n variables")
        object.__setattr__(self, "components", comps)

    @property
    def n(self) -> int:
        return len(self.components)

    def __call__(self, point: Sequence) -> list[GaussRational]:
        return [c.evaluate(point) for c in self.components]

    def jacobian(self) -> list[list[RationalFunction]]:
        return [[c.diff(j) for j in range(self.n)] for c in self.components]

    def equals(self, other: "RationalMap") -> bool:
        """Identity of rational maps by cross-multiplication."""
        return self.n == other.n and all(a == b for a, b in zip(self.components, other.components))

    def __repr__(self):
        return f"RationalMap({[c.to_str() for c in self.components]})"


@dataclass(frozen=True, eq=False)
class RationalMapQP:
    p: tuple
    q: PolyMatrix
    inverse: "RationalMapQP | None" = None
    name: str = ""

    def __post_init__(self):
        p = tuple(self.p)
        object.__setattr__(self, "p", p)
        n = len(p)
        if self.q.rows != n or self.q.cols != n:
            raise ValueError("q must be an n x n matrix")
        if any(x.nvars != n for x in p) or self.q.nvars != n:
            raise ValueError("p and q must be polynomials in n variables")
        if self.det_q.is_zero():
            raise ValueError("det q vanishes identically")

    @property
    def n(self) -> int:
        return len(self.p)

    @cached_property
    def _adj_det(self):
        return adjugate_det(self.q)

    @property
    def det_q(self) -> MultiPoly:
        return self._adj_det[1]

    @property
    def adj_q(self) -> PolyMatrix:
        return self._adj_det[0]

    @cached_property
    def numerators(self) -> list[MultiPoly]:
        """``adj(q) p``, so that ``g = numerators / det q``."""
        return self.adj_q.apply(list(self.p))

    @cached_property
    def components(self) -> RationalMap:
        d = self.det_q
        return RationalMap(tuple(RationalFunction(num, d) for num in self.numerators))

    def is_regular_at(self, point: Sequence) -> bool:
        return bool(self.det_q.evaluate(point))

    def __call__(self, point: Sequence) -> list[GaussRational]:
        d = self.det_q.evaluate(point)
        if not d:
            raise OutsideRegularSet("det q vanishes at the point")
        return [num.evaluate(point) / d for num in self.numerators]

    def derivative_at(self, point: Sequence) -> list[list[GaussRational]]:
        """``g'(a) = q(a)^{-1}``."""
        return matrix_inverse(self.q.evaluate(point))

    def with_inverse(self, inv: "RationalMapQP") -> "RationalMapQP":
        return RationalMapQP(self.p, self.q, inv, self.name)

    def label(self) -> str:
        return self.name or "g"


# ---------------------------------------------------------------------------
# (p, q) extraction and reconstruction
# ---------------------------------------------------------------------------


def jacobian_over_common_denominator(g: RationalMap) -> tuple[PolyMatrix, MultiPoly]:
    """``g' = Jnum / D`` with a polynomial matrix ``Jnum``."""
    nums, den = common_denominator(list(g.components))
    n = g.n
    dden = [den.diff(l) for l in range(n)]
    rows = []
    for num in nums:
        rows.append([num.diff(l) * den - num * dden[l] for l in range(n)])
    return PolyMatrix(rows), den * den


def pullback_pq(g: RationalMap, name: str = "", inverse: RationalMapQP | None = None) -> RationalMapQP:
    """``q = g'^{-1}`` and ``p = q g``, both checked to be polynomial."""
    jnum, D = jacobian_over_common_denominator(g)
    adj, detj = adjugate_det(jnum)
    if detj.is_zero():
        raise ValueError("Jacobian determinant vanishes identically; g is not birational")
    n = g.n
    q_rows = []
    for i in range(n):
        row = []
        for j in range(n):
            top = D * adj[i, j]
            entry = top.divide_exact(detj)
            if entry is None:
                raise NonPolynomialError(f"q[{i}][{j}]", RationalFunction(top, detj))
            row.append(entry)
        q_rows.append(row)
    q = PolyMatrix(q_rows)
    nums, den = common_denominator(list(g.components))
    p = []
    for i, top in enumerate(q.apply(nums)):
        entry = top.divide_exact(den)
        if entry is None:
            raise NonPolynomialError(f"p[{i}]", RationalFunction(top, den))
        p.append(entry)
    return RationalMapQP(tuple(p), q, inverse, name)


def reconstruct_from_pq(
    p: Sequence[MultiPoly], q: PolyMatrix, checks: int = 10, seed: int = 0, name: str = ""
) -> RationalMapQP:
    """Assemble ``q^{-1} p`` and verify ``g' = q^{-1}`` at seeded regular points."""
    g = RationalMapQP(tuple(p), q, None, name)
    verify_derivative_identity(g, checks, seed)
    return g


def regular_points(g: RationalMapQP, count: int, seed: int = 0, max_trials: int = 1000) -> list[list[GaussRational]]:
    rng = random.Random(seed)
    out = []
    for _ in range(max_trials):
        if len(out) == count:
            break
        pt = [random_gauss(rng) for _ in range(g.n)]
        if g.is_regular_at(pt):
            out.append(pt)
    if len(out) < count:
        raise SamplingExhausted("could not find enough regular points")
    return out


def verify_derivative_identity(g: RationalMapQP, checks: int = 10, seed: int = 0) -> int:
    """Symbolic derivative of ``q^{-1}p`` equals ``q^{-1}`` at ``checks`` points."""
    jac = g.components.jacobian()
    for pt in regular_points(g, checks, seed):
        expected = g.derivative_at(pt)
        for i in range(g.n):
            for j in range(g.n):
                if jac[i][j].evaluate(pt) != expected[i][j]:
                    raise InconsistentPQ(
                        f"g'[{i}][{j}] != q^-1[{i}][{j}] at {[str(x) for x in pt]}"
                    )
    return checks


def regular_set(g: RationalMapQP) -> MultiPoly:
    """``det q``; the regular set is where it does not vanish."""
    return g.det_q


def exact_denominator(g: RationalMapQP) -> MultiPoly:
    """Least common denominator of the reduced components (may be smaller than ``det q``)."""
    den = MultiPoly.one(g.n)
    for c in g.components.components:
        den = poly_lcm(den, c.den)
    return den


def denominator_contract_holds(g: RationalMapQP) -> bool:
    """``(det q) * g`` is a polynomial map."""
    d = g.det_q
    return all((d * c.num).divide_exact(c.den) is not None for c in g.components.components)


def as_rational_map(g) -> RationalMap:
    return g.components if isinstance(g, RationalMapQP) else g


def compose(g1, g2, name: str = "", with_inverse: bool = True) -> RationalMapQP:
    """``g1 o g2`` with ``(p, q)`` re-extracted from the composite."""
    r1, r2 = as_rational_map(g1), as_rational_map(g2)
    if r1.n != r2.n:
        raise ValueError("dimension mismatch")
    comps = tuple(compose_rational(c, list(r2.components)) for c in r1.components)
    inv = None
    if with_inverse and isinstance(g1, RationalMapQP) and isinstance(g2, RationalMapQP):
        if g1.inverse is not None and g2.inverse is not None:
            inv = compose(g2.inverse, g1.inverse, with_inverse=False)
    return pullback_pq(RationalMap(comps), name=name, inverse=inv)


def pullback_composition_consistent(g1: RationalMapQP, g2: RationalMapQP, points: Sequence) -> bool:
    """``q_{g1 o g2}(z) = q_{g2}(z) q_{g1}(g2 z)`` and ``p_{g1 o g2}(z) = q_{g2}(z) p_{g1}(g2 z)``."""
    c = compose(g1, g2, with_inverse=False)
    for z in points:
        if not g2.is_regular_at(z):
            continue
        gz = g2(z)
        q2 = g2.q.evaluate(z)
        q1 = g1.q.evaluate(gz)
        prod = [[sum((q2[i][k] * q1[k][j] for k in range(c.n)), ZERO) for j in range(c.n)] for i in range(c.n)]
        if prod != c.q.evaluate(z):
            return False
        p1 = [x.evaluate(gz) for x in g1.p]
        if matvec(q2, p1) != [x.evaluate(z) for x in c.p]:
            return False
    return True


# ---------------------------------------------------------------------------
# Orbit consistency
# ---------------------------------------------------------------------------


@dataclass
class OrbitReport:
    checked: int
    passed: bool
    witnesses: list = field(default_factory=list)
    inverse_checked: bool = True
    note: str = "sampling check on exact rational points, not a proof"


def orbit_consistency(M: ManifoldSpec, g: RationalMapQP, count: int = 20, seed: int = 0) -> OrbitReport:
    """Check ``g(M & reg g) in M & reg g^{-1}`` on ``count`` sampled points."""
    pts = []
    pool = sample_points(M, 4 * count + 8, seed)
    for pt in pool:
        if g.is_regular_at(pt):
            pts.append(pt)
        if len(pts) == count:
            break
    if len(pts) < count:
        raise SamplingExhausted("not enough sample points in the regular set of g")
    witnesses = []
    inv = g.inverse
    for pt in pts:
        img = g(pt)
        reasons = []
        if not membership(M, img):
            reasons.append("image not on M")
        if inv is not None and not inv.is_regular_at(img):
            reasons.append("image outside reg(g^-1)")
        if reasons:
            witnesses.append({"point": pt, "image": img, "reason": "; ".join(reasons)})
    return OrbitReport(len(pts), not witnesses, witnesses, inv is not None)


__all__ = [
    "RationalMap",
    "RationalMapQP",
    "NonPolynomialError",
    "InconsistentPQ",
    "OutsideRegularSet",
    "pullback_pq",
    "reconstruct_from_pq",
    "verify_derivative_identity",
    "regular_set",
    "exact_denominator",
    "denominator_contract_holds",
    "compose",
    "pullback_composition_consistent",
    "orbit_consistency",
    "OrbitReport",
]
