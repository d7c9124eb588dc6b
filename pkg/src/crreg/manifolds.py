"""Quadrics ``Im w = h(z, z)`` and polynomial tube manifolds ``F + i R^n``.

The central operation is :func:`tangency_residual`: a holomorphic field
``xi`` is an infinitesimal CR-automorphism exactly when every residual
polynomial vanishes identically.

Quadric residuals are written in the real variables ``(x, y, u)`` with
``z = x + i y`` and ``w = u + i h(z, z)``, which parameterize the quadric.
Tube residuals live in ``(x, y)`` and are reduced modulo the cone equation.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from math import isqrt
from typing import Sequence

from .exact import ONE, ZERO, GaussRational, I, MultiPoly, gq, nullspace, rank, reduce_mod
from .vfields import PolyVectorField


class SamplingExhausted(RuntimeError):
    """No (or not enough) exact points were found within the trial budget."""


class ManifoldError(ValueError):
    """Invalid manifold description."""


def random_rational(rng: random.Random, size: int = 6, max_den: int = 4) -> Fraction:
    return Fraction(rng.randint(-size, size), rng.randint(1, max_den))


def random_gauss(rng: random.Random, size: int = 6, max_den: int = 4) -> GaussRational:
    return GaussRational(random_rational(rng, size, max_den), random_rational(rng, size, max_den))


# ---------------------------------------------------------------------------
# Hermitian forms
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class HermitianFormTuple:
    """``k`` Hermitian ``n x n`` matrices; ``h_j(z, z') = z'^* H_j z``."""

    n: int
    k: int
    matrices: tuple

    def __post_init__(self):
        mats = tuple(tuple(tuple(gq(x) for x in row) for row in m) for m in self.matrices)
        if len(mats) != self.k:
            raise ManifoldError(f"expected {self.k} matrices, got {len(mats)}")
        for j, m in enumerate(mats):
            if len(m) != self.n or any(len(row) != self.n for row in m):
                raise ManifoldError(f"matrix {j} is not {self.n}x{self.n}")
            for a in range(self.n):
                for b in range(self.n):
                    if m[a][b] != m[b][a].conjugate():
                        raise ManifoldError(f"matrix {j} is not Hermitian at ({a}, {b})")
        object.__setattr__(self, "matrices", mats)

    @classmethod
    def single(cls, matrix) -> "HermitianFormTuple":
        return cls(len(matrix), 1, (matrix,))

    def value(self, z: Sequence, zp: Sequence) -> list[GaussRational]:
        """``h(z, z')``: linear in ``z``, conjugate-linear in ``z'``."""
        z = [gq(x) for x in z]
        zp = [gq(x) for x in zp]
        out = []
        for m in self.matrices:
            s = ZERO
            for a in range(self.n):
                ca = zp[a].conjugate()
                if not ca:
                    continue
                for b in range(self.n):
                    if m[a][b] and z[b]:
                        s = s + ca * m[a][b] * z[b]
            out.append(s)
        return out


@dataclass(frozen=True)
class NondegeneracyReport:
    independent: bool
    joint_kernel_trivial: bool
    relation: tuple | None = None  # real c with sum c_j H_j = 0
    kernel_vector: tuple | None = None  # z with H_j z = 0 for all j

    @property
    def passed(self) -> bool:
        return self.independent and self.joint_kernel_trivial


def check_hermitian_nondegenerate(h: HermitianFormTuple) -> NondegeneracyReport:
    # (i): independence over R of the matrices viewed as real 2n^2-vectors
    real_rows = []
    for m in h.matrices:
        row = []
        for r in m:
            for x in r:
                row.extend([GaussRational(x.re), GaussRational(x.im)])
        real_rows.append(row)
    relations = nullspace([list(col) for col in zip(*real_rows)], h.k)
    # (ii): h(z, .) == 0 iff H_j z == 0 for all j
    stacked = [list(r) for m in h.matrices for r in m]
    kernel = nullspace(stacked, h.n)
    return NondegeneracyReport(
        not relations,
        not kernel,
        tuple(relations[0]) if relations else None,
        tuple(kernel[0]) if kernel else None,
    )


# ---------------------------------------------------------------------------
# Manifold descriptors
# ---------------------------------------------------------------------------


class ManifoldSpec:
    """Common interface of :class:`QuadricSpec` and :class:`TubeSpec`."""

    kind: str

    @property
    def ambient_dim(self) -> int:
        raise NotImplementedError

    def real_variable_names(self) -> list[str]:
        raise NotImplementedError


@dataclass(frozen=True)
class QuadricSpec(ManifoldSpec):
    form: HermitianFormTuple
    kind: str = field(default="quadric", init=False)

    @property
    def n(self) -> int:
        return self.form.n

    @property
    def k(self) -> int:
        return self.form.k

    @property
    def ambient_dim(self) -> int:
        return self.form.n + self.form.k

    def real_variable_names(self) -> list[str]:
        n, k = self.n, self.k
        return [f"x{i + 1}" for i in range(n)] + [f"y{i + 1}" for i in range(n)] + [f"u{j + 1}" for j in range(k)]

    def point(self, z: Sequence, u: Sequence) -> list[GaussRational]:
        """The point ``(z, u + i h(z, z))`` of the quadric."""
        hz = self.form.value(z, z)
        return [gq(x) for x in z] + [gq(uj) + I * hj for uj, hj in zip(u, hz)]


@dataclass(frozen=True)
class TubeSpec(ManifoldSpec):
    n: int
    rho: MultiPoly
    monic_var: int
    require_cone: bool = True
    kind: str = field(default="tube", init=False)

    def __post_init__(self):
        if self.rho.nvars != self.n:
            raise ManifoldError(f"rho must be a polynomial in {self.n} variables")
        if not self.rho.is_real():
            raise ManifoldError("rho must have real coefficients")
        if not 0 <= self.monic_var < self.n:
            raise ManifoldError("monic_var out of range")
        if self.rho.degree_in(self.monic_var) != 2:
            raise ManifoldError("rho must have degree 2 in monic_var")
        try:
            reduce_mod(MultiPoly.zero(self.n), self.rho, self.monic_var)
        except ValueError as exc:
            raise ManifoldError(str(exc)) from None
        if self.require_cone and not self.rho.is_homogeneous():
            raise ManifoldError("rho must be homogeneous (the base must be a cone)")

    @classmethod
    def hyperquadric(cls, p: int, q: int) -> "TubeSpec":
        """Tube over ``x_1^2 + ... + x_p^2 = x_{p+1}^2 + ... + x_n^2``."""
        n = p + q
        xs = MultiPoly.gens(n)
        rho = MultiPoly.zero(n)
        for i, x in enumerate(xs):
            rho = rho + (x * x if i < p else -(x * x))
        return cls(n, rho, n - 1)

    @property
    def ambient_dim(self) -> int:
        return self.n

    def real_variable_names(self) -> list[str]:
        return [f"x{i + 1}" for i in range(self.n)] + [f"y{i + 1}" for i in range(self.n)]


# ---------------------------------------------------------------------------
# Tangency
# ---------------------------------------------------------------------------


class _QuadricResidual:
    def __init__(self, spec: QuadricSpec):
        n, k = spec.n, spec.k
        nv = 2 * n + k
        self.nv = nv
        gens = MultiPoly.gens(nv)
        zs = [gens[l] + gens[n + l].scale(I) for l in range(n)]
        zbars = [gens[l] - gens[n + l].scale(I) for l in range(n)]
        self.hcoef = []  # hcoef[j][b] = sum_a conj(z_a) H_j[a][b]
        ws = []
        for j, m in enumerate(spec.form.matrices):
            row = []
            for b in range(n):
                acc = MultiPoly.zero(nv)
                for a in range(n):
                    if m[a][b]:
                        acc = acc + zbars[a].scale(m[a][b])
                row.append(acc)
            self.hcoef.append(row)
            hzz = MultiPoly.zero(nv)
            for b in range(n):
                hzz = hzz + row[b] * zs[b]
            ws.append(gens[2 * n + j] + hzz.scale(I))
        self.images = zs + ws
        self.n, self.k = n, k
        self.cache: dict = {}

    def __call__(self, xi: PolyVectorField) -> list[MultiPoly]:
        n, k = self.n, self.k
        if xi.n != n + k:
            raise ValueError(f"field lives on C^{xi.n}, quadric on C^{n + k}")
        subs = [c.substitute(self.images, self.cache) for c in xi.components]
        out = []
        for j in range(k):
            res = subs[n + j].imag_part()
            acc = MultiPoly.zero(self.nv)
            for b in range(n):
                if subs[b].terms:
                    acc = acc + self.hcoef[j][b] * subs[b]
            out.append(res - acc.real_part().scale(2))
        return out


class _TubeResidual:
    def __init__(self, spec: TubeSpec):
        n = spec.n
        nv = 2 * n
        gens = MultiPoly.gens(nv)
        self.images = [gens[l] + gens[n + l].scale(I) for l in range(n)]
        slots = list(range(n))
        self.rho = spec.rho.embed(nv, slots)
        self.grad = [spec.rho.diff(j).embed(nv, slots) for j in range(n)]
        self.var = spec.monic_var
        self.n = n
        self.nv = nv
        self.cache: dict = {}

    def __call__(self, xi: PolyVectorField) -> list[MultiPoly]:
        if xi.n != self.n:
            raise ValueError(f"field lives on C^{xi.n}, tube on C^{self.n}")
        acc = MultiPoly.zero(self.nv)
        for g, c in zip(self.grad, xi.components):
            if c.terms and g.terms:
                acc = acc + g * c.substitute(self.images, self.cache).real_part()
        return [reduce_mod(acc, self.rho, self.var)]


_RESIDUAL_CACHE: dict = {}


def residual_operator(M: ManifoldSpec):
    """A callable ``xi -> residual list`` with a shared substitution cache."""
    key = id(M)
    hit = _RESIDUAL_CACHE.get(key)
    if hit is not None and hit[0] is M:
        return hit[1]
    if isinstance(M, QuadricSpec):
        op = _QuadricResidual(M)
    elif isinstance(M, TubeSpec):
        op = _TubeResidual(M)
    else:
        raise TypeError(f"unsupported manifold type {type(M).__name__}")
    if len(_RESIDUAL_CACHE) > 32:
        _RESIDUAL_CACHE.clear()
    _RESIDUAL_CACHE[key] = (M, op)
    return op


def tangency_residual(M: ManifoldSpec, xi: PolyVectorField) -> list[MultiPoly]:
    """Real polynomials that vanish identically iff ``xi`` is tangent to ``M``."""
    return residual_operator(M)(xi)


def is_tangent(M: ManifoldSpec, xi: PolyVectorField) -> bool:
    return all(r.is_zero() for r in tangency_residual(M, xi))


# ---------------------------------------------------------------------------
# Points
# ---------------------------------------------------------------------------


def membership(M: ManifoldSpec, point: Sequence) -> bool:
    pt = [gq(x) for x in point]
    if len(pt) != M.ambient_dim:
        return False
    if isinstance(M, QuadricSpec):
        n = M.n
        z, w = pt[:n], pt[n:]
        hz = M.form.value(z, z)
        return all(wj.im == hj.re and hj.is_real() for wj, hj in zip(w, hz))
    if isinstance(M, TubeSpec):
        x = [GaussRational(c.re) for c in pt]
        if not any(x):
            return False
        return not M.rho.evaluate(x)
    raise TypeError(f"unsupported manifold type {type(M).__name__}")


def sample_points(M: ManifoldSpec, count: int, seed: int = 0, max_trials: int = 2000) -> list[list[GaussRational]]:
    """``count`` exact points of ``M``, deterministic in ``seed``."""
    if count < 0:
        raise ValueError("count must be non-negative")
    rng = random.Random(seed)
    if count == 0:
        return []
    if isinstance(M, QuadricSpec):
        out = []
        for _ in range(count):
            z = [random_gauss(rng) for _ in range(M.n)]
            u = [random_rational(rng) for _ in range(M.k)]
            out.append(M.point(z, u))
        return out
    if isinstance(M, TubeSpec):
        bases = sample_base_points(M, count, rng, max_trials)
        return [[GaussRational(x.re, random_rational(rng)) for x in b] for b in bases]
    raise TypeError(f"unsupported manifold type {type(M).__name__}")


def sample_base_points(T: TubeSpec, count: int, rng: random.Random, max_trials: int = 2000) -> list[list[GaussRational]]:
    """Distinct smooth rational points of ``{rho = 0} \\ {0}``."""
    grad = [T.rho.diff(j) for j in range(T.n)]

    def smooth(x):
        return any(x) and any(g.evaluate(x) for g in grad)

    out: list[list[GaussRational]] = []
    seen = set()
    if T.rho.degree() == 2:
        base = _find_integer_point(T, smooth)
        if base is None:
            raise SamplingExhausted("no rational base point found on the tube base")
        quad = T.rho.homogeneous_parts().get(2)
        grad_base = [g.evaluate(base) for g in grad]
        trials = 0
        while len(out) < count:
            trials += 1
            if trials > max_trials:
                raise SamplingExhausted(f"found {len(out)} of {count} base points in {max_trials} trials")
            d = [GaussRational(random_rational(rng)) for _ in range(T.n)]
            qd = quad.evaluate(d)
            if not qd:
                continue
            lin = sum((g * di for g, di in zip(grad_base, d)), ZERO)
            t = -lin / qd
            x = [b + t * di for b, di in zip(base, d)]
            key = tuple(c.key() for c in x)
            if key in seen or not smooth(x):
                continue
            seen.add(key)
            out.append(x)
        return out
    # general case: random values for the other coordinates, rational root in monic_var
    v = T.monic_var
    others = [i for i in range(T.n) if i != v]
    trials = 0
    while len(out) < count:
        trials += 1
        if trials > max_trials:
            raise SamplingExhausted(f"found {len(out)} of {count} base points in {max_trials} trials")
        vals = {i: GaussRational(random_rational(rng)) for i in others}
        for root in _rational_roots_in(T.rho, v, vals):
            x = [vals[i] if i != v else root for i in range(T.n)]
            key = tuple(c.key() for c in x)
            if key not in seen and smooth(x):
                seen.add(key)
                out.append(x)
                break
    return out


def _find_integer_point(T: TubeSpec, smooth, radius: int = 3):
    candidates = itertools.product(range(-radius, radius + 1), repeat=T.n)
    for c in sorted(candidates, key=lambda c: (sum(map(abs, c)), c)):
        x = [GaussRational(k) for k in c]
        if not T.rho.evaluate(x) and smooth(x):
            return x
    return None


def _rational_roots_in(rho: MultiPoly, v: int, vals: dict[int, GaussRational]) -> list[GaussRational]:
    coeffs = [ZERO, ZERO, ZERO]
    for e, c in rho.terms.items():
        t = c
        for i, k in enumerate(e):
            if i != v and k:
                t = t * vals[i] ** k
        coeffs[e[v]] = coeffs[e[v]] + t
    c0, c1, c2 = (x.re for x in coeffs)
    disc = c1 * c1 - 4 * c2 * c0
    if disc < 0:
        return []
    rn, rd = isqrt(disc.numerator), isqrt(disc.denominator)
    if rn * rn != disc.numerator or rd * rd != disc.denominator:
        return []
    s = Fraction(rn, rd)
    return [GaussRational((-c1 + s) / (2 * c2)), GaussRational((-c1 - s) / (2 * c2))]


# ---------------------------------------------------------------------------
# Tube conditions
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TubeReport:
    not_in_hyperplane: bool
    no_tangent_constant: bool
    samples_used: int

    @property
    def passed(self) -> bool:
        return self.not_in_hyperplane and self.no_tangent_constant


def check_tube_conditions(T: TubeSpec, samples: int | None = None, seed: int = 0) -> TubeReport:
    """Base not inside an affine hyperplane; no nonzero real constant field tangent to the base."""
    n = T.n
    if samples is None:
        samples = 2 * (n + 1)
    if samples < n + 1:
        raise SamplingExhausted(
            f"{samples} base points cannot certify an affine span of dimension {n}; need at least {n + 1}"
        )
    rng = random.Random(seed)
    pts = sample_base_points(T, samples, rng)
    diffs = [[a - b for a, b in zip(p, pts[0])] for p in pts[1:]]
    affine_rank = rank(diffs, n)
    used = samples
    # a few more rounds before declaring a hyperplane
    for _ in range(3):
        if affine_rank == n:
            break
        more = sample_base_points(T, samples, rng)
        pts.extend(more)
        used += samples
        diffs = [[a - b for a, b in zip(p, pts[0])] for p in pts[1:]]
        affine_rank = rank(diffs, n)
    residuals = [tangency_residual(T, PolyVectorField.unit(n, j))[0] for j in range(n)]
    keys = sorted({e for r in residuals for e in r.terms})
    rows = [[r.coeff(e) for r in residuals] for e in keys]
    no_const = bool(rows) and rank(rows, n) == n
    return TubeReport(affine_rank == n, no_const, used)
