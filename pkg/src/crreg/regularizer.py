"""Plücker coordinates of isotropy subalgebras and the induced projective action.

``phi(a)`` is the point of the Grassmannian given by the isotropy
subalgebra at ``a``, written through its maximal minors.  A pushforward
matrix ``nu`` acts by moving a spanning set and re-taking minors, which is
what :func:`tau_apply` does; :func:`compound_matrix` gives the same action
as an explicit linear map when that is small enough to build.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from itertools import combinations
from math import comb
from typing import Sequence

from .birat import OutsideRegularSet, RationalMapQP
from .exact import ZERO, GaussRational, gq
from .exact.linalg import det
from .holsolver import LieAlgebraBasis, as_complex
from .liestruct import PushforwardMatrix, isotropy_subalgebra, pushforward_matrix
from .manifolds import SamplingExhausted, random_gauss

COMPOUND_LIMIT = 1000


class DegenerateImage(ValueError):
    pass


def maximal_minors(rows: Sequence[Sequence], subsets: Sequence[tuple] | None = None) -> tuple[list[tuple], list[GaussRational]]:
    k = len(rows)
    ncols = len(rows[0]) if rows else 0
    if subsets is None:
        subsets = list(combinations(range(ncols), k))
    coords = [det([[row[c] for c in s] for row in rows]) for s in subsets]
    return list(subsets), coords


@dataclass
class PlueckerPoint:
    """Projective point; ``rows`` (optional) span the underlying subspace."""

    subsets: list
    coords: list
    rows: list | None = field(default=None, compare=False)

    def __post_init__(self):
        self.coords = [gq(c) for c in self.coords]
        if not any(self.coords):
            raise DegenerateImage("all Plücker coordinates vanish")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence]) -> "PlueckerPoint":
        subsets, coords = maximal_minors(rows)
        return cls(subsets, coords, [list(r) for r in rows])

    def canonical(self) -> list[GaussRational]:
        lead = next(c for c in self.coords if c)
        return [c / lead for c in self.coords]

    def same_point(self, other: "PlueckerPoint") -> bool:
        return self.subsets == other.subsets and self.canonical() == other.canonical()

    def __len__(self):
        return len(self.coords)

    def satisfies_plucker_relations(self, samples: int | None = 200, seed: int = 0) -> bool:
        """Spot-check ``sum_t (-1)^t p[I + j_t] p[J - j_t] = 0`` over index pairs."""
        index = {s: i for i, s in enumerate(self.subsets)}
        k = len(self.subsets[0])
        ncols = 1 + max(max(s) for s in self.subsets)
        pairs = [(a, b) for a in combinations(range(ncols), k - 1) for b in combinations(range(ncols), k + 1)]
        if samples is not None and len(pairs) > samples:
            pairs = random.Random(seed).sample(pairs, samples)

        def coord(idx):
            if len(set(idx)) < len(idx):
                return ZERO
            order = sorted(range(len(idx)), key=lambda t: idx[t])
            sign = _perm_sign(order)
            c = self.coords[index[tuple(sorted(idx))]]
            return c if sign > 0 else -c

        for a, b in pairs:
            total = ZERO
            for t, j in enumerate(b):
                term = coord(a + (j,)) * coord(b[:t] + b[t + 1:])
                total = total + (term if t % 2 == 0 else -term)
            if total:
                return False
        return True


def _perm_sign(order: Sequence[int]) -> int:
    sign, seen = 1, [False] * len(order)
    for i in range(len(order)):
        if seen[i]:
            continue
        j, length = i, 0
        while not seen[j]:
            seen[j] = True
            j = order[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def plucker_point(L: LieAlgebraBasis, a: Sequence) -> PlueckerPoint:
    """``phi(a)``: the isotropy subalgebra at ``a`` as a projective point."""
    iso = isotropy_subalgebra(L, a)
    return PlueckerPoint.from_rows(iso.coefficient_rows)


def tau_apply(nu: PushforwardMatrix, P: PlueckerPoint) -> PlueckerPoint:
    """Move each spanning vector by ``nu`` and re-take the minors."""
    if P.rows is None:
        raise ValueError("point carries no spanning set; use compound_matrix instead")
    moved = [nu.apply(r) for r in P.rows]
    subsets, coords = maximal_minors(moved, P.subsets)
    if not any(coords):
        raise DegenerateImage("nu collapses the subspace")
    return PlueckerPoint(subsets, coords, moved)


def compound_matrix(nu: PushforwardMatrix, k: int) -> tuple[list[tuple], list[list[GaussRational]]]:
    """``C[J][I] = det nu[J, I]``; acts on Plücker vectors of ``k``-subspaces."""
    L = nu.dim
    size = comb(L, k)
    if size > COMPOUND_LIMIT:
        raise ValueError(f"compound matrix would have {size}^2 entries (limit {COMPOUND_LIMIT} rows)")
    subsets = list(combinations(range(L), k))
    m = nu.matrix
    rows = [[det([[m[r][c] for c in I] for r in J]) for I in subsets] for J in subsets]
    return subsets, rows


def tau_apply_compound(nu: PushforwardMatrix, P: PlueckerPoint) -> PlueckerPoint:
    k = len(P.subsets[0])
    subsets, C = compound_matrix(nu, k)
    if subsets != P.subsets:
        raise ValueError("index order mismatch")
    coords = [sum((c * p for c, p in zip(row, P.coords)), ZERO) for row in C]
    return PlueckerPoint(subsets, coords)


@dataclass
class IntertwiningReport:
    checked: int
    all_equal: bool
    witnesses: list = field(default_factory=list)
    map_ref: str = "g"


def sample_regular_points(g: RationalMapQP, count: int, seed: int = 0, max_trials: int = 2000) -> list[list[GaussRational]]:
    """Seeded rational points in ``reg(g)`` whose image is in ``reg(g^-1)`` when known."""
    rng = random.Random(seed)
    out = []
    for _ in range(max_trials):
        if len(out) == count:
            return out
        a = [random_gauss(rng) for _ in range(g.n)]
        if not g.is_regular_at(a):
            continue
        if g.inverse is not None and not g.inverse.is_regular_at(g(a)):
            continue
        out.append(a)
    raise SamplingExhausted("could not find enough regular sample points")


def verify_intertwining(
    L: LieAlgebraBasis,
    g: RationalMapQP,
    samples: Sequence[Sequence],
    nu: PushforwardMatrix | None = None,
    seed: int = 0,
) -> IntertwiningReport:
    """Exact check of ``phi(g(a)) = tau(g) phi(a)`` at each sample."""
    L = as_complex(L)
    if nu is None:
        nu = pushforward_matrix(L, g, seed=seed)
    witnesses = []
    for a in samples:
        a = [gq(x) for x in a]
        if not g.is_regular_at(a):
            raise OutsideRegularSet(f"sample {[str(x) for x in a]} is outside reg(g)")
        lhs = plucker_point(L, g(a))
        rhs = tau_apply(nu, plucker_point(L, a))
        if not lhs.same_point(rhs):
            witnesses.append({"point": a, "phi_of_image": lhs.canonical(), "tau_of_phi": rhs.canonical()})
    return IntertwiningReport(len(samples), not witnesses, witnesses, nu.map_ref)


def perturb(nu: PushforwardMatrix, row: int = 0, col: int = 0, delta=1) -> PushforwardMatrix:
    """Copy of ``nu`` with one entry shifted (negative-control fixture)."""
    m = [list(r) for r in nu.matrix]
    m[row][col] = m[row][col] + gq(delta)
    return PushforwardMatrix(m, nu.map_ref + "+perturbed", nu.samples_used)


__all__ = [
    "PlueckerPoint",
    "DegenerateImage",
    "maximal_minors",
    "plucker_point",
    "tau_apply",
    "tau_apply_compound",
    "compound_matrix",
    "COMPOUND_LIMIT",
    "IntertwiningReport",
    "verify_intertwining",
    "sample_regular_points",
    "perturb",
]
