"""Polynomial holomorphic vector fields ``f(z) d/dz`` on C^n.

Bracket convention::

    [xi, zeta]_k = sum_j (xi_j * d zeta_k / dz_j - zeta_j * d xi_k / dz_j)

With this sign the Euler field ``eta = z d/dz`` satisfies
``[eta, P] = m * P`` for ``P`` homogeneous of degree ``m + 1``; in
particular constant fields sit in eigenvalue ``-1``.
"""

from __future__ import annotations

from typing import Iterable, Sequence

from .exact import ONE, ZERO, GaussRational, MultiPoly, gq
from .exact.poly import gradlex_key

FieldKey = tuple[int, tuple[int, ...]]


class PolyVectorField:
    __slots__ = ("components",)

    def __init__(self, components: Sequence[MultiPoly]):
        comps = tuple(components)
        n = len(comps)
        if n == 0:
            raise ValueError("a vector field needs at least one component")
        if any(c.nvars != n for c in comps):
            raise ValueError(f"components of a field on C^{n} must have {n} variables")
        self.components = comps

    @property
    def n(self) -> int:
        return len(self.components)

    # -- constructors ----------------------------------------------------
    @classmethod
    def zero(cls, n: int) -> "PolyVectorField":
        return cls([MultiPoly.zero(n)] * n)

    @classmethod
    def constant(cls, alpha: Sequence) -> "PolyVectorField":
        n = len(alpha)
        return cls([MultiPoly.constant(n, a) for a in alpha])

    @classmethod
    def unit(cls, n: int, j: int) -> "PolyVectorField":
        return cls.constant([ONE if i == j else ZERO for i in range(n)])

    @classmethod
    def from_terms(cls, n: int, terms: dict[FieldKey, object]) -> "PolyVectorField":
        per = [dict() for _ in range(n)]
        for (c, e), v in terms.items():
            per[c][e] = v
        return cls([MultiPoly(n, t) for t in per])

    # -- algebra -----------------------------------------------------------
    def _check(self, other: "PolyVectorField") -> None:
        if not isinstance(other, PolyVectorField):
            raise TypeError("expected a PolyVectorField")
        if other.n != self.n:
            raise ValueError(f"dimension mismatch: {self.n} vs {other.n}")

    def __add__(self, other: "PolyVectorField") -> "PolyVectorField":
        self._check(other)
        return PolyVectorField([a + b for a, b in zip(self.components, other.components)])

    def __sub__(self, other: "PolyVectorField") -> "PolyVectorField":
        self._check(other)
        return PolyVectorField([a - b for a, b in zip(self.components, other.components)])

    def __neg__(self):
        return PolyVectorField([-a for a in self.components])

    def scale(self, c) -> "PolyVectorField":
        c = gq(c)
        return PolyVectorField([a.scale(c) for a in self.components])

    def __mul__(self, c):
        if isinstance(c, PolyVectorField):
            return NotImplemented
        return self.scale(c)

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return all(not c.terms for c in self.components)

    def degree(self) -> int:
        return max(c.degree() for c in self.components)

    def __eq__(self, other):
        if not isinstance(other, PolyVectorField):
            return NotImplemented
        return self.components == other.components

    def __hash__(self):
        return hash(self.components)

    def terms(self) -> dict[FieldKey, GaussRational]:
        """Flat coefficient map ``(component, exponent) -> coefficient``."""
        out = {}
        for c, p in enumerate(self.components):
            for e, v in p.terms.items():
                out[(c, e)] = v
        return out

    def to_str(self, names: Sequence[str] | None = None) -> str:
        if names is None:
            names = [f"z{i + 1}" for i in range(self.n)] if self.n > 1 else ["z"]
        parts = []
        for c, p in zip(names, self.components):
            if p.terms:
                parts.append(f"({p.to_str(names)})*d{c}")
        return " + ".join(parts) if parts else "0"

    def __repr__(self):
        return f"PolyVectorField({self.to_str()!r})"


def euler_field(n: int) -> PolyVectorField:
    """``eta = z d/dz``; component ``j`` is the coordinate ``z_j``."""
    return PolyVectorField(MultiPoly.gens(n))


def bracket(xi: PolyVectorField, zeta: PolyVectorField) -> PolyVectorField:
    xi._check(zeta)
    n = xi.n
    out = []
    for k in range(n):
        acc = MultiPoly.zero(n)
        zk, xk = zeta.components[k], xi.components[k]
        for j in range(n):
            xj, zj = xi.components[j], zeta.components[j]
            if xj.terms and zk.terms:
                d = zk.diff(j)
                if d.terms:
                    acc = acc + xj * d
            if zj.terms and xk.terms:
                d = xk.diff(j)
                if d.terms:
                    acc = acc - zj * d
        out.append(acc)
    return PolyVectorField(out)


def evaluate_field(xi: PolyVectorField, point: Sequence) -> list[GaussRational]:
    if len(point) != xi.n:
        raise ValueError(f"point has {len(point)} coordinates, field lives on C^{xi.n}")
    return [c.evaluate(point) for c in xi.components]


def homogeneous_components(xi: PolyVectorField) -> list[tuple[int, PolyVectorField]]:
    """Split ``xi`` into ad(eta)-eigenvectors; weight ``m`` collects degree ``m + 1``."""
    n = xi.n
    by_weight: dict[int, list[dict]] = {}
    for c, p in enumerate(xi.components):
        for e, v in p.terms.items():
            slot = by_weight.setdefault(sum(e) - 1, [dict() for _ in range(n)])
            slot[c][e] = v
    return [
        (m, PolyVectorField([MultiPoly(n, t) for t in parts]))
        for m, parts in sorted(by_weight.items())
    ]


class FieldCoordinates:
    """Fixed ordering of ``(component, exponent)`` keys for vectorizing fields.

    Keys are ordered by total degree, then exponent (lex), then component,
    so lower-degree coefficients come first.
    """

    def __init__(self, n: int, keys: Iterable[FieldKey]):
        self.n = n
        self.keys = sorted(set(keys), key=lambda k: (gradlex_key(k[1]), k[0]))
        self.index = {k: i for i, k in enumerate(self.keys)}

    @classmethod
    def spanning(cls, fields: Sequence[PolyVectorField], n: int | None = None) -> "FieldCoordinates":
        if n is None:
            n = fields[0].n
        keys = set()
        for f in fields:
            keys.update(f.terms())
        return cls(n, keys)

    @classmethod
    def up_to_degree(cls, n: int, degree: int) -> "FieldCoordinates":
        from .exact import monomials_up_to

        return cls(n, [(c, e) for e in monomials_up_to(n, degree) for c in range(n)])

    def __len__(self):
        return len(self.keys)

    def extend(self, fields: Sequence[PolyVectorField]) -> "FieldCoordinates":
        keys = set(self.keys)
        for f in fields:
            keys.update(f.terms())
        return FieldCoordinates(self.n, keys)

    def covers(self, xi: PolyVectorField) -> bool:
        return all(k in self.index for k in xi.terms())

    def vector(self, xi: PolyVectorField) -> list[GaussRational]:
        v = [ZERO] * len(self.keys)
        for k, c in xi.terms().items():
            i = self.index.get(k)
            if i is None:
                raise KeyError(f"term {k} outside the coordinate system")
            v[i] = c
        return v

    def real_vector(self, xi: PolyVectorField) -> list[GaussRational]:
        """Real coordinates: ``(re, im)`` pairs interleaved per key."""
        v = self.vector(xi)
        out = []
        for c in v:
            out.append(GaussRational(c.re))
            out.append(GaussRational(c.im))
        return out

    def field(self, vec: Sequence) -> PolyVectorField:
        terms = {k: c for k, c in zip(self.keys, vec) if c}
        return PolyVectorField.from_terms(self.n, terms)

    def field_from_real(self, vec: Sequence) -> PolyVectorField:
        terms = {}
        for i, k in enumerate(self.keys):
            re, im = gq(vec[2 * i]), gq(vec[2 * i + 1])
            if re or im:
                terms[k] = GaussRational(re.re, im.re)
        return PolyVectorField.from_terms(self.n, terms)
