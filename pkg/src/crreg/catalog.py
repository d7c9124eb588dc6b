"""Ready-made manifolds, algebras and maps used by the CLI fixtures and tests."""

from __future__ import annotations

from typing import Sequence

from .birat import RationalMap, RationalMapQP, pullback_pq
from .exact import I, MultiPoly, PolyMatrix, RationalFunction, adjugate_det, gq
from .holsolver import LieAlgebraBasis
from .manifolds import HermitianFormTuple, QuadricSpec, TubeSpec
from .vfields import PolyVectorField


def heisenberg() -> QuadricSpec:
    """``Im w = |z|^2`` in C^2."""
    return QuadricSpec(HermitianFormTuple.single([[1]]))


def sphere_quadric(n: int) -> QuadricSpec:
    """``Im w = |z_1|^2 + ... + |z_n|^2``."""
    return QuadricSpec(HermitianFormTuple.single([[1 if i == j else 0 for j in range(n)] for i in range(n)]))


def light_cone() -> TubeSpec:
    """Tube over ``x1^2 + x2^2 = x3^2``."""
    return TubeSpec.hyperquadric(2, 1)


def sl2_algebra() -> LieAlgebraBasis:
    """``d/dz, z d/dz, z^2 d/dz`` on C."""
    z = MultiPoly.var(1, 0)
    elems = (PolyVectorField([MultiPoly.one(1)]), PolyVectorField([z]), PolyVectorField([z * z]))
    return LieAlgebraBasis("complex", 1, 2, elems, closed=True)


def _qp(p, q, name, inverse=None) -> RationalMapQP:
    return RationalMapQP(tuple(p), q if isinstance(q, PolyMatrix) else PolyMatrix(q), inverse, name)


def identity_map(n: int) -> RationalMapQP:
    return _qp(MultiPoly.gens(n), PolyMatrix.identity(n, n), "identity")


def translation(beta: Sequence, name: str = "translation") -> RationalMapQP:
    beta = [gq(b) for b in beta]
    n = len(beta)
    gens = MultiPoly.gens(n)
    fwd = [x + MultiPoly.constant(n, b) for x, b in zip(gens, beta)]
    back = [x - MultiPoly.constant(n, b) for x, b in zip(gens, beta)]
    inv = _qp(back, PolyMatrix.identity(n, n), name + "^-1")
    return _qp(fwd, PolyMatrix.identity(n, n), name, inv)


def heisenberg_affine(alpha, beta, name: str = "heisenberg-affine") -> RationalMapQP:
    """``(z, w) -> (z + alpha, w + 2i conj(alpha) z + beta + i|alpha|^2)``.

    The constant ``i|alpha|^2`` keeps the image on ``Im w = |z|^2``; with
    ``beta`` real this is the Heisenberg group law.
    """
    alpha, beta = gq(alpha), gq(beta)
    shift = beta + I * alpha * alpha.conjugate()
    g = RationalMap(_affine_components(alpha, shift))
    ginv_shift = -beta + I * alpha * alpha.conjugate()
    ginv = RationalMap(_affine_components(-alpha, ginv_shift))
    return pullback_pq(g, name, pullback_pq(ginv, name + "^-1"))


def _affine_components(alpha, shift):
    z, w = MultiPoly.gens(2)
    c = lambda v: MultiPoly.constant(2, v)  # noqa: E731
    return (z + c(alpha), w + z.scale(2 * I * alpha.conjugate()) + c(shift))


def heisenberg_dilation(t, name: str = "dilation") -> RationalMapQP:
    """``(z, w) -> (t z, t^2 w)`` for real ``t``."""
    t = gq(t)
    z, w = MultiPoly.gens(2)
    g = RationalMap((z.scale(t), w.scale(t * t)))
    gi = RationalMap((z.scale(1 / t), w.scale(1 / (t * t))))
    return pullback_pq(g, name, pullback_pq(gi, name + "^-1"))


def heisenberg_inversion(name: str = "inversion") -> RationalMapQP:
    """``(z, w) -> (z/w, -1/w)``; its inverse is ``(z, w) -> (-z/w, -1/w)``."""
    z, w = MultiPoly.gens(2)
    one = MultiPoly.one(2)
    g = RationalMap((RationalFunction(z, w), RationalFunction(-one, w)))
    gi = RationalMap((RationalFunction(-z, w), RationalFunction(-one, w)))
    return pullback_pq(g, name, pullback_pq(gi, name + "^-1"))


def scale_w(factor=2, name: str = "scale-w") -> RationalMapQP:
    """``(z, w) -> (z, factor * w)``; does not preserve the Heisenberg quadric."""
    f = gq(factor)
    z, w = MultiPoly.gens(2)
    inv = pullback_pq(RationalMap((z, w.scale(1 / f))), name + "^-1")
    return pullback_pq(RationalMap((z, w.scale(f))), name, inv)


def sl2_inversion(name: str = "sl2-inversion") -> RationalMapQP:
    """``z -> -1/z`` (an involution)."""
    z = MultiPoly.var(1, 0)
    g = RationalMap((RationalFunction(-MultiPoly.one(1), z),))
    g = pullback_pq(g, name)
    return g.with_inverse(g)


# -- matrix-space map ``z -> (1 - z b)^{-1} z`` on C^{n x m} --------------------


def _matrix_vars(n: int, m: int) -> list[list[MultiPoly]]:
    gens = MultiPoly.gens(n * m)
    return [[gens[i * m + j] for j in range(m)] for i in range(n)]


def _const_mat(b, nv):
    return [[MultiPoly.constant(nv, x) for x in row] for row in b]


def _mat_mul(a, b, nv):
    return [[sum((a[i][k] * b[k][j] for k in range(len(b))), MultiPoly.zero(nv)) for j in range(len(b[0]))] for i in range(len(a))]


def _eye_minus(a, nv):
    return [[(MultiPoly.one(nv) if i == j else MultiPoly.zero(nv)) - a[i][j] for j in range(len(a))] for i in range(len(a))]


def matrix_map(b: Sequence[Sequence], sign: int = 1) -> RationalMap:
    """``z -> (1 - sign * z b)^{-1} z`` where ``z`` is ``n x m`` and ``b`` is ``m x n``."""
    m, n = len(b), len(b[0])
    nv = n * m
    z = _matrix_vars(n, m)
    bm = _const_mat(b, nv)
    zb = _mat_mul(z, bm, nv)
    if sign != 1:
        zb = [[x.scale(sign) for x in row] for row in zb]
    adj, d = adjugate_det(PolyMatrix(_eye_minus(zb, nv)))
    comps = []
    for i in range(n):
        for j in range(m):
            num = sum((adj[i, k] * z[k][j] for k in range(n)), MultiPoly.zero(nv))
            comps.append(RationalFunction(num, d))
    return RationalMap(tuple(comps))


def matrix_map_qp(b: Sequence[Sequence], name: str = "matrix-map") -> RationalMapQP:
    inv = pullback_pq(matrix_map(b, sign=-1), name + "^-1")
    return pullback_pq(matrix_map(b), name, inv)


def matrix_map_expected(b: Sequence[Sequence]) -> tuple[list[MultiPoly], PolyMatrix, MultiPoly]:
    """Closed forms ``p = z - z b z``, ``q(z) a = (1 - z b) a (1 - b z)`` and
    ``det q = det(1 - z b)^m det(1 - b z)^n``, built independently of the extractor."""
    m, n = len(b), len(b[0])
    nv = n * m
    z = _matrix_vars(n, m)
    bm = _const_mat(b, nv)
    zb = _mat_mul(z, bm, nv)
    bz = _mat_mul(bm, z, nv)
    zbz = _mat_mul(zb, z, nv)
    p = [z[i][j] - zbz[i][j] for i in range(n) for j in range(m)]
    left, right = _eye_minus(zb, nv), _eye_minus(bz, nv)
    # entry ((i,j),(k,l)) = left[i][k] * right[l][j]
    q_rows = [[left[i][k] * right[l][j] for k in range(n) for l in range(m)] for i in range(n) for j in range(m)]
    d_left = PolyMatrix(left).det()
    d_right = PolyMatrix(right).det()
    return p, PolyMatrix(q_rows), d_left ** m * d_right ** n


__all__ = [
    "heisenberg",
    "sphere_quadric",
    "light_cone",
    "sl2_algebra",
    "identity_map",
    "translation",
    "heisenberg_affine",
    "heisenberg_dilation",
    "heisenberg_inversion",
    "scale_w",
    "sl2_inversion",
    "matrix_map",
    "matrix_map_qp",
    "matrix_map_expected",
]
