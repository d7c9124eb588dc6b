"""Exact arithmetic substrate: Q(i) scalars, polynomials, polynomial matrices."""

from .gauss import ONE, ZERO, I, GaussRational, gq
from .linalg import InconsistentSystem, SpanReducer, nullspace, rank, rref, solve
from .poly import MultiPoly, gradlex_key, monomials_up_to, poly_gcd, poly_lcm, reduce_mod
from .polymatrix import PolyMatrix, adjugate_det, bareiss_det
from .ratfunc import RationalFunction, common_denominator, compose_rational, substitute_rational

__all__ = [
    "GaussRational",
    "gq",
    "ZERO",
    "ONE",
    "I",
    "MultiPoly",
    "gradlex_key",
    "monomials_up_to",
    "poly_gcd",
    "poly_lcm",
    "reduce_mod",
    "PolyMatrix",
    "adjugate_det",
    "bareiss_det",
    "RationalFunction",
    "common_denominator",
    "compose_rational",
    "substitute_rational",
    "InconsistentSystem",
    "SpanReducer",
    "nullspace",
    "rank",
    "rref",
    "solve",
]
