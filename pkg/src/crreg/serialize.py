"""JSON encoding of the exact objects.

Scalars are ``{"re": "a/b", "im": "c/d"}``; polynomials are term lists
``[{"c": scalar, "e": [exponents]}]`` in descending graded-lex order.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Any

from .birat import RationalMap, RationalMapQP
from .exact import GaussRational, MultiPoly, PolyMatrix, RationalFunction
from .holsolver import LieAlgebraBasis
from .liestruct import GradedAlgebra, PushforwardMatrix, StructureConstants
from .manifolds import HermitianFormTuple, ManifoldSpec, QuadricSpec, TubeSpec
from .regularizer import PlueckerPoint
from .vfields import PolyVectorField


class SerializationError(ValueError):
    pass


# -- scalars -------------------------------------------------------------------


def rational_to_json(x: Fraction) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def rational_from_json(s: Any) -> Fraction:
    if isinstance(s, bool):
        raise SerializationError("boolean is not a rational")
    if isinstance(s, int):
        return Fraction(s)
    if isinstance(s, str):
        try:
            return Fraction(s.strip())
        except (ValueError, ZeroDivisionError):
            pass
    raise SerializationError(f"not a rational: {s!r}")


def gauss_to_json(x: GaussRational) -> dict:
    return {"re": rational_to_json(x.re), "im": rational_to_json(x.im)}


def gauss_from_json(obj: Any) -> GaussRational:
    """Accepts ``{"re", "im"}`` or a bare rational for real values."""
    if isinstance(obj, dict):
        extra = set(obj) - {"re", "im"}
        if extra:
            raise SerializationError(f"unexpected keys {sorted(extra)} in scalar")
        return GaussRational(rational_from_json(obj.get("re", 0)), rational_from_json(obj.get("im", 0)))
    return GaussRational(rational_from_json(obj))


def point_to_json(pt) -> list:
    return [gauss_to_json(GaussRational(x)) for x in pt]


def point_from_json(obj: Any, n: int | None = None) -> list[GaussRational]:
    if not isinstance(obj, list):
        raise SerializationError("a point is a list of scalars")
    pt = [gauss_from_json(x) for x in obj]
    if n is not None and len(pt) != n:
        raise SerializationError(f"point has {len(pt)} coordinates, expected {n}")
    return pt


# -- polynomials and fields ------------------------------------------------------


def poly_to_json(p: MultiPoly) -> list:
    return [{"c": gauss_to_json(c), "e": list(e)} for e, c in p.sorted_terms()]


def poly_from_json(obj: Any, nvars: int) -> MultiPoly:
    if not isinstance(obj, list):
        raise SerializationError("a polynomial is a list of terms")
    terms: dict = {}
    for t in obj:
        if not isinstance(t, dict) or "e" not in t or "c" not in t:
            raise SerializationError(f"bad term {t!r}")
        e = t["e"]
        if not isinstance(e, list) or len(e) != nvars or any(not isinstance(k, int) or isinstance(k, bool) or k < 0 for k in e):
            raise SerializationError(f"exponent {e!r} is not a length-{nvars} list of non-negative ints")
        key = tuple(e)
        terms[key] = terms.get(key, GaussRational(0)) + gauss_from_json(t["c"])
    return MultiPoly(nvars, terms)


def field_to_json(xi: PolyVectorField) -> dict:
    return {"n": xi.n, "components": [poly_to_json(c) for c in xi.components]}


def field_from_json(obj: Any) -> PolyVectorField:
    n = _int(obj, "n")
    comps = _list(obj, "components")
    if len(comps) != n:
        raise SerializationError(f"field on C^{n} needs {n} components")
    return PolyVectorField([poly_from_json(c, n) for c in comps])


# -- manifolds -------------------------------------------------------------------


def manifold_to_json(M: ManifoldSpec) -> dict:
    if isinstance(M, QuadricSpec):
        return {
            "type": "quadric",
            "n": M.n,
            "k": M.k,
            "h": [[[gauss_to_json(x) for x in row] for row in m] for m in M.form.matrices],
        }
    if isinstance(M, TubeSpec):
        out = {"type": "tube", "n": M.n, "rho": poly_to_json(M.rho), "monic_var": M.monic_var}
        if not M.require_cone:
            out["require_cone"] = False
        return out
    raise SerializationError(f"cannot encode {type(M).__name__}")


def manifold_from_json(obj: Any) -> ManifoldSpec:
    kind = _get(obj, "type")
    if kind == "quadric":
        n, k = _int(obj, "n"), _int(obj, "k")
        mats = _list(obj, "h")
        try:
            mats = [[[gauss_from_json(x) for x in row] for row in m] for m in mats]
        except TypeError:
            raise SerializationError("h must be a list of square matrices") from None
        return QuadricSpec(HermitianFormTuple(n, k, tuple(mats)))
    if kind == "tube":
        n = _int(obj, "n")
        cone = obj.get("require_cone", True)
        if not isinstance(cone, bool):
            raise SerializationError("'require_cone' must be a boolean")
        return TubeSpec(n, poly_from_json(_get(obj, "rho"), n), _int(obj, "monic_var"), cone)
    raise SerializationError(f"unknown manifold type {kind!r}")


# -- algebras --------------------------------------------------------------------


def basis_to_json(B: LieAlgebraBasis) -> dict:
    return {
        "ground": B.ground,
        "n": B.ambient_dim,
        "degree_cap": B.degree_cap,
        "elements": [field_to_json(e) for e in B.elements],
    }


def basis_from_json(obj: Any) -> LieAlgebraBasis:
    ground = _get(obj, "ground")
    elems = [field_from_json(e) for e in _list(obj, "elements")]
    n = obj.get("n", elems[0].n if elems else None)
    if n is None:
        raise SerializationError("empty basis needs an explicit 'n'")
    cap = obj.get("degree_cap")
    try:
        return LieAlgebraBasis(ground, n, cap, tuple(elems))
    except ValueError as exc:
        raise SerializationError(str(exc)) from None


def constants_to_json(sc: StructureConstants) -> list:
    return [[[gauss_to_json(x) for x in row] for row in plane] for plane in sc.tensor]


def grading_to_json(G: GradedAlgebra) -> list:
    return [{"m": m, "basis": [field_to_json(f) for f in G.parts[m]]} for m in G.weights()]


def matrix_to_json(m) -> list:
    return [[gauss_to_json(x) for x in row] for row in m]


def matrix_from_json(obj: Any) -> list[list[GaussRational]]:
    if not isinstance(obj, list) or any(not isinstance(r, list) for r in obj):
        raise SerializationError("a matrix is a list of rows")
    return [[gauss_from_json(x) for x in r] for r in obj]


def pushforward_to_json(nu: PushforwardMatrix) -> dict:
    return {"map": nu.map_ref, "matrix": matrix_to_json(nu.matrix)}


def pushforward_from_json(obj: Any) -> PushforwardMatrix:
    m = matrix_from_json(_get(obj, "matrix"))
    if any(len(r) != len(m) for r in m):
        raise SerializationError("pushforward matrix must be square")
    return PushforwardMatrix(m, str(obj.get("map", "g")))


def plucker_to_json(P: PlueckerPoint) -> dict:
    return {"subsets": [[i + 1 for i in s] for s in P.subsets], "coords": [gauss_to_json(c) for c in P.canonical()]}


# -- maps ------------------------------------------------------------------------


def map_to_json(g: RationalMapQP, with_inverse: bool = True) -> dict:
    out = {
        "n": g.n,
        "p": [poly_to_json(x) for x in g.p],
        "q": [[poly_to_json(g.q[i, j]) for j in range(g.n)] for i in range(g.n)],
    }
    if g.name:
        out["name"] = g.name
    if with_inverse and g.inverse is not None:
        out["inverse"] = map_to_json(g.inverse, with_inverse=False)
    return out


def map_from_json(obj: Any) -> RationalMapQP:
    """Reads the ``(p, q)`` form, or a symbolic ``components`` form which is converted."""
    if isinstance(obj, dict) and "components" in obj:
        from .birat import pullback_pq

        inv = obj.get("inverse")
        inverse = map_from_json(inv) if inv is not None else None
        return pullback_pq(symbolic_map_from_json(obj), str(obj.get("name", "")), inverse)
    n = _int(obj, "n")
    p = _list(obj, "p")
    q = _list(obj, "q")
    if len(p) != n or len(q) != n or any(not isinstance(r, list) or len(r) != n for r in q):
        raise SerializationError("p must have n entries and q must be n x n")
    inv = obj.get("inverse")
    inverse = map_from_json(inv) if inv is not None else None
    if inverse is not None and inverse.n != n:
        raise SerializationError("inverse lives on a different space")
    try:
        return RationalMapQP(
            tuple(poly_from_json(x, n) for x in p),
            PolyMatrix([[poly_from_json(x, n) for x in r] for r in q]),
            inverse,
            str(obj.get("name", "")),
        )
    except ValueError as exc:
        raise SerializationError(str(exc)) from None


def symbolic_map_to_json(g: RationalMap) -> dict:
    return {
        "n": g.n,
        "components": [{"num": poly_to_json(c.num), "den": poly_to_json(c.den)} for c in g.components],
    }


def symbolic_map_from_json(obj: Any) -> RationalMap:
    n = _int(obj, "n")
    comps = _list(obj, "components")
    if len(comps) != n:
        raise SerializationError(f"map on C^{n} needs {n} components")
    out = []
    for c in comps:
        num = poly_from_json(_get(c, "num"), n)
        den = poly_from_json(c["den"], n) if "den" in c else MultiPoly.one(n)
        if den.is_zero():
            raise SerializationError("zero denominator")
        out.append(RationalFunction(num, den))
    return RationalMap(tuple(out))


# -- helpers ---------------------------------------------------------------------


def _get(obj: Any, key: str):
    if not isinstance(obj, dict):
        raise SerializationError(f"expected an object with key {key!r}")
    if key not in obj:
        raise SerializationError(f"missing key {key!r}")
    return obj[key]


def _int(obj: Any, key: str) -> int:
    v = _get(obj, key)
    if not isinstance(v, int) or isinstance(v, bool) or v < 0:
        raise SerializationError(f"{key!r} must be a non-negative integer")
    return v


def _list(obj: Any, key: str) -> list:
    v = _get(obj, key)
    if not isinstance(v, list):
        raise SerializationError(f"{key!r} must be a list")
    return v
