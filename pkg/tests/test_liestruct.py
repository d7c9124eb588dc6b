import random

import pytest
import sympy as sp
from hypothesis import given, settings
from hypothesis import strategies as st

from crreg import catalog
from crreg.birat import RationalMapQP, compose
from crreg.exact import I, GaussRational, MultiPoly, PolyMatrix
from crreg.holsolver import LieAlgebraBasis
from crreg.liestruct import (
    GradingError,
    IsotropyError,
    NotClosedError,
    NotPreservedError,
    grade_by_euler,
    inertia,
    isotropy_subalgebra,
    killing_signature,
    pushforward_field,
    pushforward_matrix,
    structure_constants,
)
from crreg.manifolds import is_tangent
from crreg.regularizer import PlueckerPoint
from crreg.vfields import PolyVectorField, bracket, evaluate_field
from oracles import from_sympy, sym_poly


def test_sl2_constants(sl2):
    sc = structure_constants(sl2)
    # basis: d/dz, z d/dz, z^2 d/dz
    assert sc.tensor[0][1] == [1, 0, 0]
    assert sc.tensor[0][2] == [0, 2, 0]
    assert sc.tensor[1][2] == [0, 0, 1]
    assert sc.is_antisymmetric() and sc.satisfies_jacobi()


def test_not_closed():
    z = MultiPoly.var(1, 0)
    L = LieAlgebraBasis("complex", 1, 2, (PolyVectorField([MultiPoly.one(1)]), PolyVectorField([z * z])))
    with pytest.raises(NotClosedError):
        structure_constants(L)


def test_structure_constants_reproduce_brackets(heisenberg_l):
    sc = structure_constants(heisenberg_l)
    rng = random.Random(3)
    for _ in range(20):
        u = [GaussRational(rng.randint(-3, 3), rng.randint(-3, 3)) for _ in range(sc.dim)]
        v = [GaussRational(rng.randint(-3, 3), rng.randint(-3, 3)) for _ in range(sc.dim)]
        direct = bracket(heisenberg_l.combine(u), heisenberg_l.combine(v))
        assert heisenberg_l.combine(sc.bracket_coords(u, v)) == direct


def test_gradings(heisenberg_l, cone_l, sl2):
    assert grade_by_euler(heisenberg_l).dims() == {-1: 2, 0: 4, 1: 2}
    assert grade_by_euler(cone_l).dims() == {-1: 3, 0: 4, 1: 3}
    assert grade_by_euler(sl2).dims() == {-1: 1, 0: 1, 1: 1}
    for L in (heisenberg_l, cone_l):
        assert grade_by_euler(L).bracket_respects_grading()


def test_grading_needs_euler():
    L = LieAlgebraBasis("complex", 1, 0, (PolyVectorField([MultiPoly.one(1)]),))
    with pytest.raises(GradingError):
        grade_by_euler(L)


def test_sl2_isotropy(sl2):
    iso = isotropy_subalgebra(sl2, [5])
    assert iso.coefficient_rows == [[1, 0, GaussRational(-1, 0) / 25], [0, 1, GaussRational(-1, 0) / 5]]
    for xi in iso.elements:
        assert evaluate_field(xi, [5]) == [0]
    assert isotropy_subalgebra(sl2, [0]).coefficient_rows != iso.coefficient_rows


def test_heisenberg_isotropy(heisenberg_l):
    a = [1, I]
    iso = isotropy_subalgebra(heisenberg_l, a)
    assert iso.dim == 6
    assert all(evaluate_field(xi, a) == [0, 0] for xi in iso.elements)


def test_isotropy_needs_constants():
    z = MultiPoly.var(1, 0)
    with pytest.raises(IsotropyError):
        isotropy_subalgebra(LieAlgebraBasis("complex", 1, 1, (PolyVectorField([z]),)), [0])


def test_pushforward_identity_and_translation(heisenberg_l):
    nu = pushforward_matrix(heisenberg_l, catalog.identity_map(2))
    n = heisenberg_l.dim
    assert nu.matrix == [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    beta = [1, 0]
    eta = PolyVectorField([MultiPoly.var(2, 0), MultiPoly.var(2, 1).scale(2)])
    pushed = pushforward_field(heisenberg_l, pushforward_matrix(heisenberg_l, catalog.translation(beta)), eta)
    # translating by beta turns the weighted Euler field into eta - (beta_z, 2 beta_w)
    assert pushed == eta - PolyVectorField.constant([1, 0])


def test_sl2_translation_pushforward(sl2):
    beta = 3
    nu = pushforward_matrix(sl2, catalog.translation([beta]))
    z = MultiPoly.var(1, 0)
    assert pushforward_field(sl2, nu, PolyVectorField([z])) == PolyVectorField([z - MultiPoly.constant(1, beta)])
    want = (z - MultiPoly.constant(1, beta)) ** 2
    assert pushforward_field(sl2, nu, PolyVectorField([z * z])) == PolyVectorField([want])


def _sympy_pushforward(xi, g_syms, ginv_syms, syms):
    """``(g_* xi)(p) = g'(g^{-1} p) xi(g^{-1} p)`` computed directly."""
    jac = sp.Matrix(g_syms).jacobian(syms)
    sub = dict(zip(syms, ginv_syms))
    vals = sp.Matrix([sym_poly(c, syms) for c in xi.components]).subs(sub, simultaneous=True)
    out = jac.subs(sub, simultaneous=True) * vals
    return [sp.cancel(sp.together(e)) for e in out]


def test_inversion_against_chain_rule(heisenberg_l):
    z, w = sp.symbols("z w")
    g = [z / w, -1 / w]
    ginv = [-z / w, -1 / w]
    nu = pushforward_matrix(heisenberg_l, catalog.heisenberg_inversion())
    for xi in heisenberg_l.elements:
        ours = pushforward_field(heisenberg_l, nu, xi)
        theirs = _sympy_pushforward(xi, g, ginv, (z, w))
        assert ours == PolyVectorField([from_sympy(e, (z, w)) for e in theirs])


def test_pushforward_preserves_brackets(heisenberg_l):
    sc = structure_constants(heisenberg_l)
    maps = [
        catalog.translation([GaussRational(1, 2), 3]),
        catalog.heisenberg_affine(GaussRational(1, -1), 2),
        catalog.heisenberg_dilation(3),
        catalog.heisenberg_inversion(),
    ]
    for g in maps:
        nu = pushforward_matrix(heisenberg_l, g)
        assert nu.preserves(sc) and nu.is_invertible()


def test_pushforward_is_multiplicative(heisenberg_l):
    g1 = catalog.heisenberg_affine(1, 2)
    g2 = catalog.heisenberg_inversion()
    lhs = pushforward_matrix(heisenberg_l, compose(g1, g2))
    rhs = pushforward_matrix(heisenberg_l, g1) @ pushforward_matrix(heisenberg_l, g2)
    assert lhs.matrix == rhs.matrix


def test_pushforward_of_inverse_is_inverse(heisenberg_l):
    g = catalog.heisenberg_affine(GaussRational(2, 1), -1)
    nu = pushforward_matrix(heisenberg_l, g)
    nu_inv = pushforward_matrix(heisenberg_l, g.inverse)
    n = heisenberg_l.dim
    assert (nu @ nu_inv).matrix == [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def test_complex_map_breaks_real_form(heisenberg_l, heisenberg_basis):
    # (z, 2w) normalizes the complexified algebra but moves the real form off H
    nu = pushforward_matrix(heisenberg_l, catalog.scale_w(2))
    pushed = [pushforward_field(heisenberg_l, nu, xi) for xi in heisenberg_basis.elements]
    assert not all(is_tangent(catalog.heisenberg(), f) for f in pushed)


def test_mismatched_derivative_rejected(sl2):
    # claims g' = 1 for g(z) = z^2, so z d/dz has no preimage in the algebra
    z = MultiPoly.var(1, 0)
    bogus = RationalMapQP((z * z,), PolyMatrix.identity(1, 1), name="bogus")
    with pytest.raises(NotPreservedError):
        pushforward_matrix(sl2, bogus)


@settings(max_examples=15)
@given(st.integers(-4, 4), st.integers(-4, 4), st.integers(-4, 4))
def test_translation_pushforward_injective(a, b, c):
    sl2 = catalog.sl2_algebra()
    nu = pushforward_matrix(sl2, catalog.translation([GaussRational(a, b)]))
    assert nu.is_invertible()
    assert pushforward_matrix(sl2, catalog.translation([c])).preserves(structure_constants(sl2))


def test_killing_signatures(heisenberg_basis, cone_basis):
    # su(2,1) has signature (4, 4); so(3,2) has (6, 4)
    assert killing_signature(heisenberg_basis)[:2] == (4, 4)
    assert killing_signature(cone_basis)[:2] == (6, 4)


def test_inertia():
    assert inertia([[1, 0], [0, -1]]) == (1, 1, 0)
    assert inertia([[0, 1], [1, 0]]) == (1, 1, 0)
    assert inertia([[0, 0], [0, 0]]) == (0, 0, 2)
    assert inertia([[2, 1], [1, 2]]) == (2, 0, 0)


def test_sympy_oracle_helper_sanity():
    z, w = sp.symbols("z w")
    eta = PolyVectorField([MultiPoly.var(2, 0), MultiPoly.var(2, 1)])
    out = _sympy_pushforward(eta, [z + 1, w], [z - 1, w], (z, w))
    assert sp.expand(out[0] - (z - 1)) == 0 and out[1] == w


def test_worked_pushforwards(heisenberg_l):
    z, w = MultiPoly.gens(2)
    zero, one = MultiPoly.zero(2), MultiPoly.one(2)
    beta = GaussRational(5, 0) / 3
    nu = pushforward_matrix(heisenberg_l, catalog.translation([0, beta]))
    eta = PolyVectorField([z, w.scale(2)])
    assert pushforward_field(heisenberg_l, nu, eta) == eta - PolyVectorField([zero, MultiPoly.constant(2, 2 * beta)])
    nu = pushforward_matrix(heisenberg_l, catalog.heisenberg_inversion())
    assert pushforward_field(heisenberg_l, nu, PolyVectorField([one, zero])) == PolyVectorField([-w, zero])
    assert pushforward_field(heisenberg_l, nu, PolyVectorField([zero, one])) == PolyVectorField([z * w, w * w])


def test_isotropy_at_origin(sl2, heisenberg_l):
    z = MultiPoly.var(1, 0)
    iso = isotropy_subalgebra(sl2, [0])
    assert iso.dim == 2 and set(iso.elements) == {PolyVectorField([z]), PolyVectorField([z * z])}
    assert isotropy_subalgebra(heisenberg_l, [0, 0]).dim == 6


def test_isotropy_rows_match_closed_form(sl2):
    a = GaussRational(3, -2)
    rows = isotropy_subalgebra(sl2, [a]).coefficient_rows
    expected = [[-a, 1, 0], [a * a, -2 * a, 1]]
    assert PlueckerPoint.from_rows(rows).same_point(PlueckerPoint.from_rows(expected))


def test_nu_separates_distinct_maps(heisenberg_l):
    maps = [
        catalog.identity_map(2),
        catalog.translation([1, 0]),
        catalog.translation([0, 1]),
        catalog.heisenberg_dilation(2),
        catalog.heisenberg_dilation(-1),
        catalog.heisenberg_inversion(),
    ]
    mats = [tuple(map(tuple, pushforward_matrix(heisenberg_l, g).matrix)) for g in maps]
    assert len(set(mats)) == len(maps)
    # inversion twice is (-z, w), the same map as dilation by -1
    twice = compose(catalog.heisenberg_inversion(), catalog.heisenberg_inversion())
    assert pushforward_matrix(heisenberg_l, twice).matrix == list(map(list, mats[4]))
