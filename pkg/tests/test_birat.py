import pytest
import sympy as sp
from hypothesis import given, settings
from hypothesis import strategies as st

from crreg import catalog
from crreg.birat import (
    InconsistentPQ,
    NonPolynomialError,
    OutsideRegularSet,
    RationalMap,
    RationalMapQP,
    compose,
    denominator_contract_holds,
    exact_denominator,
    orbit_consistency,
    pullback_composition_consistent,
    pullback_pq,
    reconstruct_from_pq,
    regular_points,
    regular_set,
    verify_derivative_identity,
)
from crreg.exact import I, GaussRational, MultiPoly, PolyMatrix, RationalFunction
from crreg.manifolds import SamplingExhausted
from oracles import from_sympy, sym_scalar

Z, W = MultiPoly.gens(2)
ONE = MultiPoly.one(2)


def test_translation_pq():
    g = pullback_pq(RationalMap((Z + ONE, W - ONE.scale(2))))
    assert g.q == PolyMatrix.identity(2, 2)
    assert g.p == (Z + ONE, W - ONE.scale(2))


def test_inversion_pq():
    g = catalog.heisenberg_inversion()
    assert g.p == (MultiPoly.zero(2), -W)
    assert g.q == PolyMatrix([[W, Z * W], [MultiPoly.zero(2), W * W]])
    assert regular_set(g) == W ** 3
    assert exact_denominator(g) == W
    assert denominator_contract_holds(g)


def test_sl2_inversion_pq():
    g = catalog.sl2_inversion()
    z = MultiPoly.var(1, 0)
    assert g.q == PolyMatrix([[z * z]]) and g.p == (-z,)
    assert g([2]) == [GaussRational(-1, 0) / 2]
    with pytest.raises(OutsideRegularSet):
        g([0])


def test_non_polynomial_q():
    z = MultiPoly.var(1, 0)
    with pytest.raises(NonPolynomialError) as err:
        pullback_pq(RationalMap((RationalFunction(z * z),)))
    assert "q[0][0]" in str(err.value)


def test_inconsistent_pq():
    z = MultiPoly.var(1, 0)
    with pytest.raises(InconsistentPQ):
        reconstruct_from_pq((z * z,), PolyMatrix.identity(1, 1))


def test_constructor_validation():
    with pytest.raises(ValueError):
        RationalMapQP((Z, W), PolyMatrix([[ONE, ONE], [ONE, ONE]]))
    with pytest.raises(ValueError):
        RationalMapQP((Z,), PolyMatrix.identity(2, 2))


@pytest.mark.parametrize(
    "g",
    [
        catalog.translation([GaussRational(1, 2), -3]),
        catalog.heisenberg_affine(GaussRational(2, -1), 5),
        catalog.heisenberg_dilation(3),
        catalog.heisenberg_inversion(),
        catalog.sl2_inversion(),
    ],
    ids=["translation", "affine", "dilation", "inversion", "sl2-inversion"],
)
def test_roundtrip(g):
    back = reconstruct_from_pq(g.p, g.q, checks=10)
    assert back.components.equals(g.components)
    assert verify_derivative_identity(g, 10) == 10


def test_derivative_against_sympy():
    z, w = sp.symbols("z w")
    g = catalog.heisenberg_inversion()
    jac = sp.Matrix([z / w, -1 / w]).jacobian([z, w])
    for pt in regular_points(g, 5, seed=2):
        want = jac.subs({z: sym_scalar(pt[0]), w: sym_scalar(pt[1])})
        got = g.derivative_at(pt)
        for i in range(2):
            for j in range(2):
                assert sp.simplify(want[i, j] - sym_scalar(got[i][j])) == 0


def test_compose():
    inv = catalog.heisenberg_inversion()
    twice = compose(inv, inv)
    assert twice.components.equals(RationalMap((-Z, W)))
    tr = catalog.translation([1, 0])
    assert compose(tr, tr.inverse).components.equals(RationalMap((Z, W)))
    c = compose(catalog.heisenberg_affine(1, 2), inv)
    assert c.inverse is not None
    assert compose(c, c.inverse).components.equals(RationalMap((Z, W)))


def test_composition_pullback_rule():
    pts = regular_points(catalog.heisenberg_inversion(), 8, seed=5)
    g1 = catalog.heisenberg_affine(GaussRational(1, 1), 2)
    g2 = catalog.heisenberg_inversion()
    assert pullback_composition_consistent(g1, g2, pts)
    assert pullback_composition_consistent(g2, g1, pts)


def _sympy_matrix_q(b):
    n, m = len(b[0]), len(b)
    zs = sp.symbols(f"z0:{n * m}")
    zmat = sp.Matrix(n, m, zs)
    g = (sp.eye(n) - zmat * sp.Matrix(b)).inv() * zmat
    flat = [g[i, j] for i in range(n) for j in range(m)]
    q = sp.simplify(sp.Matrix(flat).jacobian(zs).inv())
    return zs, q


def test_matrix_map_against_closed_form():
    b = [[1, 2], [-1, 3]]
    g = catalog.matrix_map_qp(b)
    p, q, det = catalog.matrix_map_expected(b)
    assert list(g.p) == p and g.q == q and g.det_q == det
    assert verify_derivative_identity(g, 5) == 5


@pytest.mark.parametrize("b", [[[2]], [[1, -1]]])
def test_matrix_map_small_against_sympy(b):
    zs, q = _sympy_matrix_q(b)
    g = catalog.matrix_map_qp(b)
    for i in range(q.rows):
        for j in range(q.cols):
            assert g.q[i, j] == from_sympy(sp.cancel(q[i, j]), zs)


@settings(max_examples=8)
@given(st.lists(st.integers(-3, 3), min_size=4, max_size=4))
def test_matrix_map_identities_random(entries):
    b = [entries[:2], entries[2:]]
    g = catalog.matrix_map_qp(b)
    p, q, det = catalog.matrix_map_expected(b)
    assert list(g.p) == p and g.q == q and g.det_q == det


def test_orbit_checks():
    H = catalog.heisenberg()
    for g in (catalog.translation([0, 1]), catalog.heisenberg_affine(GaussRational(1, 2), -1), catalog.heisenberg_inversion()):
        rep = orbit_consistency(H, g, count=20)
        assert rep.passed and rep.checked == 20
    bad = orbit_consistency(H, catalog.scale_w(2), count=20)
    assert not bad.passed and bad.witnesses
    w = bad.witnesses[0]
    assert w["reason"] == "image not on M"
    # the complex translation w -> w + i also leaves H
    assert not orbit_consistency(H, catalog.translation([0, I]), count=5).passed


def test_regular_points_exhausted():
    g = catalog.heisenberg_inversion()
    with pytest.raises(SamplingExhausted):
        regular_points(g, 1, max_trials=0)
