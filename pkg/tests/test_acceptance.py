"""Acceptance gate: one test per criterion, each with its wall-clock budget."""

import json
import random
import time
from contextlib import contextmanager

import pytest

from crreg import catalog
from crreg.birat import RationalMap, pullback_pq, reconstruct_from_pq, regular_points
from crreg.cli import main
from crreg.exact import I, GaussRational, MultiPoly, RationalFunction
from crreg.holsolver import check_property_p, complexify, solve_hol
from crreg.liestruct import grade_by_euler, pushforward_matrix, structure_constants
from crreg.manifolds import sample_points
from crreg.regularizer import PlueckerPoint, plucker_point, sample_regular_points, verify_intertwining
from crreg.vfields import bracket
from test_holsolver import ORACLE_DIMS, quadric_oracle

pytestmark = pytest.mark.acceptance


@contextmanager
def budget(seconds):
    start = time.perf_counter()
    yield
    elapsed = time.perf_counter() - start
    assert elapsed < seconds, f"took {elapsed:.1f}s, budget {seconds}s"


def _heisenberg_symbolic_maps():
    z, w = MultiPoly.gens(2)
    one = MultiPoly.one(2)
    c = lambda v: MultiPoly.constant(2, v)  # noqa: E731
    alpha, beta = GaussRational(1, -2), GaussRational(3)
    return {
        "translation": RationalMap((z + c(GaussRational(2, 1)), w + c(5))),
        "affine": RationalMap((z + c(alpha), w + z.scale(2 * I * alpha.conjugate()) + c(beta + I * alpha * alpha.conjugate()))),
        "inversion": RationalMap((RationalFunction(z, w), RationalFunction(-one, w))),
    }


def test_criterion_1_heisenberg():
    with budget(10):
        H = catalog.heisenberg()
        B = solve_hol(H, 2)
        assert B.dim == 8 and B.closed
        assert solve_hol(H, 3, check_closure=False).dim == 8
        L, totally_real = complexify(B)
        assert totally_real and L.dim == 8
        assert grade_by_euler(L).dims() == {-1: 2, 0: 4, 1: 2}


def test_criterion_2_light_cone():
    with budget(60):
        B = solve_hol(catalog.light_cone(), 2)
        assert B.dim == 10
        L, _ = complexify(B)
        assert grade_by_euler(L).dims() == {-1: 3, 0: 4, 1: 3}
        assert check_property_p(L).passed


def test_criterion_3_sphere_quadric():
    with budget(60):
        assert quadric_oracle([[1, 0], [0, 1]], 2) == ORACLE_DIMS["sphere2"] == 15
        assert solve_hol(catalog.sphere_quadric(2), 2).dim == 15


def test_criterion_4_matrix_map():
    rng = random.Random(2024)
    b = [[rng.randint(-5, 5) for _ in range(2)] for _ in range(2)]
    with budget(5):
        g = pullback_pq(catalog.matrix_map(b))
        p, q, det = catalog.matrix_map_expected(b)
        assert list(g.p) == p
        assert g.q == q
        assert g.det_q == det


def test_criterion_5_roundtrips():
    with budget(10):
        maps = _heisenberg_symbolic_maps()
        maps["translation-1d"] = RationalMap((MultiPoly.var(1, 0) + MultiPoly.constant(1, GaussRational(-7, 3)),))
        for name, g in maps.items():
            gp = pullback_pq(g)
            back = reconstruct_from_pq(gp.p, gp.q, checks=10)
            assert back.components.equals(g), name
            jac = g.jacobian()
            n = g.n
            for pt in regular_points(back, 10, seed=1):
                # g'(pt) q(pt) = 1 is g' = q^{-1} without inverting anything
                jv = [[e.evaluate(pt) for e in row] for row in jac]
                qv = gp.q.evaluate(pt)
                prod = [[sum((jv[i][k] * qv[k][j] for k in range(n)), GaussRational(0)) for j in range(n)] for i in range(n)]
                assert prod == [[int(i == j) for j in range(n)] for i in range(n)], name


def test_criterion_6_regularization():
    with budget(120):
        sl2 = catalog.sl2_algebra()
        for a in (GaussRational(2), GaussRational(-1, 3), GaussRational(5, 0) / 7):
            P = plucker_point(sl2, [a])
            assert P.same_point(PlueckerPoint(P.subsets, [a * a, -a, 1]))
        for g in (catalog.translation([GaussRational(4, -1)]), catalog.sl2_inversion()):
            assert verify_intertwining(sl2, g, sample_regular_points(g, 20, seed=3)).all_equal

        L = complexify(solve_hol(catalog.heisenberg(), 2))[0]
        assert len(plucker_point(L, [1, I])) == 28
        maps = [
            catalog.translation([GaussRational(1, 1), 0]),
            catalog.translation([0, -2]),
            catalog.heisenberg_affine(GaussRational(-1, 2), 3),
            catalog.heisenberg_dilation(GaussRational(3, 0) / 2),
            catalog.heisenberg_inversion(),
        ]
        for g in maps:
            rep = verify_intertwining(L, g, sample_regular_points(g, 20, seed=11))
            assert rep.checked == 20 and rep.all_equal, g.label()


def test_criterion_7_property_suites():
    with budget(60):
        H_L = complexify(solve_hol(catalog.heisenberg(), 2))[0]
        C_L = complexify(solve_hol(catalog.light_cone(), 2))[0]
        rng = random.Random(7)
        for i in range(100):
            L = H_L if i % 2 else C_L
            x, y, z = (L.combine([GaussRational(rng.randint(-3, 3), rng.randint(-3, 3)) for _ in range(L.dim)]) for _ in range(3))
            total = bracket(bracket(x, y), z) + bracket(bracket(y, z), x) + bracket(bracket(z, x), y)
            assert total.is_zero()
        for L in (H_L, C_L):
            assert grade_by_euler(L).bracket_respects_grading()

        pts = sample_points(catalog.heisenberg(), 20, seed=21)
        assert len({tuple(p) for p in pts}) == 20
        assert len({tuple(plucker_point(H_L, p).canonical()) for p in pts}) == 20

        sc = structure_constants(H_L)
        qp = [pullback_pq(g) for g in _heisenberg_symbolic_maps().values()]
        qp += [catalog.heisenberg_affine(GaussRational(2, 1), -4), catalog.heisenberg_inversion()]
        for g in qp:
            assert pushforward_matrix(H_L, g).preserves(sc)


def _cli(capsys, argv):
    code = main(argv)
    return code, json.loads(capsys.readouterr().out)


def test_criterion_8_negative_controls(capsys, tmp_path):
    paths = {}
    for name in ("duplicated-form", "heisenberg", "scale-w", "heisenberg-dilation"):
        code, data = _cli(capsys, ["fixture", name])
        assert code == 0
        paths[name] = tmp_path / f"{name}.json"
        paths[name].write_text(json.dumps(data))

    code, rep = _cli(capsys, ["check", "form", "--manifold", str(paths["duplicated-form"])])
    assert code != 0 and rep["results"]["independent"] is False
    assert rep["results"]["witnesses"][0]["kind"] == "real_relation"

    code, rep = _cli(capsys, ["bir", "orbit", "--manifold", str(paths["heisenberg"]), "--map", str(paths["scale-w"])])
    assert code != 0 and rep["results"]["witnesses"]
    assert {"point", "image", "reason"} <= set(rep["results"]["witnesses"][0])

    hol, nu = tmp_path / "hol.json", tmp_path / "nu.json"
    assert main(["hol", "solve", "--manifold", str(paths["heisenberg"]), "--out", str(hol)]) == 0
    g = str(paths["heisenberg-dilation"])
    assert main(["lie", "pushforward", "--basis", str(hol), "--map", g, "--perturb", "--out", str(nu)]) == 0
    capsys.readouterr()
    code, rep = _cli(capsys, ["reg", "verify", "--basis", str(hol), "--map", g, "--nu", str(nu), "--samples", "20"])
    assert code != 0 and rep["results"]["witnesses"]
    assert {"point", "phi_of_image", "tau_of_phi"} <= set(rep["results"]["witnesses"][0])
