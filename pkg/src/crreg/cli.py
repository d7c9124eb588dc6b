"""Command-line front end.

Every command prints one JSON report on stdout (and to ``--out`` when
given).  Exit status: 0 all checks passed, 1 a verification failed (the
report carries witnesses), 2 bad input.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import logging
import sys
import time
from pathlib import Path
from typing import Any, Callable

from . import catalog, serialize as ser
from .birat import (
    InconsistentPQ,
    NonPolynomialError,
    OutsideRegularSet,
    denominator_contract_holds,
    exact_denominator,
    orbit_consistency,
    reconstruct_from_pq,
)
from .exact import gq
from .holsolver import (
    NotOnManifold,
    check_holomorphic_nondegenerate,
    check_property_p,
    check_sufficient_conditions,
    complexify,
    solve_hol,
    solve_hol_stabilized,
)
from .liestruct import (
    GradingError,
    IsotropyError,
    NotClosedError,
    NotPreservedError,
    grade_by_euler,
    pushforward_matrix,
    structure_constants,
)
from .manifolds import (
    ManifoldError,
    QuadricSpec,
    SamplingExhausted,
    TubeSpec,
    HermitianFormTuple,
    check_hermitian_nondegenerate,
    check_tube_conditions,
)
from .regularizer import perturb, plucker_point, sample_regular_points, verify_intertwining

log = logging.getLogger("crreg")

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2

VERIFICATION_ERRORS = (NotClosedError, GradingError, NotPreservedError, InconsistentPQ, NonPolynomialError, IsotropyError)


class InputError(Exception):
    pass


class _Run:
    """Collects inputs and results for one invocation."""

    def __init__(self, argv: list[str]):
        self.argv = argv
        self.inputs: dict[str, str] = {}

    def load(self, label: str, path: str) -> Any:
        try:
            raw = Path(path).read_bytes()
        except OSError as exc:
            raise InputError(f"cannot read {label} file {path!r}: {exc.strerror}") from None
        self.inputs[label] = hashlib.sha256(raw).hexdigest()
        try:
            return json.loads(raw)
        except json.JSONDecodeError as exc:
            raise InputError(f"{label} file {path!r} is not valid JSON: {exc}") from None

    def inline(self, label: str, text: str) -> Any:
        """JSON given directly, or the path of a JSON file."""
        if Path(text).is_file():
            return self.load(label, text)
        self.inputs[label] = hashlib.sha256(text.encode()).hexdigest()
        try:
            return json.loads(text)
        except json.JSONDecodeError as exc:
            raise InputError(f"{label} is neither a file nor valid JSON: {exc}") from None


# ---------------------------------------------------------------------------
# command implementations: each returns (passed, results)
# ---------------------------------------------------------------------------


def _unwrap(obj: Any, key: str) -> Any:
    """Accept either a raw artifact or a report that embeds one under ``results``."""
    if isinstance(obj, dict) and "results" in obj and "command" in obj:
        results = obj["results"]
        if not isinstance(results, dict) or key not in results:
            raise InputError(f"report has no embedded {key!r}")
        return results[key]
    return obj


def _manifold(run: _Run, args) -> Any:
    return ser.manifold_from_json(run.load("manifold", args.manifold))


def _basis(run: _Run, args):
    return ser.basis_from_json(_unwrap(run.load("basis", args.basis), "basis"))


def _map(run: _Run, args):
    return ser.map_from_json(_unwrap(run.load("map", args.map), "map"))


def cmd_hol_solve(run, args):
    M = _manifold(run, args)
    if args.stabilize:
        B, stab = solve_hol_stabilized(M, args.degree)
        B.closed = B.is_bracket_closed()
    else:
        B, stab = solve_hol(M, args.degree), None
    L, totally_real = complexify(B) if B.elements else (None, False)
    res = {
        "dim_real": B.dim,
        "dim_complex": L.dim if L else 0,
        "totally_real": totally_real,
        "bracket_closed": B.closed,
        "basis": ser.basis_to_json(B),
    }
    if stab is not None:
        res["stabilization"] = {"degree_cap": stab.degree_cap, "dim": stab.dim, "next_dim": stab.next_dim, "stable": stab.stable}
    return bool(B.closed), res


def cmd_lie_grade(run, args):
    B = _basis(run, args)
    G = grade_by_euler(B)
    ok = G.bracket_respects_grading()
    return ok, {
        "dims": {str(m): d for m, d in G.dims().items()},
        "bracket_respects_grading": ok,
        "grading": ser.grading_to_json(G),
    }


def cmd_lie_constants(run, args):
    B = _basis(run, args)
    sc = structure_constants(B)
    anti, jac = sc.is_antisymmetric(), sc.satisfies_jacobi()
    return anti and jac, {"dim": sc.dim, "antisymmetric": anti, "jacobi": jac, "tensor": ser.constants_to_json(sc)}


def cmd_lie_pushforward(run, args):
    B, g = _basis(run, args), _map(run, args)
    L = complexify(B)[0] if B.ground == "real" else B
    nu = pushforward_matrix(L, g, seed=args.seed)
    if args.perturb:
        nu = perturb(nu)
    ok = nu.preserves(structure_constants(L))
    return ok or args.perturb, {"preserves_brackets": ok, "perturbed": args.perturb, "basis": ser.basis_to_json(L), "pushforward": ser.pushforward_to_json(nu)}


def cmd_reg_phi(run, args):
    B = _basis(run, args)
    pt = ser.point_from_json(run.inline("point", args.point), B.ambient_dim)
    P = plucker_point(B, pt)
    rel = P.satisfies_plucker_relations(seed=args.seed)
    return rel, {"point": ser.point_to_json(pt), "plucker": ser.plucker_to_json(P), "plucker_relations": rel}


def cmd_reg_verify(run, args):
    B, g = _basis(run, args), _map(run, args)
    L = complexify(B)[0] if B.ground == "real" else B
    nu = None
    if args.nu:
        nu = ser.pushforward_from_json(_unwrap(run.load("nu", args.nu), "pushforward"))
        if nu.dim != L.dim:
            raise InputError(f"pushforward matrix is {nu.dim}x{nu.dim}, algebra has dimension {L.dim}")
    samples = sample_regular_points(g, args.samples, args.seed)
    rep = verify_intertwining(L, g, samples, nu=nu, seed=args.seed)
    return rep.all_equal, {
        "checked": rep.checked,
        "all_equal": rep.all_equal,
        "nu_source": "file" if args.nu else "computed",
        "witnesses": [
            {
                "point": ser.point_to_json(w["point"]),
                "phi_of_image": [ser.gauss_to_json(c) for c in w["phi_of_image"]],
                "tau_of_phi": [ser.gauss_to_json(c) for c in w["tau_of_phi"]],
            }
            for w in rep.witnesses
        ],
    }


def cmd_bir_extract(run, args):
    obj = run.load("map", args.map)
    if not isinstance(obj, dict) or "components" not in obj:
        raise InputError("bir extract expects a symbolic map with 'components'")
    g = ser.map_from_json(obj)
    return True, _map_summary(g)


def _map_summary(g) -> dict:
    return {
        "map": ser.map_to_json(g),
        "det_q": ser.poly_to_json(g.det_q),
        "exact_denominator": ser.poly_to_json(exact_denominator(g)),
        "denominator_contract": denominator_contract_holds(g),
        "components": ser.symbolic_map_to_json(g.components),
    }


def cmd_bir_reconstruct(run, args):
    g0 = ser.map_from_json(_unwrap(run.load("pq", args.pq), "map"))
    g = reconstruct_from_pq(g0.p, g0.q, checks=args.checks, seed=args.seed, name=g0.name)
    res = _map_summary(g)
    res["derivative_checks"] = args.checks
    return True, res


def cmd_bir_orbit(run, args):
    M, g = _manifold(run, args), _map(run, args)
    if g.n != M.ambient_dim:
        raise InputError("map and manifold live on different spaces")
    rep = orbit_consistency(M, g, args.samples, args.seed)
    return rep.passed, {
        "checked": rep.checked,
        "passed": rep.passed,
        "inverse_checked": rep.inverse_checked,
        "note": rep.note,
        "witnesses": [
            {"point": ser.point_to_json(w["point"]), "image": ser.point_to_json(w["image"]), "reason": w["reason"]}
            for w in rep.witnesses
        ],
    }


def cmd_check_form(run, args):
    M = _manifold(run, args)
    if not isinstance(M, QuadricSpec):
        raise InputError("check form needs a quadric")
    rep = check_hermitian_nondegenerate(M.form)
    res = {"independent": rep.independent, "joint_kernel_trivial": rep.joint_kernel_trivial, "witnesses": []}
    if rep.relation is not None:
        res["witnesses"].append({"kind": "real_relation", "coefficients": ser.point_to_json(rep.relation)})
    if rep.kernel_vector is not None:
        res["witnesses"].append({"kind": "joint_kernel", "vector": ser.point_to_json(rep.kernel_vector)})
    return rep.passed, res


def cmd_check_tube(run, args):
    M = _manifold(run, args)
    if not isinstance(M, TubeSpec):
        raise InputError("check tube needs a tube manifold")
    rep = check_tube_conditions(M, seed=args.seed)
    return rep.passed, {
        "not_in_hyperplane": rep.not_in_hyperplane,
        "no_tangent_constant": rep.no_tangent_constant,
        "samples_used": rep.samples_used,
    }


def _basis_or_solve(run, args):
    if args.basis:
        return _basis(run, args)
    if not args.manifold:
        raise InputError("give --manifold or --basis")
    return solve_hol(_manifold(run, args), args.degree, check_closure=False)


def cmd_check_property_p(run, args):
    B = _basis_or_solve(run, args)
    w = check_property_p(B)
    return w.passed, {"constants_present": w.constants_present, "euler_present": w.euler_present}


def cmd_check_nondegenerate(run, args):
    B = _basis_or_solve(run, args)
    if B.ground != "real":
        raise InputError("holomorphic non-degeneracy needs a real basis")
    ok = check_holomorphic_nondegenerate(B)
    return ok, {"holomorphically_nondegenerate": ok, "dim_real": B.dim}


def cmd_check_sufficient(run, args):
    M = _manifold(run, args)
    pt = ser.point_from_json(run.inline("point", args.point), M.ambient_dim)
    rep = check_sufficient_conditions(M, pt, args.degree)
    return rep.passed, {
        "holomorphically_nondegenerate": rep.holomorphically_nondegenerate,
        "minimal": rep.minimal,
        "semi_homogeneous": rep.semi_homogeneous,
        "shifted_euler_present": rep.shifted_euler_present,
    }


def _duplicated_form():
    return QuadricSpec(HermitianFormTuple(1, 2, (((1,),), ((1,),))))


FIXTURES: dict[str, Callable[[], tuple[str, Any]]] = {
    "heisenberg": lambda: ("manifold", catalog.heisenberg()),
    "sphere2": lambda: ("manifold", catalog.sphere_quadric(2)),
    "light-cone": lambda: ("manifold", catalog.light_cone()),
    "duplicated-form": lambda: ("manifold", _duplicated_form()),
    "sl2-algebra": lambda: ("basis", catalog.sl2_algebra()),
    "sl2-inversion": lambda: ("map", catalog.sl2_inversion()),
    "heisenberg-translation": lambda: ("map", catalog.translation([0, 3])),
    "heisenberg-affine": lambda: ("map", catalog.heisenberg_affine(gq(1), 2)),
    "heisenberg-dilation": lambda: ("map", catalog.heisenberg_dilation(2)),
    "heisenberg-inversion": lambda: ("map", catalog.heisenberg_inversion()),
    "scale-w": lambda: ("map", catalog.scale_w(2)),
    "inversion-symbolic": lambda: ("symbolic", catalog.heisenberg_inversion().components),
}


def fixture_json(name: str) -> dict:
    kind, obj = FIXTURES[name]()
    enc = {
        "manifold": ser.manifold_to_json,
        "basis": ser.basis_to_json,
        "map": ser.map_to_json,
        "symbolic": ser.symbolic_map_to_json,
    }[kind]
    return enc(obj)


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="crreg", description="Exact computations with CR-automorphism algebras and birational maps.")
    parser.add_argument("--seed", type=int, default=0, help="seed for every sampling step (default 0)")
    parser.add_argument("--out", help="also write the JSON report to this file")
    parser.add_argument("-v", "--verbose", action="store_true", help="debug logging on stderr")
    # the same options after the subcommand; SUPPRESS keeps the top-level defaults
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS)
    common.add_argument("--out", default=argparse.SUPPRESS)
    common.add_argument("-v", "--verbose", action="store_true", default=argparse.SUPPRESS)
    groups = parser.add_subparsers(dest="group", required=True)

    def add(sub, name, func, help_):
        p = sub.add_parser(name, help=help_, parents=[common])
        p.set_defaults(func=func)
        return p

    hol = groups.add_parser("hol", help="infinitesimal automorphisms").add_subparsers(dest="cmd", required=True)
    p = add(hol, "solve", cmd_hol_solve, "solve for polynomial tangent fields")
    p.add_argument("--manifold", required=True)
    p.add_argument("--degree", type=int, default=2)
    p.add_argument("--stabilize", action="store_true", help="also solve at degree + 1 and compare")

    lie = groups.add_parser("lie", help="algebra structure").add_subparsers(dest="cmd", required=True)
    p = add(lie, "grade", cmd_lie_grade, "grading by the Euler field")
    p.add_argument("--basis", required=True)
    p = add(lie, "constants", cmd_lie_constants, "structure constants")
    p.add_argument("--basis", required=True)
    p = add(lie, "pushforward", cmd_lie_pushforward, "matrix of g_* in the complexified basis")
    p.add_argument("--basis", required=True)
    p.add_argument("--map", required=True)
    p.add_argument("--perturb", action="store_true", help="shift one entry (negative-control fixture)")

    reg = groups.add_parser("reg", help="projective regularization").add_subparsers(dest="cmd", required=True)
    p = add(reg, "phi", cmd_reg_phi, "Plücker point of the isotropy subalgebra")
    p.add_argument("--basis", required=True)
    p.add_argument("--point", required=True, help="JSON list of scalars, or a file holding one")
    p = add(reg, "verify", cmd_reg_verify, "check phi(g(a)) = tau(g) phi(a) at sampled points")
    p.add_argument("--basis", required=True)
    p.add_argument("--map", required=True)
    p.add_argument("--samples", type=int, default=20)
    p.add_argument("--nu", help="use this pushforward matrix instead of computing it")

    bir = groups.add_parser("bir", help="birational maps").add_subparsers(dest="cmd", required=True)
    p = add(bir, "extract", cmd_bir_extract, "(p, q) of a symbolic map")
    p.add_argument("--map", required=True)
    p = add(bir, "reconstruct", cmd_bir_reconstruct, "q^-1 p from (p, q)")
    p.add_argument("--pq", required=True)
    p.add_argument("--checks", type=int, default=10)
    p = add(bir, "orbit", cmd_bir_orbit, "sampling check that g maps M into M")
    p.add_argument("--manifold", required=True)
    p.add_argument("--map", required=True)
    p.add_argument("--samples", type=int, default=20)

    chk = groups.add_parser("check", help="hypothesis checks").add_subparsers(dest="cmd", required=True)
    p = add(chk, "form", cmd_check_form, "non-degeneracy of the Hermitian form")
    p.add_argument("--manifold", required=True)
    p = add(chk, "tube", cmd_check_tube, "tube base conditions")
    p.add_argument("--manifold", required=True)
    for name, func, help_ in (
        ("property-p", cmd_check_property_p, "constants and Euler field in the complexification"),
        ("nondegenerate", cmd_check_nondegenerate, "holomorphic non-degeneracy (totally real algebra)"),
    ):
        p = add(chk, name, func, help_)
        p.add_argument("--manifold")
        p.add_argument("--basis")
        p.add_argument("--degree", type=int, default=2)
    p = add(chk, "sufficient", cmd_check_sufficient, "the four sufficient conditions at a point")
    p.add_argument("--manifold", required=True)
    p.add_argument("--point", required=True)
    p.add_argument("--degree", type=int, default=2)

    p = groups.add_parser("fixture", help="emit a built-in example as JSON", parents=[common])
    p.add_argument("name", choices=sorted(FIXTURES))
    p.set_defaults(func=None)
    return parser


def _emit(report: dict, out: str | None) -> None:
    text = json.dumps(report, indent=2, sort_keys=False)
    print(text)
    if out:
        Path(out).write_text(text + "\n")


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s")
    if args.group == "fixture":
        # raw artifact, not a report, so it can feed other commands directly
        _emit(fixture_json(args.name), args.out)
        return EXIT_OK
    run = _Run(argv)
    command = [args.group] + ([args.cmd] if getattr(args, "cmd", None) else [])
    report: dict[str, Any] = {"command": " ".join(command), "argv": argv, "seed": args.seed}
    start = time.perf_counter()
    try:
        passed, results = args.func(run, args)
        status = EXIT_OK if passed else EXIT_FAIL
        report.update(inputs=run.inputs, passed=passed, results=results)
    except VERIFICATION_ERRORS as exc:
        status = EXIT_FAIL
        report.update(inputs=run.inputs, passed=False, error={"type": type(exc).__name__, "message": str(exc)})
    except (InputError, ser.SerializationError, ManifoldError, NotOnManifold, OutsideRegularSet, SamplingExhausted, ValueError, KeyError, TypeError) as exc:
        log.error("%s", exc)
        status = EXIT_INPUT
        report.update(inputs=run.inputs, passed=False, error={"type": type(exc).__name__, "message": str(exc)})
    report["exit_code"] = status
    report["timing"] = {"seconds": round(time.perf_counter() - start, 3)}
    try:
        _emit(report, args.out)
    except OSError as exc:
        log.error("cannot write report: %s", exc)
        return EXIT_INPUT
    return status


__all__ = ["main", "build_parser", "FIXTURES"]
