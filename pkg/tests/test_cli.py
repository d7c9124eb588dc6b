import json
import subprocess
import sys

import pytest

from crreg.cli import FIXTURES, main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, json.loads(out) if out.strip() else None


def fixture(capsys, tmp_path, name):
    code, data = run(capsys, "fixture", name)
    assert code == 0
    path = tmp_path / f"{name}.json"
    path.write_text(json.dumps(data))
    return str(path)


@pytest.fixture
def files(capsys, tmp_path):
    return lambda name: fixture(capsys, tmp_path, name)


def test_all_fixtures_emit(capsys):
    for name in FIXTURES:
        code, data = run(capsys, "fixture", name)
        assert code == 0 and isinstance(data, dict)


def test_hol_solve(capsys, files, tmp_path):
    out = tmp_path / "hol.json"
    code, rep = run(capsys, "hol", "solve", "--manifold", files("heisenberg"), "--degree", "2", "--out", str(out))
    assert code == 0 and rep["passed"]
    assert rep["results"]["dim_real"] == 8 and rep["results"]["totally_real"]
    assert json.loads(out.read_text())["results"]["dim_real"] == 8
    assert rep["command"] == "hol solve" and len(rep["inputs"]["manifold"]) == 64


def test_hol_stabilize(capsys, files):
    code, rep = run(capsys, "hol", "solve", "--manifold", files("heisenberg"), "--degree", "2", "--stabilize")
    assert code == 0 and rep["results"]["stabilization"]["stable"]


def test_reports_are_deterministic(capsys, files):
    m = files("light-cone")
    _, a = run(capsys, "check", "tube", "--manifold", m, "--seed", "3")
    _, b = run(capsys, "--seed", "3", "check", "tube", "--manifold", m)
    for r in (a, b):
        r.pop("timing")
        r.pop("argv")
    assert a == b


def test_pipeline_from_reports(capsys, files, tmp_path):
    hol = tmp_path / "hol.json"
    assert main(["hol", "solve", "--manifold", files("heisenberg"), "--out", str(hol)]) == 0
    capsys.readouterr()
    code, grade = run(capsys, "lie", "grade", "--basis", str(hol))
    assert code == 0 and grade["results"]["dims"] == {"-1": 2, "0": 4, "1": 2}
    code, const = run(capsys, "lie", "constants", "--basis", str(hol))
    assert code == 0 and const["results"]["jacobi"]
    code, phi = run(capsys, "reg", "phi", "--basis", str(hol), "--point", '[1, {"re": "0", "im": "1"}]')
    assert code == 0 and len(phi["results"]["plucker"]["coords"]) == 28
    code, ver = run(capsys, "reg", "verify", "--basis", str(hol), "--map", files("heisenberg-inversion"), "--samples", "5")
    assert code == 0 and ver["results"]["all_equal"]


def test_perturbed_nu_exits_one(capsys, files, tmp_path):
    hol = tmp_path / "hol.json"
    nu = tmp_path / "nu.json"
    m = files("heisenberg")
    g = files("heisenberg-dilation")
    main(["hol", "solve", "--manifold", m, "--out", str(hol)])
    assert main(["lie", "pushforward", "--basis", str(hol), "--map", g, "--perturb", "--out", str(nu)]) == 0
    capsys.readouterr()
    code, rep = run(capsys, "reg", "verify", "--basis", str(hol), "--map", g, "--nu", str(nu), "--samples", "4")
    assert code == 1 and not rep["passed"]
    w = rep["results"]["witnesses"]
    assert len(w) == 4 and w[0]["point"] and w[0]["phi_of_image"] != w[0]["tau_of_phi"]


def test_duplicated_form_exits_one(capsys, files):
    code, rep = run(capsys, "check", "form", "--manifold", files("duplicated-form"))
    assert code == 1 and rep["results"]["independent"] is False


def test_orbit(capsys, files):
    code, rep = run(capsys, "bir", "orbit", "--manifold", files("heisenberg"), "--map", files("scale-w"), "--samples", "6")
    assert code == 1 and rep["results"]["witnesses"][0]["reason"] == "image not on M"
    code, rep = run(capsys, "bir", "orbit", "--manifold", files("heisenberg"), "--map", files("heisenberg-affine"))
    assert code == 0 and rep["results"]["checked"] == 20


def test_bir_extract_and_reconstruct(capsys, files, tmp_path):
    ext = tmp_path / "ext.json"
    assert main(["bir", "extract", "--map", files("inversion-symbolic"), "--out", str(ext)]) == 0
    rep = json.loads(capsys.readouterr().out)
    assert rep["results"]["denominator_contract"]
    code, rec = run(capsys, "bir", "reconstruct", "--pq", str(ext), "--checks", "10")
    assert code == 0 and rec["results"]["derivative_checks"] == 10
    code, _ = run(capsys, "bir", "extract", "--map", files("heisenberg-inversion"))
    assert code == 2


def test_checks(capsys, files):
    m = files("heisenberg")
    assert run(capsys, "check", "property-p", "--manifold", m)[0] == 0
    assert run(capsys, "check", "nondegenerate", "--manifold", m)[0] == 0
    assert run(capsys, "check", "sufficient", "--manifold", m, "--point", "[0, 0]")[0] == 0
    assert run(capsys, "check", "property-p", "--basis", files("sl2-algebra"))[0] == 0
    assert run(capsys, "check", "tube", "--manifold", files("light-cone"))[0] == 0
    code, rep = run(capsys, "check", "sufficient", "--manifold", m, "--point", "[1, 0]")
    assert code == 2 and rep["error"]["type"] == "NotOnManifold"


def test_input_errors(capsys, files, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    code, rep = run(capsys, "hol", "solve", "--manifold", str(bad))
    assert code == 2 and rep["exit_code"] == 2
    code, rep = run(capsys, "hol", "solve", "--manifold", str(tmp_path / "missing.json"))
    assert code == 2
    code, rep = run(capsys, "check", "form", "--manifold", files("light-cone"))
    assert code == 2
    code, rep = run(capsys, "reg", "phi", "--basis", files("sl2-algebra"), "--point", "[1, 2]")
    assert code == 2  # dimension mismatch
    code, rep = run(capsys, "bir", "orbit", "--manifold", files("light-cone"), "--map", files("heisenberg-inversion"))
    assert code == 2
    assert main(["nonsense"]) == 2
    capsys.readouterr()


def test_module_entry_point(tmp_path):
    proc = subprocess.run([sys.executable, "-m", "crreg", "fixture", "heisenberg"], capture_output=True, text=True, check=True)
    assert json.loads(proc.stdout)["type"] == "quadric"
