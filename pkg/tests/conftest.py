import pytest
from hypothesis import HealthCheck, settings

from crreg import catalog
from crreg.holsolver import complexify, solve_hol

settings.register_profile("exact", deadline=None, max_examples=60, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("exact")

_acceptance: dict[str, str] = {}


@pytest.fixture(scope="session")
def heisenberg_basis():
    return solve_hol(catalog.heisenberg(), 2)


@pytest.fixture(scope="session")
def heisenberg_l(heisenberg_basis):
    return complexify(heisenberg_basis)[0]


@pytest.fixture(scope="session")
def cone_basis():
    return solve_hol(catalog.light_cone(), 2)


@pytest.fixture(scope="session")
def cone_l(cone_basis):
    return complexify(cone_basis)[0]


@pytest.fixture(scope="session")
def sl2():
    return catalog.sl2_algebra()


def pytest_runtest_logreport(report):
    if "test_acceptance.py" in report.nodeid and "::test_criterion_" in report.nodeid:
        name = report.nodeid.split("::")[-1]
        if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
            _acceptance[name] = "PASS" if report.outcome == "passed" else "FAIL"


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(_acceptance, key=lambda s: int(s.split("_")[2])):
        num = name.split("_")[2]
        terminalreporter.write_line(f"criterion {num}: {_acceptance[name]}  ({name})")
