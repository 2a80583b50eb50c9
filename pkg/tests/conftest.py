import pytest

from ctxlogic.io import fixture_path, load_model, load_rayset

_acceptance = {}


@pytest.fixture(scope="session")
def rayset():
    def load(name):
        return load_rayset(fixture_path(name))

    return load


@pytest.fixture(scope="session")
def ks18(rayset):
    rs = rayset("ks18_dim4.json")
    return rs, rs.poset()


@pytest.fixture(scope="session")
def three_bases(rayset):
    rs = rayset("dim3_three_bases.json")
    return rs, rs.poset()


@pytest.fixture
def model_dim3():
    return load_model(fixture_path("model_dim3.json"))


def pytest_runtest_logreport(report):
    if "test_acceptance.py" in report.nodeid and report.when == "call":
        _acceptance[report.nodeid.split("::")[-1]] = report.outcome
    elif "test_acceptance.py" in report.nodeid and report.when == "setup" and report.outcome != "passed":
        _acceptance[report.nodeid.split("::")[-1]] = report.outcome


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for name, outcome in _acceptance.items():
        verdict = "PASS" if outcome == "passed" else "FAIL"
        terminalreporter.write_line(f"{verdict}  {name}")
