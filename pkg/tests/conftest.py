import sys
from pathlib import Path

import pytest

from subalg import as_finite_sa, full_fsa
from subalg.fixtures import load_fixture

sys.path.insert(0, str(Path(__file__).parent))

_criteria = {}


@pytest.fixture(scope="session")
def f12():
    return load_fixture("f12")


@pytest.fixture(scope="session")
def full22():
    return load_fixture("full22")


@pytest.fixture(scope="session")
def sub3():
    return load_fixture("sub3")


@pytest.fixture(scope="session")
def f12_fn():
    return full_fsa(1, 2)


@pytest.fixture(scope="session")
def full23():
    return as_finite_sa(full_fsa(2, 3))


def pytest_runtest_logreport(report):
    if "test_acceptance.py::test_criterion_" not in report.nodeid:
        return
    name = report.nodeid.split("::test_criterion_")[1]
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        _criteria[name] = "PASS" if report.outcome == "passed" else "FAIL"


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(_criteria):
        number, _, label = name.partition("_")
        terminalreporter.write_line(f"criterion {int(number):2d} {label.replace('_', ' '):32s} {_criteria[name]}")
