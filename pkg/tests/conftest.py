import re

import pytest
from hypothesis import HealthCheck, settings

from steinhaus import new_basis, parse_interval, decompose

settings.register_profile(
    "repo", deadline=None, max_examples=40,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.function_scoped_fixture],
)
settings.load_profile("repo")


@pytest.fixture(scope="session")
def basis20():
    b = new_basis("1/20")
    b.ensure(60)
    return b


@pytest.fixture(scope="session")
def run200():
    """The 200-step run on [0, 1) shared by several acceptance criteria."""
    return decompose(parse_interval("[0,1)"), "1/20", 200)


_CRITERION = re.compile(r"test_criterion_(\d+)")
_results: dict[int, list[str]] = {}


def pytest_runtest_logreport(report):
    m = _CRITERION.search(report.nodeid)
    if not m:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        _results.setdefault(int(m.group(1)), []).append(report.outcome)


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_results):
        verdict = "PASS" if all(o == "passed" for o in _results[n]) else "FAIL"
        terminalreporter.write_line(f"criterion {n}: {verdict}")
