import os

import pytest
from hypothesis import HealthCheck, settings

from betalab.algebraic import parse_polynomial, unique_positive_root
from betalab.beta_core import classify

settings.register_profile(
    "default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.register_profile("ci", max_examples=200, deadline=None)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


@pytest.fixture(scope="session")
def gamma():
    return unique_positive_root(parse_polynomial("x^3-x^2-x-1"))


@pytest.fixture(scope="session")
def golden():
    return unique_positive_root(parse_polynomial("x^2-x-1"))


@pytest.fixture(scope="session")
def gamma_sq(gamma):
    return (gamma.element() ** 2).to_algebraic_real()


@pytest.fixture(scope="session")
def descriptors(gamma, golden, gamma_sq):
    return {
        "2": classify(2),
        "golden": classify(golden),
        "gamma": classify(gamma),
        "gamma_sq": classify(gamma_sq),
    }


# acceptance report: one line per criterion at the end of the run

_ACCEPTANCE = {}


def pytest_runtest_makereport(item, call):
    marker = item.get_closest_marker("acceptance")
    if marker is None or call.when != "call":
        return
    number, title = marker.args
    ok = call.excinfo is None
    _ACCEPTANCE[number] = (ok, title, call.duration)


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_ACCEPTANCE):
        ok, title, secs = _ACCEPTANCE[number]
        terminalreporter.write_line(f"criterion {number:>2}: {'PASS' if ok else 'FAIL'}  ({secs:6.2f} s)  {title}")
