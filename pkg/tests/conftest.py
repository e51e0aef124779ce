"""Shared fixtures: windows, parameter sets and one session-wide certificate.

Certification of the reference B-spline setup is the most expensive fixture,
so it is computed once per session and reused by the transform and CLI tests
that need a valid certificate.
"""

import pytest

from alphamod.certify import certify
from alphamod.windows import AlphaParams, make_bspline, make_gaussian


@pytest.fixture(scope="session")
def b1():
    return make_bspline(1)


@pytest.fixture(scope="session")
def gauss():
    return make_gaussian()


@pytest.fixture(scope="session")
def ahalf():
    return AlphaParams(alpha=0.5)


@pytest.fixture(scope="session")
def cert_b1_half(b1, ahalf):
    return certify(b1, ahalf, xi_max=1000.0, tol=1e-2)


@pytest.fixture(scope="session")
def acceptance_report(pytestconfig):
    """Collector for one pass/fail line per acceptance criterion."""
    lines = []
    pytestconfig._acceptance_lines = lines
    return lines


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = getattr(config, "_acceptance_lines", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
