import sys

import pytest

from siegel.radius import estimate_radius
from siegel.rotation import golden, silver
from siegel.series import Kind, build_linearized, build_nonlinear
from siegel.weyl import weyl_sums


@pytest.fixture(scope="session")
def gold():
    return golden()


@pytest.fixture(scope="session")
def silv():
    return silver()


@pytest.fixture(scope="session")
def nonlinear_4096(gold):
    return build_nonlinear(gold, 4096)


@pytest.fixture(scope="session")
def linearized_8192(gold):
    return build_linearized(gold, 8192)


@pytest.fixture(scope="session")
def bracket_4096(gold, nonlinear_4096):
    return estimate_radius(gold, 4096, 0.005, Kind.NONLINEAR, table=nonlinear_4096)


@pytest.fixture(scope="session")
def weyl_q20(gold):
    return weyl_sums(gold, gold.q(20))


def pytest_terminal_summary(terminalreporter):
    mod = next((m for name, m in list(sys.modules.items()) if name.endswith("test_acceptance")), None)
    lines = getattr(mod, "RESULTS", [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
