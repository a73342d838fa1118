import numpy as np
import pytest

from mollint.arith import sieve_build
from mollint.zeta import find_zeros


@pytest.fixture(scope="session")
def sieve():
    return sieve_build(20_000)


@pytest.fixture(scope="session")
def zeros_low():
    """Zeros with ordinates in (10, 100)."""
    return find_zeros(10.0, 100.0)


@pytest.fixture(scope="session")
def zeros_1k():
    """Complete zero table covering [1000, 2000] (used by the pair
    correlation, Gonek, and inequality suites)."""
    table = find_zeros(995.0, 2005.0)
    assert table.claimed_complete
    return table


@pytest.fixture()
def rng():
    return np.random.default_rng(20260823)


# one line per acceptance criterion, echoed after the test summary so the
# verdicts survive output capture
ACCEPTANCE_LINES: list = []


@pytest.fixture(scope="session")
def acceptance_log():
    return ACCEPTANCE_LINES


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
