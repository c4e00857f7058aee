import mpmath
import pytest
from hypothesis import settings

from besselmoments.specfun import DEFAULT_CTX, PrecisionContext

settings.register_profile("besselmoments", max_examples=10, deadline=None, derandomize=True)
settings.load_profile("besselmoments")

ACCEPTANCE_LINES: list = []


@pytest.fixture(autouse=True)
def _working_precision():
    with mpmath.workdps(DEFAULT_CTX.work_dps + 10):
        yield


@pytest.fixture(scope="session")
def ctx():
    return DEFAULT_CTX


@pytest.fixture(scope="session")
def ctx30():
    return PrecisionContext(30)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
