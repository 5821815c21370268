import numpy as np
import pytest

from pieceperm import _backend
from pieceperm.gf2n import make_field

# filled by test_acceptance; echoed after the run so the lines survive output capture
ACCEPTANCE_LINES: dict[int, str] = {}


@pytest.fixture(scope="session")
def f6():
    return make_field(6, s=2)


@pytest.fixture(scope="session")
def f10():
    return make_field(10, s=2)


@pytest.fixture(scope="session")
def f12():
    return make_field(12, s=4)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture(params=_backend.available())
def backend(request):
    return request.param


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for k in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[k])
