import numpy as np
import pytest

from fctdenoise.kernel import KernelParams
from fctdenoise.transform import GridSpec


@pytest.fixture
def params():
    return KernelParams(2.0)


@pytest.fixture
def desk_grid():
    """512-point grid, step 0.005, containing x = 0 at index 255."""
    return GridSpec(x0=-255 * 0.005, dx=0.005, n=512)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
