import numpy as np
import pytest

from fracwave.spectral import make_grid


@pytest.fixture(scope="session")
def fine_grid():
    # resolves a = 0.1 Gaussians below 1e-8 at Nyquist and holds t <= 25
    return make_grid(200.0, 2**14)


@pytest.fixture(scope="session")
def small_grid():
    return make_grid(60.0, 2**12)


@pytest.fixture
def rng():
    return np.random.default_rng(20261014)


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
