import numpy as np
import pytest

ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def rng():
    return np.random.default_rng(20241016)


def random_symmetric(rng, n):
    x = rng.normal(size=(n, n))
    return x + x.T


def random_density(rng, n, rank=None):
    x = rng.normal(size=(n, rank or n))
    rho = x @ x.T
    return rho / np.trace(rho)
