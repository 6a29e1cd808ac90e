import numpy as np
import pytest

from pointcontact import CoupledSystem, make_point_interaction, make_scalar_rational

ACCEPTANCE_LINES = []


def exact_branch_d1(x):
    """Root of (-1 + s)(-2 + s) = x with s = sqrt(-λ), on the branch s(0) = 2."""
    s = (3 + np.sqrt(1 + 4 * np.asarray(x, dtype=float))) / 2
    return -(s**2)


def exact_branch_toy(x):
    """Root of λ² - λ - x = 0 through λ(0) = 1."""
    return (1 + np.sqrt(1 + 4 * np.asarray(x, dtype=float))) / 2


@pytest.fixture
def contact_d1():
    return CoupledSystem.build(make_point_interaction([0.0]), make_point_interaction([0.0]),
                               alpha=-1.0, beta=-2.0)


@pytest.fixture
def contact_d2():
    return CoupledSystem.build(make_point_interaction([0.0, 0.0]),
                               make_point_interaction([0.0, 5.0]), alpha=-1.0, beta=-2.0)


@pytest.fixture
def toy():
    return CoupledSystem.build(make_scalar_rational([0, 1]), make_scalar_rational([0, 1]),
                               alpha=0.0, beta=1.0)


def random_hermitian(rng, d, scale=1.0):
    a = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    return scale * 0.5 * (a + a.conj().T)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
