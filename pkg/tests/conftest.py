import numpy as np
import pytest

from sqso import fixtures

ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def bfam_pair():
    return fixtures.b_family_pair(("2/3", "5/6", "1"))


@pytest.fixture
def weak():
    return fixtures.weak_example_pair()


@pytest.fixture
def yfam_pair():
    return fixtures.y_family_pair("1", ("0", "1/2", "1"))


@pytest.fixture
def cyclic():
    return fixtures.cyclic_permutation_pair()


@pytest.fixture
def constant_pair():
    from sqso.operators import validate_pair
    return validate_pair([[1, 1], [1, 1]], [["1/2", "1/2"], ["1/2", "1/2"]])


@pytest.fixture
def identity_pair():
    from sqso.numerics import RationalMatrix
    from sqso.operators import validate_pair
    return validate_pair(RationalMatrix.identity(3), RationalMatrix.ones(3))
