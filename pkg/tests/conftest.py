import numpy as np
import pytest
from hypothesis import settings

from solidhull import make_params

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")

GRID_PARAMS = [(1.0, 1.0), (1.0, 2.0), (2.0, 0.5), (0.5, 1.5)]


@pytest.fixture
def p11():
    return make_params(1, 1)


@pytest.fixture
def p12():
    return make_params(1, 2)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    import test_acceptance

    lines = test_acceptance.summary_lines()
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
