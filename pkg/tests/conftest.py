import numpy as np
import pytest

from intlinsys import IntervalLinearSystem, IntervalMatrix, IntervalVector

ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)


@pytest.fixture
def example_two():
    a = IntervalMatrix([[-4, 8], [2, 4]], [[-2, 10], [4, 6]])
    b = IntervalVector([-6, -10], [-4, -8])
    return IntervalLinearSystem(a, b)


@pytest.fixture
def example_one():
    a = IntervalMatrix([[-10, 3, 8], [-7, 0, -8], [4, 7, -7]], [[-8, 5, 10], [-5, 2, -6], [6, 9, -5]])
    b = IntervalVector([3, 6, 5], [5, 8, 7])
    return IntervalLinearSystem(a, b)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
