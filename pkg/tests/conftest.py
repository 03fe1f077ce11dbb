import numpy as np
import pytest

from granulab.closure import run_experiment

# one line per acceptance criterion, echoed in the terminal summary
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def grid21():
    return np.linspace(0.0, 1.0, 21)


@pytest.fixture(scope="session")
def mesh21(grid21):
    return np.meshgrid(grid21, grid21, indexing="ij")


@pytest.fixture(scope="session")
def reference_report():
    return run_experiment()
