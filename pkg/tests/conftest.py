import numpy as np
import pytest

ACCEPTANCE_LINES = {}


@pytest.fixture
def rng():
    return np.random.default_rng(20211)


@pytest.fixture
def acceptance():
    """Record the outcome of an acceptance criterion for the terminal summary."""

    def record(number, title, passed, detail=""):
        ACCEPTANCE_LINES[number] = f"[{'PASS' if passed else 'FAIL'}] #{number} {title}: {detail}"
        return passed

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for n in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[n])
