import numpy as np
import pytest

from kerrbath.scenarios import CLOSED, OPEN_COLD, OPEN_HOT, ORACLE


@pytest.fixture
def closed():
    return CLOSED


@pytest.fixture
def open_hot():
    return OPEN_HOT


@pytest.fixture
def open_cold():
    return OPEN_COLD


@pytest.fixture
def small_bath():
    """Two strongly coupled modes and an off-diagonal initial point."""
    return ORACLE.replace(capital_omega=1.5, q0=1.3, p0=-0.7)


@pytest.fixture
def tau_grid():
    return np.linspace(0.0, 4.0 * np.pi, 400)


# -- acceptance report -------------------------------------------------------------

_ACCEPTANCE: list[str] = []


@pytest.fixture
def criterion():
    """Record one pass/fail line, print it, and fail the test if not passed."""

    def record(label: str, passed: bool, detail: str = "") -> None:
        line = f"{'PASS' if passed else 'FAIL'}  {label}" + (f"  [{detail}]" if detail else "")
        _ACCEPTANCE.append(line)
        print(line)
        assert passed, line

    return record


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE:
            terminalreporter.write_line(line)
