import numpy as np
import pytest

from dispersive_ring import presets

# (criterion, passed, detail) lines collected by the acceptance suite
CRITERIA: list[tuple[str, bool, str]] = []


@pytest.fixture(scope="session")
def eit_cavity():
    return presets.eit_cavity()


@pytest.fixture(scope="session")
def eit_medium():
    return presets.eit_medium()


@pytest.fixture(scope="session")
def cad_cavity():
    return presets.cad_cavity()


@pytest.fixture(scope="session")
def cad_medium():
    return presets.cad_medium()


@pytest.fixture(scope="session")
def reference_cavity():
    return presets.reference_cavity()


@pytest.fixture
def rng():
    return np.random.default_rng(20240517)


@pytest.fixture
def criterion():
    """Record a pass/fail line for the end-of-run acceptance summary."""

    def record(name: str, passed: bool, detail: str) -> bool:
        CRITERIA.append((name, bool(passed), detail))
        return passed

    return record


def pytest_terminal_summary(terminalreporter):
    if not CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for name, passed, detail in sorted(CRITERIA, key=lambda c: c[0]):
        terminalreporter.write_line(f"{'PASS' if passed else 'FAIL'}  {name}: {detail}")
