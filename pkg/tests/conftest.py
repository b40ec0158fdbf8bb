import numpy as np
import pytest

from kpath.field import FieldConfig, set_field

# (name, passed, detail) rows recorded by the acceptance suite
ACCEPTANCE_RESULTS: list[tuple[str, bool, str]] = []


@pytest.fixture(autouse=True)
def _restore_field():
    previous = set_field(FieldConfig(64))
    yield
    set_field(previous)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for name, passed, detail in ACCEPTANCE_RESULTS:
        terminalreporter.write_line(f"[{'PASS' if passed else 'FAIL'}] {name}: {detail}")
