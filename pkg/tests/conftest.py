import os
from pathlib import Path

import pytest

ROOT = Path(__file__).resolve().parents[1]

_criteria = []


def pytest_configure(config):
    config._acceptance_lines = _criteria


@pytest.fixture
def record_criterion():
    """Record a pass/fail line for the acceptance summary."""

    def record(label, ok, detail=""):
        _criteria.append((label, ok, detail))
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for label, ok, detail in _criteria:
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] {label}  {detail}")


@pytest.fixture(scope="session")
def data_dir():
    return Path(os.environ.get("SAXN_DATA_DIR", ROOT / "datasets"))
