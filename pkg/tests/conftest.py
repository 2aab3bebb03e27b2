"""Shared fixtures: session-scoped coefficient tables and acceptance reporting."""

from __future__ import annotations

import pytest

from cuspsums.coeffs import generate_tau


@pytest.fixture(scope="session")
def table_2e4():
    """Coefficient table to n = 20000; enough for every unit-level window."""
    return generate_tau(20_000)


@pytest.fixture(scope="session")
def table_1e5():
    return generate_tau(100_000)


_ACCEPTANCE_RESULTS: list[tuple[str, str]] = []


def record_acceptance(name: str, passed: bool, detail: str = "") -> None:
    _ACCEPTANCE_RESULTS.append((name, ("PASS" if passed else "FAIL") + (f" {detail}" if detail else "")))


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for name, status in _ACCEPTANCE_RESULTS:
        terminalreporter.write_line(f"{name}: {status}")
