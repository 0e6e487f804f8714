"""Shared pytest wiring: acceptance criterion reporting."""

import pytest

ACCEPTANCE_LINES = []


@pytest.fixture
def acceptance():
    """Record a one-line pass/fail verdict for an acceptance criterion."""

    def _record(number: int, passed: bool, description: str) -> None:
        status = "PASS" if passed else "FAIL"
        ACCEPTANCE_LINES.append(f"criterion {number}: {status} - {description}")

    return _record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
