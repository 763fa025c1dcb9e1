"""Collects the acceptance verdict lines and prints them after the run."""

import pytest

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def acceptance():
    """Recorder for one acceptance criterion: returns ok so the caller can
    assert it after the line is registered."""

    def record(number: int, ok: bool, detail: str) -> bool:
        word = "PASS" if ok else "FAIL"
        ACCEPTANCE_LINES.append("criterion %d: %s  (%s)"
                                % (number, word, detail))
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for line in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(line)
