import pytest

# criterion number -> (passed, seconds, note); filled by test_acceptance
ACCEPTANCE: dict = {}


@pytest.fixture
def record_criterion():
    def record(number: int, passed: bool, seconds: float, note: str = "") -> None:
        ACCEPTANCE[number] = (passed, seconds, note)
    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        ok, secs, note = ACCEPTANCE[k]
        line = f"criterion {k:2d}: {'PASS' if ok else 'FAIL'}  ({secs:.1f} s)"
        if note:
            line += f"  {note}"
        terminalreporter.write_line(line)
