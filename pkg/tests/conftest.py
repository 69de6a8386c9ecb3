import pytest

# (criterion number, passed, summary) recorded by test_acceptance
ACCEPTANCE: list[tuple[int, bool, str]] = []


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number, ok, summary in sorted(ACCEPTANCE):
        terminalreporter.write_line(f"criterion {number}: {'PASS' if ok else 'FAIL'}  {summary}")


@pytest.fixture
def record():
    def _record(number: int, ok: bool, summary: str) -> None:
        ACCEPTANCE.append((number, ok, summary))
        print(f"criterion {number}: {'PASS' if ok else 'FAIL'}  {summary}")
    return _record
