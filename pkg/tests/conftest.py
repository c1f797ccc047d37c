import pytest

_ACCEPTANCE: list[str] = []


@pytest.fixture
def record():
    """Record one PASS/FAIL line for the acceptance summary and echo it."""
    def _record(label: str, ok: bool, detail: str) -> bool:
        line = f"{'PASS' if ok else 'FAIL'} {label}: {detail}"
        _ACCEPTANCE.append(line)
        print(line)
        return ok
    return _record


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE:
            terminalreporter.write_line(line)
