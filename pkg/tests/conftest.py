import pytest

from covertime.green_fn import build_green

_LINES = []


@pytest.fixture(scope="session")
def green_1024():
    return build_green(1024)


@pytest.fixture
def acceptance():
    """Record one pass/fail line per criterion; printed at the end of the run."""

    def record(label, ok, detail):
        line = f"[{'PASS' if ok else 'FAIL'}] {label}: {detail}"
        _LINES.append(line)
        print(line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if _LINES:
        terminalreporter.section("acceptance criteria")
        for line in _LINES:
            terminalreporter.write_line(line)
