import numpy as np
import pytest

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def criterion():
    """Record one PASS/FAIL line per acceptance criterion; returns a reporter."""

    def report(number: int, title: str, checks: dict[str, bool], details: str = "") -> None:
        ok = all(checks.values())
        failed = [name for name, passed in checks.items() if not passed]
        line = f"criterion {number:2d} {'PASS' if ok else 'FAIL'}: {title}"
        if details:
            line += f" ({details})"
        if failed:
            line += f" failed checks: {', '.join(failed)}"
        ACCEPTANCE_LINES.append(line)
        print(line)
        assert ok, line

    return report


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
