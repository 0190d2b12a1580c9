import numpy as np
import pytest

_ACCEPTANCE_LINES: list[str] = []


def report(criterion: int, clause: str, ok: bool, detail: str = "") -> bool:
    """One pass/fail line per acceptance clause, shown in the terminal summary."""
    status = "PASS" if ok else "FAIL"
    line = f"[ACCEPTANCE] criterion {criterion} / {clause}: {status}"
    if detail:
        line += f"  ({detail})"
    _ACCEPTANCE_LINES.append(line)
    print(line, flush=True)  # also visible under -s and in failure captures
    return ok


def expect_fail(criterion: int, clause: str, ok: bool, detail: str = ""):
    """Clauses whose reference values are not reproducible: report and xfail."""
    report(criterion, clause, ok, detail)
    if ok:
        pytest.fail(f"clause unexpectedly passed: {clause}")
    pytest.xfail(f"{clause}: {detail}")


def log_info(criterion: int, text: str) -> None:
    """Informational acceptance-log line (reported, never asserted)."""
    line = f"[ACCEPTANCE] criterion {criterion} / {text}"
    _ACCEPTANCE_LINES.append(line)
    print(line, flush=True)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def rng():
    return np.random.default_rng(20260823)
