"""Shared fixtures: acceptance-criteria reporting.

The acceptance tests record one PASS/FAIL line each; the terminal-summary
hook re-prints the collected lines after the run so they survive output
capture and land in piped logs.
"""

import pytest

_LINES_KEY = pytest.StashKey[list]()


@pytest.fixture(scope="session")
def acceptance(request):
    """Return a reporter callable: ``acceptance(num, ok, detail)``.

    Records the line for the end-of-run summary, echoes it into the test's
    captured output, then asserts ``ok``.
    """
    lines = request.config.stash.setdefault(_LINES_KEY, [])

    def _report(num: int, ok: bool, detail: str) -> None:
        line = f"{'PASS' if ok else 'FAIL'} [criterion {num}] {detail}"
        lines.append(line)
        print(line)
        assert ok, line

    return _report


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(_LINES_KEY, None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
