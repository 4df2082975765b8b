"""Shared test plumbing: a pass/fail line per acceptance criterion.

Acceptance tests call ``record_criterion`` with their outcome; the summary
lines are printed after the run so a green/red status per criterion is
visible even when pytest captures stdout.
"""

_CRITERION_RESULTS = []


def record_criterion(name, passed, detail=""):
    _CRITERION_RESULTS.append((name, passed, detail))


def pytest_terminal_summary(terminalreporter):
    if not _CRITERION_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for name, passed, detail in _CRITERION_RESULTS:
        status = "PASS" if passed else "FAIL"
        line = f"[{status}] {name}"
        if detail:
            line += f" -- {detail}"
        terminalreporter.write_line(line)
