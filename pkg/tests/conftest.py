"""Prints one pass/fail line per acceptance criterion at the end of the run."""

_OUTCOMES: dict[int, tuple[str, str]] = {}


def pytest_runtest_makereport(item, call):
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    number, title = mark.args
    if call.when == "call" or (call.when == "setup" and call.excinfo is not None):
        passed = call.excinfo is None
        prev = _OUTCOMES.get(number)
        failed_before = prev is not None and prev[0] == "FAIL"
        _OUTCOMES[number] = ("PASS" if passed and not failed_before else "FAIL", title)


def pytest_terminal_summary(terminalreporter):
    if not _OUTCOMES:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_OUTCOMES):
        verdict, title = _OUTCOMES[number]
        terminalreporter.write_line(f"criterion {number:2d}: {verdict}  {title}")
