import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

_CRITERIA: dict[int, tuple[str, str]] = {}


@pytest.fixture
def criterion_line(request):
    """Register the one-line verdict of an acceptance criterion test."""
    def register(number: int, title: str, detail: str = ""):
        _CRITERIA[number] = (title, detail, request.node.nodeid)
    return register


def pytest_runtest_logreport(report):
    if report.when != "call":
        return
    for n, entry in list(_CRITERIA.items()):
        if len(entry) == 3 and entry[2] == report.nodeid:
            _CRITERIA[n] = (entry[0], entry[1], "PASS" if report.passed else "FAIL")


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_CRITERIA):
        title, detail, status = _CRITERIA[n]
        if status not in ("PASS", "FAIL"):
            status = "FAIL"
        terminalreporter.write_line(f"criterion {n:>2} {status}  {title}  {detail}".rstrip())
