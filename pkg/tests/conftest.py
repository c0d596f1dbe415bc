"""Collects acceptance-criterion outcomes and prints one line per criterion."""
import pytest

_criteria: dict[str, tuple[int, str]] = {}
_results: dict[int, bool] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


def pytest_collection_modifyitems(items):
    for item in items:
        mark = item.get_closest_marker("criterion")
        if mark is not None:
            _criteria[item.nodeid] = tuple(mark.args)


@pytest.hookimpl(tryfirst=True)
def pytest_runtest_logreport(report):
    if report.nodeid not in _criteria:
        return
    number = _criteria[report.nodeid][0]
    if report.when == "call" or report.failed:
        _results[number] = _results.get(number, True) and report.passed


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    terminalreporter.section("acceptance criteria")
    titles = {n: t for n, t in _criteria.values()}
    for number in sorted(_results):
        status = "PASS" if _results[number] else "FAIL"
        terminalreporter.write_line(f"criterion {number:2d}: {status}  {titles[number]}")
