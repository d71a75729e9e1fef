import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

_RESULTS = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance(number, label): numbered acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker is None:
        return
    number, label = marker.args
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        detail = "; ".join(str(v) for k, v in item.user_properties if k == "detail")
        _RESULTS[number] = (label, report.outcome, report.duration, detail)


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_RESULTS):
        label, outcome, duration, detail = _RESULTS[number]
        status = "PASS" if outcome == "passed" else "FAIL"
        line = f"criterion {number:2d}: {status}  {label}  ({duration:.2f} s)"
        if detail:
            line += f"  [{detail}]"
        terminalreporter.write_line(line)
