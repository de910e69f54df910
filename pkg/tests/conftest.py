from __future__ import annotations

import pytest

_criteria = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    key = marker.args[0]
    label = marker.args[1] if len(marker.args) > 1 else item.name
    failed = report.failed or (report.when == "call" and report.skipped)
    labels, ok = _criteria.get(key, ([], True))
    if label not in labels:
        labels.append(label)
    _criteria[key] = (labels, ok and not failed)


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, label): acceptance criterion")


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(_criteria):
        labels, ok = _criteria[key]
        terminalreporter.write_line(f"criterion {key}: {'PASS' if ok else 'FAIL'}  {'; '.join(labels)}")
