"""Shared pytest wiring: the acceptance-criterion summary.

Tests in test_acceptance.py are tagged with the criterion they
exercise; after the run a one-line PASS/FAIL verdict is printed per
criterion, aggregating every tagged test (a criterion passes only if
all of its tests passed).
"""

from __future__ import annotations

import pytest

_CRITERION_RESULTS: dict[int, list[bool]] = {}


def pytest_configure(config):
    config.addinivalue_line(
        "markers",
        "criterion(n): tags a test as part of acceptance criterion n",
    )


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    if report.failed:
        _CRITERION_RESULTS.setdefault(marker.args[0], []).append(False)
    elif report.when == "call" and report.passed:
        _CRITERION_RESULTS.setdefault(marker.args[0], []).append(True)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _CRITERION_RESULTS:
        return
    terminalreporter.write_sep("=", "acceptance criteria")
    for number in sorted(_CRITERION_RESULTS):
        verdict = "PASS" if all(_CRITERION_RESULTS[number]) else "FAIL"
        terminalreporter.write_line(f"ACCEPTANCE {number}: {verdict}")
