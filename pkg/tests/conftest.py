import os
import re

import pytest

os.environ.setdefault("ARITHTHETA_CACHE", "")

_criteria: dict[int, str] = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    m = re.match(r"test_criterion_(\d+)", item.name)
    if m and (rep.when == "call" or rep.outcome != "passed"):
        k = int(m.group(1))
        if rep.when == "call" or k not in _criteria:
            _criteria[k] = "PASS" if rep.outcome == "passed" else "FAIL"


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(_criteria):
        terminalreporter.write_line(f"criterion {k:2d}: {_criteria[k]}")
