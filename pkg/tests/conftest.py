import os

import pytest
from hypothesis import settings

# HYPOTHESIS_PROFILE=thorough for a longer property-based search
settings.register_profile("thorough", max_examples=1000, deadline=None)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

_criteria: dict[int, dict] = {}


def pytest_collection_modifyitems(items):
    for item in items:
        m = item.get_closest_marker("criterion")
        if m is not None:
            num, desc = m.args
            _criteria.setdefault(num, {"desc": desc, "outcomes": []})


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.outcome != "passed"):
        return
    for num, entry in _criteria.items():
        if f"criterion_{num:02d}" in report.nodeid:
            entry["outcomes"].append(report.outcome)


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(_criteria):
        entry = _criteria[num]
        outs = entry["outcomes"]
        if not outs:
            status = "NOT RUN"
        elif all(o == "passed" for o in outs):
            status = "PASS"
        else:
            status = "FAIL"
        terminalreporter.write_line(f"criterion {num:2d}: {status:7s} {entry['desc']}")


@pytest.fixture(scope="session")
def rng():
    import numpy as np

    return np.random.default_rng(20240611)
