import os

import numpy as np
import pytest

_CRITERIA = []


@pytest.fixture
def criterion():
    """Record one acceptance line and assert it."""

    def record(number, label, ok, detail=""):
        _CRITERIA.append((number, label, bool(ok), detail))
        assert ok, f"criterion {number} ({label}) failed: {detail}"

    return record


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number, label, ok, detail in sorted(_CRITERIA, key=lambda c: str(c[0])):
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] {number:>3} {label}: {detail}")


def pytest_collection_modifyitems(config, items):
    if os.environ.get("CGLMP_LARGE") == "1":
        return
    skip = pytest.mark.skip(reason="large-d check; set CGLMP_LARGE=1 to run")
    for item in items:
        if "large" in item.keywords:
            item.add_marker(skip)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)
