import re

import numpy as np
import pytest
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

EX1_A3 = np.array([[-1.0, 2, 2], [2, -1, -1], [2, -2, -1]])
EX2_A3 = np.array([[-1.0, -1, -2], [-2, -1, -1], [-3, -2, -1]])


def square(nmin=1, nmax=5, lo=-2.0, hi=2.0):
    """Hypothesis strategy for square float matrices with bounded entries."""
    elems = st.floats(lo, hi, allow_nan=False, allow_infinity=False)
    return st.integers(nmin, nmax).flatmap(lambda n: arrays(np.float64, (n, n), elements=elems))


@pytest.fixture
def ex1():
    return EX1_A3.copy()


@pytest.fixture
def ex2():
    return EX2_A3.copy()


_CRITERIA = {}


def pytest_runtest_logreport(report):
    m = re.search(r"test_acceptance\.py::test_criterion_(\d+)_", report.nodeid)
    if not m:
        return
    key = int(m.group(1))
    failed = report.failed or (report.when == "call" and report.skipped)
    if report.when == "call" or failed:
        prev = _CRITERIA.get(key, "PASS")
        _CRITERIA[key] = "FAIL" if failed or prev == "FAIL" else "PASS"


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(_CRITERIA):
        terminalreporter.write_line(f"criterion {key}: {_CRITERIA[key]}")
