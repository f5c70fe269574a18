import random

import pytest
from hypothesis import strategies as st

from ptalg.freegroup import Word


def words(rank=2, max_size=8):
    """Hypothesis strategy: reduced words over the first ``rank`` generators."""
    letters = [g for k in range(1, rank + 1) for g in (k, -k)]
    return st.lists(st.sampled_from(letters), max_size=max_size).map(Word.reduce)


@pytest.fixture
def rng():
    return random.Random(1234)


_acceptance: dict = {}


def pytest_runtest_logreport(report):
    name = report.nodeid.rsplit("::", 1)[-1]
    if "test_acceptance" in report.nodeid and name.startswith("test_criterion_"):
        if report.when == "call" or report.failed:
            k = int(name.split("_")[2])
            _acceptance[k] = "PASS" if report.passed else "FAIL"


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    from test_acceptance import CRITERIA

    terminalreporter.section("acceptance criteria")
    for k in sorted(_acceptance):
        terminalreporter.write_line(f"criterion {k}: {_acceptance[k]} - {CRITERIA[k]}")
