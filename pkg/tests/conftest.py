"""Shared fixtures and the acceptance-summary hook."""

import numpy as np
import pytest

#: one summary line per acceptance criterion, filled by test_acceptance
ACCEPTANCE_LINES = {}


@pytest.fixture
def rng():
    return np.random.default_rng(2053)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[num])
