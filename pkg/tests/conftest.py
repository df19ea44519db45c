import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(__file__))

from tptspwm.simulator import SimConfig, run_simulation  # noqa: E402


@pytest.fixture(scope="session")
def default_trace():
    """Two fundamental periods at the prototype operating point."""
    return run_simulation(SimConfig(duration=0.04))


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[key])
