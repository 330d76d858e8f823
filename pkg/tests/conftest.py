import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from detkit.forms import parse_form


@pytest.fixture
def conic():
    return parse_form("x0^2 + x1^2 - x2^2", 3)


@pytest.fixture
def cusp():
    return parse_form("x0^3 - x1^2*x2", 3)


@pytest.fixture
def smooth_conic():
    return parse_form("x0*x2 - x1^2", 3)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[n])
