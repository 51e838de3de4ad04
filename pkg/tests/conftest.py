import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from ubkit import PureState, SeesawOptions

_acceptance = []


def pytest_runtest_logreport(report):
    if "test_acceptance.py" in report.nodeid and report.when == "call":
        _acceptance.append((report.nodeid.split("::")[-1], report.outcome))


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for name, outcome in _acceptance:
        terminalreporter.write_line(f"{'PASS' if outcome == 'passed' else 'FAIL'}  {name}")


@pytest.fixture
def opts():
    return SeesawOptions(seed=7)


def ket(shape, *amps, label=""):
    return PureState.from_amplitudes(shape, amps, label)


def random_state(rng, shape, label=""):
    d = int(np.prod(shape))
    return PureState.from_amplitudes(shape, rng.standard_normal(d) + 1j * rng.standard_normal(d), label)
