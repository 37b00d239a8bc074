import numpy as np
import pytest

from risfd.channel import generate_channel_set
from risfd.scenarios import FIGURE_FADING, FIGURE_GEOMETRY
from risfd.sysmodel import ScenarioConfig


def channels_for(cfg, seed, geometry=FIGURE_GEOMETRY, fading=FIGURE_FADING):
    return generate_channel_set(cfg, geometry, np.random.default_rng(seed), fading)


@pytest.fixture
def cfg():
    return ScenarioConfig()


@pytest.fixture
def make_channels():
    return channels_for


def random_phases(rng, K):
    return rng.uniform(0.0, 2 * np.pi, K)


# one line per acceptance criterion, printed after the run
ACCEPTANCE_RESULTS = []


def record(criterion, passed, detail):
    ACCEPTANCE_RESULTS.append((criterion, bool(passed), detail))
    assert passed, f"{criterion}: {detail}"


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for criterion, passed, detail in ACCEPTANCE_RESULTS:
        terminalreporter.write_line(f"{'PASS' if passed else 'FAIL'} {criterion}: {detail}")
