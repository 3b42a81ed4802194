from pathlib import Path

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from example_data import (
    EXAMPLE_A,
    EXAMPLE_APINV,
    EXAMPLE_UPDATE,
    EXAMPLE_W1_PINV,
    EXAMPLE_W2_PINV,
    EXAMPLE_X,
    EXAMPLE_XY,
    EXAMPLE_Y,
)

settings.register_profile(
    "default", max_examples=60, deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")

FIXTURES = Path(__file__).resolve().parents[1] / "src" / "pinvupdate" / "fixtures" / "worked_example"

# filled by test_acceptance, printed at the end of the session
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


def as_array(rows):
    return np.array([[float(v) for v in row] for row in rows], dtype=complex)


@pytest.fixture
def example():
    return {
        "A": as_array(EXAMPLE_A),
        "X": as_array(EXAMPLE_X),
        "Y": as_array(EXAMPLE_Y),
        "apinv": as_array(EXAMPLE_APINV),
        "xy": as_array(EXAMPLE_XY),
        "w1_pinv": as_array(EXAMPLE_W1_PINV),
        "w2_pinv": as_array(EXAMPLE_W2_PINV),
        "update": as_array(EXAMPLE_UPDATE),
    }


@pytest.fixture
def fixture_dir():
    return FIXTURES


@pytest.fixture(scope="session")
def acceptance_log():
    return ACCEPTANCE_LINES
