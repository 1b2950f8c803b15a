import sys
from pathlib import Path

import numpy as np
import pytest

from gradex import NetworkConfig
from gradex.geometry import NodePositions

sys.path.insert(0, str(Path(__file__).parent))

GOLDEN = Path(__file__).parent / "golden"

# filled by tests/test_acceptance.py, printed once at the end of the run
ACCEPTANCE_LINES = []


@pytest.fixture
def ref_cfg():
    """Reference scenario: R=100 m, 30 dBm, -174 dBm/Hz, 10 MHz, alpha=2, G0=1e-7."""
    return NetworkConfig(n=1000, beta=0.3)


def positions(points, radius=100.0):
    return NodePositions(coords=np.asarray(points, dtype=float), radius=radius)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
