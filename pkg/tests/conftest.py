import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from igacuf.laminate import Lamina, Layup  # noqa: E402

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def pagano_lamina():
    return Lamina.transversely_isotropic(25.0, 1.0, 0.5, 0.5, 0.2, 0.25)


@pytest.fixture
def crossply4(pagano_lamina):
    return Layup.equal(pagano_lamina, np.radians([0, 90, 90, 0]), 0.1)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
