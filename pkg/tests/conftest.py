from __future__ import annotations

import numpy as np
import pytest

from hmcf import AngularGrid, EvolveOptions, ForcingSchedule, evolve, harmonic_support, support_of_circle


@pytest.fixture(scope="session")
def grid256():
    return AngularGrid(256)


@pytest.fixture(scope="session")
def circle_run(grid256):
    """Unit circle, f = 0, c = 0 until collapse."""
    return evolve(support_of_circle(1.0, grid=grid256), 0.0, ForcingSchedule.constant(0.0))


@pytest.fixture(scope="session")
def oval_run(grid256):
    """h = 1 + 0.3 cos 2 theta, f = 1, c = -0.1 until stop."""
    h = harmonic_support([1.0, 0.0, 0.3], grid=grid256)
    return evolve(h, np.ones(256), ForcingSchedule.constant(-0.1), EvolveOptions())


def pytest_terminal_summary(terminalreporter):
    import sys
    mod = sys.modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(results):
        terminalreporter.write_line(results[num])
