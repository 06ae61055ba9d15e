import numpy as np
import pytest
from hypothesis import settings

settings.register_profile("default", max_examples=40, deadline=None)
settings.load_profile("default")


@pytest.fixture
def rng():
    return np.random.default_rng(20240531)


def random_points(rng, count, n, scale=1.0):
    """Gaussian sample of ``count`` points of ``C^n``."""
    return scale * (rng.normal(size=(count, n)) + 1j * rng.normal(size=(count, n)))


ACCEPTANCE_LINES = []


def record_criterion(number, passed, detail):
    """Store and print one acceptance verdict line."""
    line = f"criterion {number}: {'PASS' if passed else 'FAIL'} {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    return passed


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
