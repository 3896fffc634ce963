import numpy as np
import pytest

from states import random_density_matrix, random_pure_state, random_symmetric_x

@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def make_state():
    return random_density_matrix


@pytest.fixture
def make_pure():
    return random_pure_state


@pytest.fixture
def make_x():
    return random_symmetric_x


def pytest_terminal_summary(terminalreporter):
    lines = []
    for reports in terminalreporter.stats.values():
        for rep in reports:
            if getattr(rep, "when", None) != "call":
                continue
            lines.extend(v for k, v in getattr(rep, "user_properties", ()) if k == "acceptance")
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)
