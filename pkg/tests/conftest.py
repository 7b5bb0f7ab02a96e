import os

import numpy as np
import pytest
from hypothesis import settings

from weaknorms.grid import GeneratorId, GridFunction, GridSpec, sample

settings.register_profile("default", deadline=None, max_examples=60)
settings.register_profile("thorough", deadline=None, max_examples=1000)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
        terminalreporter.write_line(line)


def random_function(spec: GridSpec, k: int) -> GridFunction:
    """Deterministic mix of smooth, noisy and tie-heavy test inputs."""
    kind = k % 4
    if kind in (0, 2):
        return sample(spec, GeneratorId("random-mix", seed=k))
    rng = np.random.default_rng(1000 + k)
    vals = rng.standard_normal(spec.size)
    if kind == 3:
        # integer levels: many ties, and zeros
        vals = np.round(2 * vals)
    return GridFunction(spec, vals)


@pytest.fixture
def spec2():
    return GridSpec(2, 6.0, 64)


@pytest.fixture
def spec1():
    return GridSpec(1, 6.0, 128)
