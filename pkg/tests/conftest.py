import numpy as np
import pytest
from hypothesis import settings
from hypothesis import strategies as st

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")


@st.composite
def primitive_states(draw, speed=3.0):
    rho = draw(st.floats(0.05, 10.0))
    u = draw(st.floats(-speed, speed))
    v = draw(st.floats(-speed, speed))
    p = draw(st.floats(0.05, 10.0))
    return np.array([rho, u, v, p])


@st.composite
def unit_normals(draw):
    a = draw(st.floats(0.0, 2 * np.pi))
    return np.array([np.cos(a), np.sin(a)])


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


def random_states(rng, shape, speed=2.0):
    w = np.empty(tuple(shape) + (4,))
    w[..., 0] = rng.uniform(0.2, 3.0, shape)
    w[..., 1] = rng.uniform(-speed, speed, shape)
    w[..., 2] = rng.uniform(-speed, speed, shape)
    w[..., 3] = rng.uniform(0.2, 3.0, shape)
    return w


# Lines recorded by test_acceptance.py, repeated at the end of the run.
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
