import numpy as np
import pytest
from hypothesis import settings
from hypothesis import strategies as st

from h1pick import DegenerateTriangle, make_diameter, make_triangle

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")

TWO_PI = 2 * np.pi

angles = st.floats(0.0, TWO_PI, allow_nan=False, exclude_max=True)


@st.composite
def triangles(draw, gap=0.05):
    """Triangles containing the origin: all three arcs between vertices are below ``π - gap``."""
    a0 = draw(angles)
    g1 = draw(st.floats(2 * gap, np.pi - gap))
    u = draw(st.floats(0.0, 1.0))
    lo, hi = np.pi - g1 + gap, np.pi - gap
    g2 = lo + u * (hi - lo)
    return make_triangle(a0, a0 + g1, a0 + g1 + g2)


diameters = angles.map(make_diameter)
extreme_measures = st.one_of(diameters, triangles())


@st.composite
def disc_points(draw, radius=0.95):
    r = draw(st.floats(0.0, radius))
    t = draw(angles)
    return complex(r * np.cos(t), r * np.sin(t))


def random_triangle(rng, margin=1e-2):
    while True:
        try:
            m = make_triangle(*rng.uniform(0, TWO_PI, 3))
        except DegenerateTriangle:
            continue
        if min(m.weights) > margin:
            return m


def random_disc(rng, n, radius=0.9):
    r = radius * np.sqrt(rng.uniform(0, 1, n))
    return r * np.exp(1j * rng.uniform(0, TWO_PI, n))


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


_ACCEPTANCE_LINES: list[str] = []


def record_acceptance(line: str) -> None:
    _ACCEPTANCE_LINES.append(line)


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
