import math

import numpy as np
import pytest
from hypothesis import strategies as st

from capacityloss import Polygon

_acceptance = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("acceptance")
    if mark is None:
        return
    n, title = mark.args
    if rep.when == "call" or (rep.when == "setup" and rep.outcome != "passed"):
        _acceptance[n] = (title, rep.outcome)


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_acceptance):
        title, outcome = _acceptance[n]
        status = "PASS" if outcome == "passed" else "FAIL"
        terminalreporter.write_line(f"criterion {n}: {status}  {title}")


def star_polygon(radii, gaps):
    """Polygon with vertices at increasing angles around the origin."""
    angles = np.cumsum(gaps) / np.sum(gaps) * 2 * math.pi
    return Polygon(tuple(r * complex(math.cos(a), math.sin(a)) for r, a in zip(radii, angles)))


@st.composite
def polygons(draw, min_vertices=3, max_vertices=9):
    n = draw(st.integers(min_vertices, max_vertices))
    radii = draw(st.lists(st.floats(0.3, 2.0), min_size=n, max_size=n))
    gaps = draw(st.lists(st.floats(0.2, 1.0), min_size=n, max_size=n))
    # every angular gap must stay below pi so the origin is interior
    if max(gaps) / sum(gaps) * 2 * math.pi >= 0.95 * math.pi:
        gaps = [1.0] * n
    return star_polygon(radii, gaps)


def random_polygon(rng, n=None):
    n = n or int(rng.integers(3, 10))
    gaps = rng.uniform(0.2, 1.0, n)
    while gaps.max() / gaps.sum() * 2 * math.pi >= 0.95 * math.pi:
        gaps = rng.uniform(0.2, 1.0, n)
    return star_polygon(rng.uniform(0.3, 2.0, n), gaps)
