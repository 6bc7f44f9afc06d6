import os
import sys

import pytest
from hypothesis import strategies as st

sys.path.insert(0, os.path.dirname(__file__))

from bepeval.geometry import BBox  # noqa: E402

DATA_DIR = os.path.join(os.path.dirname(os.path.dirname(os.path.abspath(__file__))), "data")


@st.composite
def boxes(draw, lo=-500.0, hi=500.0, min_size=0.5, max_size=400.0):
    x = draw(st.floats(lo, hi, allow_nan=False, allow_infinity=False))
    y = draw(st.floats(lo, hi, allow_nan=False, allow_infinity=False))
    w = draw(st.floats(min_size, max_size, allow_nan=False, allow_infinity=False))
    h = draw(st.floats(min_size, max_size, allow_nan=False, allow_infinity=False))
    return BBox(x, y, w, h)


@st.composite
def int_boxes(draw, grid=60):
    x = draw(st.integers(0, grid - 1))
    y = draw(st.integers(0, grid - 1))
    w = draw(st.integers(1, grid - x))
    h = draw(st.integers(1, grid - y))
    return BBox(x, y, w, h)


@pytest.fixture
def data_dir():
    return DATA_DIR


ACCEPTANCE_RESULTS: dict[str, str] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for name, status in ACCEPTANCE_RESULTS.items():
        terminalreporter.write_line(f"{status:4}  {name}")
