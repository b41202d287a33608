from fractions import Fraction

import pytest
from hypothesis import strategies as st

from ordsched.core import Realization


@st.composite
def realizations(draw, max_n=10, max_size=8, grid=(1, 2, 3, 4, 6)):
    """Sorted realizations over small rational grids."""
    d = draw(st.sampled_from(grid))
    sizes = draw(st.lists(st.integers(0, max_size * d), max_size=max_n))
    return Realization(tuple(sorted((Fraction(s, d) for s in sizes), reverse=True)))


@pytest.fixture
def four_ones():
    return Realization(tuple(Fraction(x) for x in (4, 1, 1, 1, 1)))


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
