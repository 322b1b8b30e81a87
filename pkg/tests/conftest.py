from fractions import Fraction

import pytest
from hypothesis import strategies as st

from degen_laguerre.exact_core import MultiPoly

ACCEPTANCE_LINES = []

rationals = st.builds(
    Fraction,
    st.integers(min_value=-20, max_value=20),
    st.integers(min_value=1, max_value=9),
)
exponents = st.tuples(*(st.integers(min_value=0, max_value=3) for _ in range(3)))
polys = st.dictionaries(exponents, rationals, max_size=5).map(MultiPoly)
xfree_exponents = st.tuples(st.just(0), st.integers(0, 3), st.integers(0, 3))
xfree_polys = st.dictionaries(xfree_exponents, rationals, max_size=4).map(MultiPoly)


@pytest.fixture
def acceptance_log():
    return ACCEPTANCE_LINES


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
