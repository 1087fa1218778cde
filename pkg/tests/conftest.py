from fractions import Fraction

import pytest
from hypothesis import strategies as st

from katzflat import Connection, ModuleVector, SeriesMatrix, TruncatedSeries, parse_series
from katzflat.series import multi_indices


def S(text, n=1, d=3):
    return parse_series(text, n, d)


def vec(texts, n=1, d=3):
    return ModuleVector(parse_series(t, n, d) for t in texts)


def mat(rows, n=1, d=3):
    return SeriesMatrix([[parse_series(t, n, d) for t in row] for row in rows])


def connection(mats, n=1, d=3, check=True):
    return Connection([mat(m, n, d) for m in mats], check=check)


@pytest.fixture
def nilpotent():
    """n=1, r=2, A1 = [[0,1],[0,0]] at d=4."""
    return connection([[["0", "1"], ["0", "0"]]], n=1, d=4)


rationals = st.builds(Fraction, st.integers(-20, 20), st.integers(1, 6))


@st.composite
def series(draw, n, d, min_degree=0):
    monos = multi_indices(n, d, min_degree=min_degree)
    picked = draw(st.lists(st.sampled_from(monos), max_size=min(len(monos), 6), unique=True))
    terms = {idx: draw(rationals) for idx in picked}
    return TruncatedSeries(n, d, terms)


ring_shapes = st.sampled_from([(1, 4), (2, 3), (3, 2)])


def pytest_configure(config):
    config._acceptance_lines = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = getattr(config, "_acceptance_lines", [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
