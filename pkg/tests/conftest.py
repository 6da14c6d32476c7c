import mpmath
import pytest
from hypothesis import strategies as st

from perioda.combs import CombTreeShape
from perioda.tableaux import TableauShape
from perioda.urn import UrnSpec


@st.composite
def urn_specs(draw, max_p=3, max_ell=3, max_init=3):
    p = draw(st.integers(min_value=1, max_value=max_p))
    ells = draw(st.lists(st.integers(min_value=0, max_value=max_ell), min_size=p, max_size=p))
    b0 = draw(st.integers(min_value=1, max_value=max_init))
    w0 = draw(st.integers(min_value=0, max_value=max_init))
    return UrnSpec(p=p, ells=tuple(ells), b0=b0, w0=w0)


@st.composite
def shapes(draw, max_cells=10):
    # column heights, weakly decreasing
    n = draw(st.integers(min_value=1, max_value=max_cells))
    cols = []
    left = n
    cap = n
    while left:
        h = draw(st.integers(min_value=1, max_value=min(cap, left)))
        cols.append(h)
        left -= h
        cap = h
    return TableauShape(tuple(cols))


@st.composite
def combs(draw, max_segments=4, max_i=3, max_j=3):
    k = draw(st.integers(min_value=1, max_value=max_segments))
    segs = [(draw(st.integers(min_value=1, max_value=max_i)), draw(st.integers(min_value=0, max_value=max_j)))
            for _ in range(k)]
    return CombTreeShape(tuple(segs))


@pytest.fixture(autouse=True)
def high_precision():
    # comparisons of mpmath results are carried out at the library's working precision
    with mpmath.workdps(50):
        yield
