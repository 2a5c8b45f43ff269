"""Hypothesis strategies shared by the property suites."""

from fractions import Fraction

from hypothesis import strategies as st

from unsharp.intervals import Interval, IntervalSet

rationals = st.builds(
    Fraction,
    st.integers(min_value=-64, max_value=64),
    st.integers(min_value=1, max_value=8),
)


@st.composite
def intervals(draw):
    a = draw(rationals)
    b = draw(rationals)
    if a > b:
        a, b = b, a
    if a == b:
        return Interval(a, a, True, True)
    return Interval(a, b, draw(st.booleans()), draw(st.booleans()))


@st.composite
def interval_sets(draw, max_components=5):
    k = draw(st.integers(min_value=0, max_value=max_components))
    return IntervalSet.from_intervals(draw(intervals()) for _ in range(k))
