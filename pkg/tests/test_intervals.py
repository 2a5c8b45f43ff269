"""Exact interval-set algebra: canonical form, Boolean laws, measure."""

import math
from fractions import Fraction

import pytest
from hypothesis import given, settings

from unsharp.intervals import (
    EMPTY,
    REALS,
    Interval,
    IntervalSet,
    bounding_interval,
    closed,
    combine,
    complement,
    difference,
    intersect,
    interval,
    is_subset,
    measure,
    membership,
    points,
    singleton,
    union,
)

from strategies import interval_sets


class TestIntervalInvariants:
    def test_reversed_endpoints_rejected(self):
        with pytest.raises(ValueError):
            Interval(Fraction(2), Fraction(1))

    def test_infinite_endpoints_must_be_open(self):
        with pytest.raises(ValueError):
            Interval(float("-inf"), Fraction(0), lo_closed=True)
        with pytest.raises(ValueError):
            Interval(Fraction(0), float("inf"), hi_closed=True)

    def test_singleton_must_be_closed(self):
        with pytest.raises(ValueError):
            Interval(Fraction(1), Fraction(1))

    def test_float_endpoints_rejected(self):
        with pytest.raises(TypeError):
            Interval(0.5, 1)

    def test_non_canonical_components_rejected(self):
        a = Interval(Fraction(0), Fraction(1))
        b = Interval(Fraction(1), Fraction(2), lo_closed=True)
        with pytest.raises(ValueError):
            IntervalSet((a, b))  # (0,1) and [1,2] are adjacent, must merge


class TestCanonicalForm:
    def test_adjacent_closed_merges(self):
        s = union(interval(0, 1), closed(1, 2))
        assert str(s) == "(0, 2]"

    def test_open_touch_does_not_merge(self):
        s = union(interval(0, 1), interval(1, 2))
        assert len(s.components) == 2

    def test_swallowed_singleton(self):
        s = union(interval(0, 1), singleton(1))
        assert str(s) == "(0, 1]"

    def test_from_intervals_idempotent(self):
        s = IntervalSet.from_intervals(
            [Interval(Fraction(0), Fraction(2)), Interval(Fraction(1), Fraction(3))]
        )
        assert IntervalSet.from_intervals(s.components) == s


class TestCombine:
    def test_union_excludes_shared_open_point(self):
        s = combine("union", interval(0, 1), interval(1, 2))
        assert not membership(1, s)
        assert len(s.components) == 2

    def test_symmdiff_self_is_empty(self):
        s = union(interval(0, 1), closed(3, 4))
        assert combine("symmdiff", s, s) == EMPTY

    def test_diff_carves_closed_interval(self):
        assert str(combine("diff", interval(0, 3), closed(1, 2))) == "(0, 1) | (2, 3)"

    def test_symmdiff_mixed_closure(self):
        got = combine("symmdiff", interval(0, 2), interval(1, 3))
        assert str(got) == "(0, 1] | [2, 3)"

    def test_unknown_op(self):
        with pytest.raises(ValueError):
            combine("nand", EMPTY, EMPTY)


class TestComplement:
    def test_of_empty(self):
        assert complement(EMPTY) == REALS

    def test_of_open_interval(self):
        assert str(complement(interval(0, 1))) == "(-inf, 0] | [1, inf)"

    def test_of_point(self):
        assert str(complement(singleton(0))) == "(-inf, 0) | (0, inf)"


class TestMeasure:
    def test_two_components(self):
        assert measure(union(interval(0, 1), interval(2, 3, lo_closed=True))) == 2

    def test_points_are_null(self):
        assert measure(points(1, 2, 3)) == 0

    def test_unbounded(self):
        assert measure(complement(interval(0, 1))) == math.inf


class TestMembership:
    @pytest.mark.parametrize(
        "q,text,expected",
        [
            (Fraction(1, 2), interval(0, 1), True),
            (Fraction(1), interval(0, 1), False),
            (Fraction(1), closed(1, 2), True),
        ],
    )
    def test_spec_cases(self, q, text, expected):
        assert membership(q, text) is expected


def _sample_points(*sets):
    pts = set()
    for s in sets:
        for c in s.components:
            for p in (c.lo, c.hi):
                if not isinstance(p, float):
                    pts.update((p - Fraction(1, 7), p, p + Fraction(1, 7)))
    pts.add(Fraction(0))
    return pts


@settings(max_examples=200)
@given(interval_sets(), interval_sets())
def test_operations_agree_with_membership_oracle(a, b):
    table = {
        "union": lambda x, y: x or y,
        "intersect": lambda x, y: x and y,
        "diff": lambda x, y: x and not y,
        "symmdiff": lambda x, y: x != y,
    }
    results = {op: combine(op, a, b) for op in table}
    for q in _sample_points(a, b):
        in_a, in_b = membership(q, a), membership(q, b)
        for op, fn in table.items():
            assert membership(q, results[op]) == fn(in_a, in_b)
    comp = complement(a)
    for q in _sample_points(a):
        assert membership(q, comp) == (not membership(q, a))


@settings(max_examples=200)
@given(interval_sets(), interval_sets(), interval_sets())
def test_boolean_laws(a, b, c):
    assert union(a, b) == union(b, a)
    assert intersect(a, b) == intersect(b, a)
    assert union(union(a, b), c) == union(a, union(b, c))
    assert intersect(intersect(a, b), c) == intersect(a, intersect(b, c))
    assert intersect(a, union(b, c)) == union(intersect(a, b), intersect(a, c))
    assert union(a, intersect(b, c)) == intersect(union(a, b), union(a, c))
    assert complement(union(a, b)) == intersect(complement(a), complement(b))
    assert complement(intersect(a, b)) == union(complement(a), complement(b))
    assert union(a, intersect(a, b)) == a
    assert intersect(a, union(a, b)) == a
    assert complement(complement(a)) == a


@settings(max_examples=200)
@given(interval_sets(), interval_sets())
def test_measure_finitely_additive_on_disjoint(a, b):
    b = difference(b, a)
    assert intersect(a, b) == EMPTY
    total = measure(union(a, b))
    ma, mb = measure(a), measure(b)
    if isinstance(ma, float) or isinstance(mb, float):
        assert total == math.inf
    else:
        assert total == ma + mb


@settings(max_examples=200)
@given(interval_sets())
def test_canonicalization_idempotent(a):
    assert IntervalSet.from_intervals(a.components) == a
    assert IntervalSet(a.components) == a


@settings(max_examples=100)
@given(interval_sets(), interval_sets())
def test_subset_and_bounding(a, b):
    assert is_subset(intersect(a, b), a)
    assert is_subset(a, union(a, b))
    if not a.is_empty:
        lo, hi = bounding_interval(a)
        for c in a.components:
            if not isinstance(c.lo, float):
                assert lo <= c.lo
            if not isinstance(c.hi, float):
                assert c.hi <= hi
