"""Quotient classes: projection, class operations, atomlessness, point states."""

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from unsharp.errors import ZeroClassError
from unsharp.intervals import difference, interval, intersect, points, union
from unsharp.quotient import (
    UNIT,
    ZERO,
    point_membership_state,
    project,
    q_diff,
    q_join,
    q_meet,
    q_not,
    q_symmdiff,
    split,
)
from unsharp.setexpr import parse_set_expr as parse

from strategies import interval_sets, rationals


class TestProject:
    def test_drops_isolated_point(self):
        assert project(parse("(0,1) | {5}")) == project(parse("(0,1)"))

    def test_merges_across_null_gap(self):
        assert project(parse("(0,1) | (1,2)")) == project(parse("(0,2)"))

    def test_pure_points_are_zero(self):
        assert project(parse("{1,2}")) == ZERO

    def test_closure_flags_dropped(self):
        assert project(parse("[0,1]")) == project(parse("(0,1)"))


class TestClassOps:
    def test_meet(self):
        assert q_meet(project(parse("(0,2)")), project(parse("(1,3)"))) == project(parse("(1,2)"))

    def test_join_of_half_lines_is_unit(self):
        lam = Fraction(7, 3)
        right = project(interval(lam, float("inf")))
        left = project(interval(float("-inf"), lam))
        assert q_join(right, left) == UNIT

    def test_meet_of_touching_opens_is_zero(self):
        assert q_meet(project(parse("(0,1)")), project(parse("(1,2)"))) == ZERO

    def test_not(self):
        assert q_not(ZERO) == UNIT
        assert q_not(project(parse("(0,inf)"))) == project(parse("(-inf,0)"))
        assert q_not(project(parse("(0,1)|(2,3)"))) == project(
            parse("(-inf,0) | (1,2) | (3,inf)")
        )

    def test_is_zero(self):
        assert project(points(Fraction(3, 7))).is_zero
        assert not project(interval(0, Fraction(1, 2**40))).is_zero
        assert ZERO.is_zero


@settings(max_examples=200)
@given(interval_sets(), st.lists(rationals, min_size=0, max_size=5))
def test_representative_independence(s, pts):
    perturbation = points(*pts)
    assert project(s) == project(union(s, perturbation))
    assert project(s) == project(difference(s, perturbation))


@settings(max_examples=150)
@given(interval_sets(), interval_sets(), interval_sets())
def test_quotient_boolean_laws(sa, sb, sc):
    a, b, c = project(sa), project(sb), project(sc)
    assert q_join(a, b) == q_join(b, a)
    assert q_meet(q_meet(a, b), c) == q_meet(a, q_meet(b, c))
    assert q_meet(a, q_join(b, c)) == q_join(q_meet(a, b), q_meet(a, c))
    assert q_join(a, q_meet(b, c)) == q_meet(q_join(a, b), q_join(a, c))
    assert q_not(q_join(a, b)) == q_meet(q_not(a), q_not(b))
    assert q_not(q_not(a)) == a
    assert q_join(a, q_meet(a, b)) == a
    assert q_symmdiff(a, a) == ZERO
    assert q_diff(a, b) == q_meet(a, q_not(b))


class TestSplit:
    def test_bounded_component_bisected(self):
        a, b = split(project(parse("(0,1)")))
        assert a == project(parse("(0,1/2)")) and b == project(parse("(1/2,1)"))

    def test_half_line_carved(self):
        a, b = split(project(parse("(0,inf)")))
        assert a == project(parse("(0,1)")) and b == project(parse("(1,inf)"))

    def test_two_components_separated(self):
        a, b = split(project(parse("(0,1)|(2,3)")))
        assert a == project(parse("(0,1)")) and b == project(parse("(2,3)"))

    def test_zero_class_rejected(self):
        with pytest.raises(ZeroClassError):
            split(ZERO)

    @pytest.mark.parametrize(
        "text", ["(0,1)", "(0,inf)", "(-inf,3)", "(-inf,inf)", "(0,1)|(2,3)", "(-2,-1)|(5,inf)"]
    )
    def test_split_contract(self, text):
        x = split_input = project(parse(text))
        a, b = split(x)
        assert not a.is_zero and not b.is_zero
        assert q_meet(a, b) == ZERO
        assert q_join(a, b) == x

    def test_iterated_split_is_atomless_witness(self):
        layer = [UNIT]
        for _ in range(5):
            layer = [part for x in layer for part in split(x)]
        assert len(layer) == 32
        assert all(not x.is_zero for x in layer)
        for i in range(32):
            for j in range(i + 1, 32):
                assert q_meet(layer[i], layer[j]) == ZERO


class TestPointMembershipState:
    def test_spec_cases(self):
        assert point_membership_state(Fraction(1, 2), parse("(0,1)")) == 1
        assert point_membership_state(0, parse("(0,1)")) == 0
        lam = Fraction(-3, 4)
        assert point_membership_state(lam, points(lam)) == 1

    @settings(max_examples=150)
    @given(rationals, interval_sets(), interval_sets())
    def test_two_valued_homomorphism(self, lam, s1, s2):
        v1 = point_membership_state(lam, s1)
        v2 = point_membership_state(lam, s2)
        assert point_membership_state(lam, intersect(s1, s2)) == v1 * v2
        disjoint_part = difference(s2, s1)
        v2d = point_membership_state(lam, disjoint_part)
        assert point_membership_state(lam, union(s1, disjoint_part)) == v1 + v2d
