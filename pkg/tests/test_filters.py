"""Filter bases: certification, the half-line ambiguity, witnesses, the
disjoint approach family, and convergence analysis."""

from fractions import Fraction

import pytest

from unsharp.common import DIVERGENT, UNDETERMINED
from unsharp.errors import FmpViolation, ZeroClassError
from unsharp.filters import (
    FiniteFamily,
    adjoin,
    converges_to,
    disjoint_family,
    escaping_base,
    filter_base,
    has_fmp,
    neighborhood_base,
    normality_witness,
)
from unsharp.intervals import intersect, interval, measure
from unsharp.quotient import ZERO, project, q_meet
from unsharp.setexpr import parse_set_expr as parse


class TestNeighborhoodBase:
    def test_elements(self):
        base = neighborhood_base(0, 3)
        got = [str(base.family.element(n)) for n in (1, 2, 3)]
        assert got == ["(-1, 1)", "(-1/2, 1/2)", "(-1/3, 1/3)"]

    def test_elements_nonzero_everywhere(self):
        base = neighborhood_base(Fraction(22, 7), 50)
        assert all(not base.family.element(n).is_zero for n in (1, 7, 50))

    def test_meet_is_deepest_element(self):
        base = neighborhood_base(0, 3)
        assert base.truncated_meet(3) == project(parse("(-1/3, 1/3)"))

    def test_chain_is_nested(self):
        base = neighborhood_base(Fraction(1, 3), 64)
        for n in (1, 5, 31):
            outer = base.family.element(n)
            inner = base.family.element(n + 1)
            assert q_meet(outer, inner) == inner

    def test_huge_depth_stays_cheap(self):
        base = neighborhood_base(0, 2**60)
        m = base.truncated_meet(2**60)
        assert measure(m.rep) == Fraction(2, 2**60)


class TestHasFmp:
    def test_nested_chain_certified_with_witness(self):
        cert = has_fmp(neighborhood_base(0, 10), 10)
        assert cert.ok
        assert str(cert.witnesses[-1][1]) == "(-1/10, 1/10)"
        assert len(cert.witnesses) == 10

    def test_touching_opens_fail(self):
        base = filter_base([project(parse("(0,1)")), project(parse("(1,2)"))])
        cert = has_fmp(base, 2)
        assert not cert.ok
        assert "zero" in cert.offender

    def test_half_line_extension_certified_any_depth(self):
        for k in (1, 13, 40):
            base = adjoin(neighborhood_base(0, k), project(parse("(0,inf)")), k)
            cert = has_fmp(base, k)
            assert cert.ok
            # the witness at depth k sits inside (0, 1/k)
            _, w = cert.witnesses[-1]
            assert w.lo >= 0 and w.hi <= Fraction(1, k)


class TestAdjoin:
    def test_far_interval_rejected_with_offending_meet(self):
        with pytest.raises(FmpViolation) as err:
            adjoin(neighborhood_base(0, 6), project(parse("(5,6)")), 6)
        assert err.value.offenders
        # exact meet oracle: already the first neighborhood misses (5,6)
        assert intersect(parse("(-1,1)"), parse("(5,6)")).is_empty

    def test_zero_class_rejected(self):
        with pytest.raises(FmpViolation):
            adjoin(neighborhood_base(0, 4), ZERO, 4)

    def test_both_half_lines_extend_but_not_together(self):
        base = neighborhood_base(0, 16)
        right = project(parse("(0,inf)"))
        left = project(parse("(-inf,0)"))
        s1 = adjoin(base, right, 16)
        s2 = adjoin(base, left, 16)
        assert has_fmp(s1, 16).ok and has_fmp(s2, 16).ok
        with pytest.raises(FmpViolation):
            adjoin(s1, left, 16)  # the two half-lines meet in a null set

    def test_certified_depth_recorded(self):
        base = adjoin(neighborhood_base(0, 40), project(parse("(0,inf)")), 40)
        assert base.certified_depth == 40


class TestNormalityWitness:
    def test_running_meet_measures(self):
        w = normality_witness(0, 4)
        assert [w.running_meet_measure(n) for n in (1, 2, 3, 4)] == [
            Fraction(2),
            Fraction(1),
            Fraction(2, 3),
            Fraction(1, 2),
        ]

    def test_every_element_nonzero_and_limit_zero(self):
        w = normality_witness(Fraction(5, 8), 2**20)
        for n in (1, 2, 1024, 2**20):
            assert not w.element(n).is_zero
            assert w.running_meet_measure(n) == Fraction(2, n)
        assert w.limit_class.is_zero

    def test_sequence_protocol(self):
        w = normality_witness(0, 5)
        assert len(w) == 5
        assert w[0] == w.element(1)
        assert len(list(w)) == 5


class TestDisjointFamily:
    def test_first_components_exact(self):
        assert str(disjoint_family(0, 1).component(1)) == "(5/8, 3/4)"
        assert str(disjoint_family(0, 2).component(1)) == "(9/16, 5/8)"

    def test_component_matches_independent_form(self):
        # independent derivation: lo = a_n + (a_{n-1} - a_n) / 2^(m+1)
        for m in (1, 3, 7):
            fam = disjoint_family(Fraction(1, 3), m)
            for n in (1, 2, 17):
                a_n = Fraction(1, 2**n)
                a_prev = Fraction(1, 2 ** (n - 1))
                lo = Fraction(1, 3) + a_n + (a_prev - a_n) / 2 ** (m + 1)
                hi = Fraction(1, 3) + a_n + (a_prev - a_n) / 2**m
                comp = fam.component(n)
                assert comp.lo == lo and comp.hi == hi

    def test_translation(self):
        base = disjoint_family(0, 2).component(5)
        moved = disjoint_family(Fraction(-7, 2), 2).component(5)
        assert moved.lo == base.lo - Fraction(7, 2)
        assert moved.hi == base.hi - Fraction(7, 2)

    def test_pairwise_disjoint_and_in_band(self):
        fams = [disjoint_family(0, m) for m in range(1, 6)]
        for fam in fams:
            for n in range(1, 33):
                comp = fam.component(n)
                env = fam.envelope(n)
                assert env.lo < comp.lo < comp.hi < env.hi
        for i in range(5):
            for j in range(i + 1, 5):
                assert intersect(fams[i].truncate(32), fams[j].truncate(32)).is_empty

    def test_left_endpoints_reach_anchor(self):
        fam = disjoint_family(0, 4)
        assert fam.component(40).lo < Fraction(1, 2**39)
        assert fam.component(64).lo <= Fraction(1, 2**63)


class TestConvergesTo:
    def test_neighborhood_base_converges(self):
        assert converges_to(neighborhood_base(0, 20), 20, Fraction(1, 8)) == 0

    def test_tail_base_diverges(self):
        assert converges_to(escaping_base(20), 20, Fraction(1, 8)) is DIVERGENT

    def test_half_line_extensions_converge_to_anchor(self):
        lam = Fraction(2, 7)
        base = neighborhood_base(lam, 64)
        s1 = adjoin(base, project(interval(lam, float("inf"))), 64)
        s2 = adjoin(base, project(interval(float("-inf"), lam)), 64)
        assert converges_to(s1, 64, Fraction(1, 16)) == lam
        assert converges_to(s2, 64, Fraction(1, 16)) == lam

    def test_untagged_finite_base_returns_midpoint(self):
        base = filter_base([project(parse("(0,1)")), project(parse("(0,1/2)"))])
        got = converges_to(base, 2, Fraction(2, 3))
        assert got == Fraction(1, 4)

    def test_shallow_base_undetermined(self):
        assert converges_to(neighborhood_base(0, 3), 3, Fraction(1, 100)) is UNDETERMINED


class TestFiniteFamily:
    def test_meet_first_folds(self):
        fam = FiniteFamily((project(parse("(0,4)")), project(parse("(1,5)")), project(parse("(2,6)"))))
        assert fam.meet_first(2) == project(parse("(1,4)"))
        assert fam.meet_first(3) == project(parse("(2,4)"))

    def test_element_bounds_checked(self):
        fam = FiniteFamily((project(parse("(0,1)")),))
        with pytest.raises(IndexError):
            fam.element(2)

    def test_filter_base_rejects_zero_elements(self):
        with pytest.raises(ZeroClassError):
            filter_base([ZERO])
