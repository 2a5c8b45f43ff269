"""Exact algebra of finite unions of intervals over the extended real line.

Endpoints are arbitrary-precision rationals (``fractions.Fraction``); the
symbols ``-inf``/``inf`` (Python floats) mark unbounded ends, which are always
open.  An :class:`IntervalSet` is kept in a canonical form: components sorted,
pairwise disjoint, and non-adjacent (no two components could be merged into a
single interval).  Two canonical sets are equal as point sets exactly when
their component tuples compare equal, so Boolean-algebra laws can be asserted
with ``==``.

All operations are implemented on a "cut" encoding of endpoints.  A cut is a
pair ``(value, eps)`` with ``eps`` in {0, 1}: ``(q, 0)`` sits at the point
``q`` and ``(q, 1)`` sits immediately above it.  An interval maps to the
half-open cut span ``[start, end)`` where

    start = (lo, 0) if lo is closed else (lo, 1)
    end   = (hi, 1) if hi is closed else (hi, 0)

Membership of a point ``x`` is ``start <= (x, 0) < end``.  Under this
encoding ``(0,1)`` and ``[1,2]`` touch (and merge to ``(0,2]``) while
``(0,1)`` and ``(1,2)`` do not, which is exactly the adjacency rule the
canonical form requires.  Set operations reduce to a linear sweep over merged
cut sequences and are exact: no rounding anywhere.
"""

from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Union

from .common import NEG_INF, POS_INF, as_fraction, fraction_str, is_infinite

Endpoint = Union[Fraction, float]

_BOTTOM = (NEG_INF, 1)
_TOP = (POS_INF, 0)


@dataclass(frozen=True)
class Interval:
    """One interval with exact endpoints.

    Invariants: ``lo <= hi``; infinite endpoints are open; if ``lo == hi``
    both ends are closed (a singleton point).
    """

    lo: Endpoint
    hi: Endpoint
    lo_closed: bool = False
    hi_closed: bool = False

    def __post_init__(self):
        lo, hi = self.lo, self.hi
        if not is_infinite(lo):
            object.__setattr__(self, "lo", as_fraction(lo))
        elif lo != NEG_INF:
            raise ValueError("lower endpoint may be -inf but not +inf")
        if not is_infinite(hi):
            object.__setattr__(self, "hi", as_fraction(hi))
        elif hi != POS_INF:
            raise ValueError("upper endpoint may be +inf but not -inf")
        lo, hi = self.lo, self.hi
        if is_infinite(lo) and self.lo_closed:
            raise ValueError("infinite endpoints must be open")
        if is_infinite(hi) and self.hi_closed:
            raise ValueError("infinite endpoints must be open")
        if not is_infinite(lo) and not is_infinite(hi):
            if lo > hi:
                raise ValueError(f"malformed interval: lo {lo} > hi {hi}")
            if lo == hi and not (self.lo_closed and self.hi_closed):
                raise ValueError("a zero-width interval must be closed on both ends")

    @property
    def is_singleton(self) -> bool:
        return self.lo == self.hi

    @property
    def is_bounded(self) -> bool:
        return not (is_infinite(self.lo) or is_infinite(self.hi))

    @property
    def length(self):
        """Exact length; ``inf`` when unbounded."""
        if not self.is_bounded:
            return POS_INF
        return self.hi - self.lo

    def span(self):
        start = (self.lo, 0 if self.lo_closed else 1)
        end = (self.hi, 1 if self.hi_closed else 0)
        return start, end

    def contains(self, q) -> bool:
        q = as_fraction(q)
        start, end = self.span()
        return start <= (q, 0) < end

    def __str__(self) -> str:
        if self.is_singleton:
            return "{%s}" % fraction_str(self.lo)
        lb = "[" if self.lo_closed else "("
        rb = "]" if self.hi_closed else ")"
        return f"{lb}{fraction_str(self.lo)}, {fraction_str(self.hi)}{rb}"


def _span_to_interval(span) -> Interval:
    (lov, loe), (hiv, hie) = span
    return Interval(lov, hiv, lo_closed=(loe == 0), hi_closed=(hie == 1))


def interval(lo, hi, lo_closed: bool = False, hi_closed: bool = False) -> "IntervalSet":
    """A one-interval set; open on both ends unless stated otherwise."""
    return IntervalSet((Interval(lo, hi, lo_closed, hi_closed),))


def closed(lo, hi) -> "IntervalSet":
    return interval(lo, hi, True, True)


def singleton(q) -> "IntervalSet":
    q = as_fraction(q)
    return interval(q, q, True, True)


def points(*qs) -> "IntervalSet":
    """The finite point set {q1, ..., qk}."""
    return IntervalSet.from_intervals(
        Interval(as_fraction(q), as_fraction(q), True, True) for q in qs
    )


@dataclass(frozen=True)
class IntervalSet:
    """Canonical finite union of intervals.

    Construct through :meth:`from_intervals` (which normalizes any collection
    of intervals) or the module-level builders; the raw constructor insists
    that the components already are canonical.
    """

    components: tuple = ()

    def __post_init__(self):
        comps = tuple(self.components)
        object.__setattr__(self, "components", comps)
        prev_end = None
        for c in comps:
            if not isinstance(c, Interval):
                raise TypeError("components must be Interval instances")
            start, end = c.span()
            if prev_end is not None and start <= prev_end:
                raise ValueError(
                    "components must be sorted, disjoint, and non-adjacent"
                )
            prev_end = end

    @classmethod
    def from_intervals(cls, intervals: Iterable[Interval]) -> "IntervalSet":
        """Normalize an arbitrary collection of intervals to canonical form."""
        spans = sorted(iv.span() for iv in intervals)
        merged = []
        for s, e in spans:
            if merged and s <= merged[-1][1]:
                if e > merged[-1][1]:
                    merged[-1] = (merged[-1][0], e)
            else:
                merged.append((s, e))
        return cls(tuple(_span_to_interval(sp) for sp in merged))

    @classmethod
    def _from_spans(cls, spans) -> "IntervalSet":
        return cls(tuple(_span_to_interval(sp) for sp in spans))

    @cached_property
    def _spans(self) -> tuple:
        return tuple(c.span() for c in self.components)

    @cached_property
    def _starts(self) -> list:
        return [s for s, _ in self._spans]

    @property
    def is_empty(self) -> bool:
        return not self.components

    def __contains__(self, q) -> bool:
        return membership(q, self)

    def __or__(self, other: "IntervalSet") -> "IntervalSet":
        return union(self, other)

    def __and__(self, other: "IntervalSet") -> "IntervalSet":
        return intersect(self, other)

    def __sub__(self, other: "IntervalSet") -> "IntervalSet":
        return difference(self, other)

    def __xor__(self, other: "IntervalSet") -> "IntervalSet":
        return symmetric_difference(self, other)

    def __invert__(self) -> "IntervalSet":
        return complement(self)

    def __str__(self) -> str:
        if not self.components:
            return "empty"
        return " | ".join(str(c) for c in self.components)


EMPTY = IntervalSet()
REALS = IntervalSet((Interval(NEG_INF, POS_INF),))

# Truth tables indexed by 2*in_a + in_b.
_TABLES = {
    "union": (False, True, True, True),
    "intersect": (False, False, False, True),
    "diff": (False, False, True, False),
    "symmdiff": (False, True, True, False),
}


def _sweep(spans_a, spans_b, table):
    """Linear boolean sweep over two canonical span lists."""
    ba = [cut for span in spans_a for cut in span]
    bb = [cut for span in spans_b for cut in span]
    na, nb = len(ba), len(bb)
    ia = ib = 0
    out = []
    state = table[0]
    start = _BOTTOM if state else None
    while ia < na or ib < nb:
        if ib >= nb:
            cut = ba[ia]
        elif ia >= na:
            cut = bb[ib]
        else:
            ca, cb = ba[ia], bb[ib]
            cut = ca if ca <= cb else cb
        while ia < na and ba[ia] == cut:
            ia += 1
        while ib < nb and bb[ib] == cut:
            ib += 1
        new = table[2 * (ia & 1) + (ib & 1)]
        if new != state:
            if new:
                start = cut
            else:
                out.append((start, cut))
            state = new
    if state:
        out.append((start, _TOP))
    return out


def combine(op: str, a: IntervalSet, b: IntervalSet) -> IntervalSet:
    """Apply one of {union, intersect, diff, symmdiff} exactly."""
    try:
        table = _TABLES[op]
    except KeyError:
        raise ValueError(f"unknown set operation {op!r}") from None
    return IntervalSet._from_spans(_sweep(a._spans, b._spans, table))


def union(a: IntervalSet, b: IntervalSet) -> IntervalSet:
    return IntervalSet._from_spans(_sweep(a._spans, b._spans, _TABLES["union"]))


def intersect(a: IntervalSet, b: IntervalSet) -> IntervalSet:
    return IntervalSet._from_spans(_sweep(a._spans, b._spans, _TABLES["intersect"]))


def difference(a: IntervalSet, b: IntervalSet) -> IntervalSet:
    return IntervalSet._from_spans(_sweep(a._spans, b._spans, _TABLES["diff"]))


def symmetric_difference(a: IntervalSet, b: IntervalSet) -> IntervalSet:
    return IntervalSet._from_spans(_sweep(a._spans, b._spans, _TABLES["symmdiff"]))


def complement(a: IntervalSet) -> IntervalSet:
    """Complement in the real line; an exact involution on canonical forms."""
    out = []
    prev = _BOTTOM
    for s, e in a._spans:
        if prev < s:
            out.append((prev, s))
        prev = e
    if prev < _TOP:
        out.append((prev, _TOP))
    return IntervalSet._from_spans(out)


def measure(a: IntervalSet):
    """Lebesgue measure: exact rational, or ``inf`` if any component is unbounded."""
    total = Fraction(0)
    for c in a.components:
        if not c.is_bounded:
            return POS_INF
        total += c.hi - c.lo
    return total


def membership(q, a: IntervalSet) -> bool:
    """Exact point membership test."""
    cut = (as_fraction(q), 0)
    idx = bisect_right(a._starts, cut) - 1
    return idx >= 0 and cut < a._spans[idx][1]


def is_subset(a: IntervalSet, b: IntervalSet) -> bool:
    return difference(a, b).is_empty


def bounding_interval(a: IntervalSet):
    """(inf, sup) of a nonempty set; endpoints may be infinite."""
    if a.is_empty:
        raise ValueError("empty set has no bounding interval")
    return a.components[0].lo, a.components[-1].hi
