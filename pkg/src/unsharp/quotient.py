"""Interval-set algebra modulo Lebesgue-null sets.

A :class:`QuotientClass` is the equivalence class of an interval set under
"differs by a null set".  The representative is kept in open-canonical form:
every component an open interval and consecutive components separated by gaps
of positive length.  Since adding or removing a null set cannot change that
form, class equality is a syntactic check on representatives.
"""

from __future__ import annotations

from dataclasses import dataclass

from .common import NEG_INF, POS_INF, as_fraction, is_infinite
from .errors import ZeroClassError
from .intervals import (
    EMPTY,
    Interval,
    IntervalSet,
    combine,
    complement,
    interval,
    measure,
    membership,
)


@dataclass(frozen=True)
class QuotientClass:
    """A class of sets agreeing up to measure zero, by its open-canonical rep."""

    rep: IntervalSet

    def __post_init__(self):
        prev_hi = None
        for c in self.rep.components:
            if c.lo_closed or c.hi_closed:
                raise ValueError("representative components must be open")
            if c.lo == c.hi:
                raise ValueError("representative carries a null component")
            if prev_hi is not None and c.lo <= prev_hi:
                raise ValueError("representative gaps must have positive length")
            prev_hi = c.hi

    @property
    def is_zero(self) -> bool:
        return self.rep.is_empty

    @property
    def measure(self):
        return measure(self.rep)

    def __str__(self) -> str:
        if self.is_zero:
            return "0"
        return str(self.rep)


def project(s: IntervalSet) -> QuotientClass:
    """Map a set to its class: drop null components, open endpoints, merge gaps
    of length zero.  The result differs from the input by a null set."""
    opened = []
    for c in s.components:
        if c.lo == c.hi:
            continue  # singleton, null
        if opened and c.lo <= opened[-1][1]:
            # closures touch (possible only at a shared endpoint)
            opened[-1] = (opened[-1][0], c.hi)
        else:
            opened.append((c.lo, c.hi))
    comps = tuple(Interval(lo, hi) for lo, hi in opened)
    return QuotientClass(IntervalSet(comps))


ZERO = project(EMPTY)
UNIT = project(IntervalSet((Interval(NEG_INF, POS_INF),)))

_OP_ALIASES = {"join": "union", "meet": "intersect", "diff": "diff", "symmdiff": "symmdiff"}


def q_combine(op: str, x: QuotientClass, y: QuotientClass) -> QuotientClass:
    """Class operation, one of {join, meet, diff, symmdiff}; independent of the
    representatives because the result is re-projected."""
    try:
        set_op = _OP_ALIASES[op]
    except KeyError:
        raise ValueError(f"unknown class operation {op!r}") from None
    return project(combine(set_op, x.rep, y.rep))


def q_join(x: QuotientClass, y: QuotientClass) -> QuotientClass:
    return q_combine("join", x, y)


def q_meet(x: QuotientClass, y: QuotientClass) -> QuotientClass:
    return q_combine("meet", x, y)


def q_diff(x: QuotientClass, y: QuotientClass) -> QuotientClass:
    return q_combine("diff", x, y)


def q_symmdiff(x: QuotientClass, y: QuotientClass) -> QuotientClass:
    return q_combine("symmdiff", x, y)


def q_not(x: QuotientClass) -> QuotientClass:
    return project(complement(x.rep))


def q_leq(x: QuotientClass, y: QuotientClass) -> bool:
    """Order of the quotient algebra: x <= y iff x minus y is the zero class."""
    return q_diff(x, y).is_zero


def is_zero(x: QuotientClass) -> bool:
    return x.is_zero


def split(x: QuotientClass) -> tuple:
    """Split a nonzero class into two disjoint nonzero classes joining to it.

    Deterministic rule: with several components, the leftmost component is
    separated from the rest; a single bounded component is bisected at its
    midpoint; a single unbounded component has a unit interval carved off at
    its finite end (or (0,1) out of the whole line).
    """
    if x.is_zero:
        raise ZeroClassError("cannot split the zero class")
    comps = x.rep.components
    if len(comps) > 1:
        first = QuotientClass(IntervalSet(comps[:1]))
        rest = QuotientClass(IntervalSet(comps[1:]))
        return first, rest
    c = comps[0]
    lo, hi = c.lo, c.hi
    if not is_infinite(lo) and not is_infinite(hi):
        mid = (lo + hi) / 2
        return project(interval(lo, mid)), project(interval(mid, hi))
    if is_infinite(lo) and is_infinite(hi):
        carved = interval(0, 1)
    elif is_infinite(hi):
        carved = interval(lo, lo + 1)
    else:
        carved = interval(hi - 1, hi)
    rest = combine("diff", x.rep, carved)
    return project(carved), project(rest)


def point_membership_state(lam, s: IntervalSet) -> int:
    """Two-valued state of the unquotiented algebra at the point ``lam``:
    1 iff the point lies in the set.  Multiplicative over intersections and
    additive over disjoint unions by construction."""
    return 1 if membership(as_fraction(lam), s) else 0
