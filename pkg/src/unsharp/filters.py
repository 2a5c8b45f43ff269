"""Filter bases on the quotient algebra.

A :class:`FilterBase` is a family of nonzero classes together with the largest
depth at which its finite meets were verified nonzero.  The family backbone is
either an explicit finite list or a lazily generated nested chain (shrinking
neighborhoods of a point, or tails escaping to infinity), so truncated meets
at astronomically large depths stay O(1): for a nested chain the meet of the
first k elements is the k-th element.

Finitely many classes may be adjoined to the backbone; they participate in
every truncated meet.  Nothing here ever totalizes a base into an ultrafilter:
certification is finite and explicit by design.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from fractions import Fraction

from .common import DIVERGENT, NEG_INF, POS_INF, UNDETERMINED, as_fraction, is_infinite
from .errors import FmpViolation, ZeroClassError
from .intervals import Interval, IntervalSet, interval, measure, points
from .quotient import UNIT, QuotientClass, project, q_meet


# ---------------------------------------------------------------------------
# families


@dataclass(frozen=True)
class FiniteFamily:
    """Explicit list of classes; meets are computed by folding."""

    classes: tuple

    @property
    def size(self) -> int:
        return len(self.classes)

    def element(self, n: int) -> QuotientClass:
        if not 1 <= n <= self.size:
            raise IndexError(f"element index {n} out of range 1..{self.size}")
        return self.classes[n - 1]

    def meet_first(self, k: int) -> QuotientClass:
        acc = UNIT
        for c in self.classes[: max(k, 0)]:
            acc = q_meet(acc, c)
            if acc.is_zero:
                break
        return acc

    def describe(self) -> str:
        return "{" + ", ".join(str(c) for c in self.classes) + "}"


@dataclass(frozen=True)
class NeighborhoodFamily:
    """Nested chain of shrinking symmetric neighborhoods of a point:
    element n is the class of (center - 1/n, center + 1/n)."""

    center: Fraction
    size: int

    def __post_init__(self):
        object.__setattr__(self, "center", as_fraction(self.center))
        if self.size < 1:
            raise ValueError("family size must be at least 1")

    def interval_at(self, n: int) -> Interval:
        if not 1 <= n <= self.size:
            raise IndexError(f"element index {n} out of range 1..{self.size}")
        r = Fraction(1, n)
        return Interval(self.center - r, self.center + r)

    def element(self, n: int) -> QuotientClass:
        return QuotientClass(IntervalSet((self.interval_at(n),)))

    def meet_first(self, k: int) -> QuotientClass:
        # nested: the k-th element already is the meet of the first k
        return self.element(min(max(k, 1), self.size))

    def describe(self) -> str:
        return f"neighborhoods of {self.center} (depth {self.size})"


@dataclass(frozen=True)
class TailFamily:
    """Nested chain of escaping tails: element n is the class of (n, inf)
    for direction +1, of (-inf, -n) for direction -1."""

    size: int
    direction: int = 1

    def __post_init__(self):
        if self.size < 1:
            raise ValueError("family size must be at least 1")
        if self.direction not in (1, -1):
            raise ValueError("direction must be +1 or -1")

    def interval_at(self, n: int) -> Interval:
        if not 1 <= n <= self.size:
            raise IndexError(f"element index {n} out of range 1..{self.size}")
        if self.direction == 1:
            return Interval(Fraction(n), POS_INF)
        return Interval(NEG_INF, Fraction(-n))

    def element(self, n: int) -> QuotientClass:
        return QuotientClass(IntervalSet((self.interval_at(n),)))

    def meet_first(self, k: int) -> QuotientClass:
        return self.element(min(max(k, 1), self.size))

    def describe(self) -> str:
        if self.direction == 1:
            return f"right tails (n, inf) (depth {self.size})"
        return f"left tails (-inf, -n) (depth {self.size})"


# ---------------------------------------------------------------------------
# filter bases


@dataclass(frozen=True)
class FilterBase:
    """A certified family of nonzero classes with the finite meet property.

    ``family`` is the backbone (finite or generated chain); ``adjoined``
    classes are extra elements included in every truncated meet.
    ``certified_depth`` is the largest k at which finite meets were verified
    nonzero; ``tag`` is an optional convergence target.
    """

    family: object
    adjoined: tuple = ()
    certified_depth: int = 0
    tag: Fraction | None = None

    @property
    def size(self) -> int:
        return self.family.size + len(self.adjoined)

    def adjoined_meet(self) -> QuotientClass:
        acc = UNIT
        for c in self.adjoined:
            acc = q_meet(acc, c)
        return acc

    def truncated_meet(self, k: int) -> QuotientClass:
        """Meet of the first k backbone elements and every adjoined class."""
        return q_meet(self.family.meet_first(k), self.adjoined_meet())

    def describe(self) -> str:
        text = self.family.describe()
        if self.adjoined:
            text += " + {" + ", ".join(str(c) for c in self.adjoined) + "}"
        return text


def filter_base(classes, tag=None) -> FilterBase:
    """Base from an explicit list of classes; rejects zero elements."""
    classes = tuple(classes)
    for c in classes:
        if c.is_zero:
            raise ZeroClassError("a filter base cannot contain the zero class")
    return FilterBase(FiniteFamily(classes), tag=None if tag is None else as_fraction(tag))


def neighborhood_base(lam, depth: int) -> FilterBase:
    """The shrinking-neighborhood base of a point, certified to ``depth``.

    The chain is nested, so the meet of its first k elements is the k-th
    neighborhood; verifying the deepest one nonzero certifies every finite
    meet up to ``depth``.
    """
    if depth < 1:
        raise ValueError("depth must be at least 1")
    lam = as_fraction(lam)
    family = NeighborhoodFamily(lam, depth)
    if family.meet_first(depth).is_zero:  # cannot happen; keep the check honest
        raise FmpViolation("deepest neighborhood is null")
    return FilterBase(family, certified_depth=depth, tag=lam)


def escaping_base(depth: int, direction: int = 1) -> FilterBase:
    """The base of tails escaping toward +inf (direction +1) or -inf (-1);
    no point survives every element."""
    if depth < 1:
        raise ValueError("depth must be at least 1")
    family = TailFamily(depth, direction)
    if family.meet_first(depth).is_zero:
        raise FmpViolation("deepest tail is null")
    return FilterBase(family, certified_depth=depth)


# ---------------------------------------------------------------------------
# finite meet property certification


@dataclass(frozen=True)
class FmpCertificate:
    """Outcome of a finite-meet-property check.

    ``witnesses`` holds, for each checked truncation depth, one open interval
    contained in that meet.  On failure ``offender`` describes the zero meet.
    """

    ok: bool
    depth: int
    witnesses: tuple = ()
    offender: str | None = None

    def __bool__(self) -> bool:
        return self.ok


_WITNESS_ENUM_CAP = 256


def _witness_depths(k: int):
    if k <= _WITNESS_ENUM_CAP:
        return list(range(1, k + 1))
    depths = list(range(1, _WITNESS_ENUM_CAP + 1))
    j = _WITNESS_ENUM_CAP * 2
    while j < k:
        depths.append(j)
        j *= 2
    depths.append(k)
    return depths


def has_fmp(base: FilterBase, k: int) -> FmpCertificate:
    """Check that every meet of at most k elements is nonzero.

    Because a meet over fewer elements contains the meet over more, one
    nonzero meet of all adjoined classes with the depth-k backbone truncation
    certifies every sub-meet drawn from those elements.  Witnesses are
    reported per truncation depth (all depths up to 256, then geometrically).
    """
    if k < 1:
        raise ValueError("k must be at least 1")
    k = min(k, base.size)
    acc = UNIT
    for i, c in enumerate(base.adjoined):
        acc = q_meet(acc, c)
        if acc.is_zero:
            offender = ", ".join(str(x) for x in base.adjoined[: i + 1])
            return FmpCertificate(False, k, offender=f"meet of adjoined {{{offender}}} is zero")
    witnesses = []
    chain_k = min(k, base.family.size)
    for depth in _witness_depths(chain_k):
        m = q_meet(base.family.meet_first(depth), acc)
        if m.is_zero:
            return FmpCertificate(
                False,
                k,
                witnesses=tuple(witnesses),
                offender=(
                    f"meet of the first {depth} backbone elements with "
                    f"{{{', '.join(str(x) for x in base.adjoined)}}} is zero"
                ),
            )
        witnesses.append((depth, m.rep.components[0]))
    return FmpCertificate(True, k, witnesses=tuple(witnesses))


def adjoin(base: FilterBase, x: QuotientClass, k: int | None = None) -> FilterBase:
    """Extend a base by one class, re-certifying the finite meet property at
    depth ``k`` (default: the base's current certified depth).  Raises
    :class:`FmpViolation` carrying the offending meet otherwise."""
    if x.is_zero:
        raise FmpViolation("cannot adjoin the zero class", offenders=(x,))
    if k is None:
        k = max(base.certified_depth, 1)
    candidate = replace(base, adjoined=base.adjoined + (x,))
    cert = has_fmp(candidate, k)
    if not cert.ok:
        raise FmpViolation(cert.offender or "finite meet property fails", offenders=(x,))
    return replace(candidate, certified_depth=k)


# ---------------------------------------------------------------------------
# executable witnesses


@dataclass(frozen=True)
class NormalityWitness:
    """Nested neighborhood classes of a point, each nonzero, whose countable
    meet is the (zero) class of the singleton: finite additivity survives,
    countable additivity cannot.  Lazy: elements are built on demand, so spot
    checks at huge indices are cheap."""

    center: Fraction
    depth: int

    def __post_init__(self):
        object.__setattr__(self, "center", as_fraction(self.center))
        if self.depth < 1:
            raise ValueError("depth must be at least 1")

    def __len__(self) -> int:
        return self.depth

    def element(self, n: int) -> QuotientClass:
        if not 1 <= n <= self.depth:
            raise IndexError(f"index {n} out of range 1..{self.depth}")
        r = Fraction(1, n)
        return project(interval(self.center - r, self.center + r))

    def __getitem__(self, i: int) -> QuotientClass:
        return self.element(i + 1)

    def __iter__(self):
        return (self.element(n) for n in range(1, self.depth + 1))

    def running_meet(self, n: int) -> QuotientClass:
        # the chain is nested, so the n-th element is the n-fold meet
        return self.element(n)

    def running_meet_measure(self, n: int) -> Fraction:
        return measure(self.running_meet(n).rep)

    @property
    def limit_class(self) -> QuotientClass:
        """Class of the singleton left in the limit; zero because a point is null."""
        return project(points(self.center))


def normality_witness(lam, depth: int) -> NormalityWitness:
    """Witness that no two-valued state on the quotient survives countable
    meets: every truncated meet has measure 2/n, the limit class is zero."""
    return NormalityWitness(as_fraction(lam), depth)


@dataclass(frozen=True)
class DisjointFamily:
    """The m-th member of a countable family of open sets, pairwise disjoint
    across m, each with the anchor point in its closure.

    Component n is the open interval

        (center + 2^-n * (1 + 2^-(m+1)),  center + 2^-n * (1 + 2^-m))

    which lies inside the dyadic band (center + 2^-n, center + 2^-(n-1)); the
    band bound makes cross-n overlap impossible and sends left endpoints to
    the anchor, so only same-n components of two family members can ever meet,
    and those are separated exactly by the 2^-m vs 2^-(m+1) offsets.
    """

    center: Fraction
    m: int

    def __post_init__(self):
        object.__setattr__(self, "center", as_fraction(self.center))
        if self.m < 1:
            raise ValueError("family index m must be at least 1")

    def component(self, n: int) -> Interval:
        if n < 1:
            raise IndexError("component index starts at 1")
        scale = Fraction(1, 2**n)
        lo = self.center + scale * (1 + Fraction(1, 2 ** (self.m + 1)))
        hi = self.center + scale * (1 + Fraction(1, 2**self.m))
        return Interval(lo, hi)

    def envelope(self, n: int) -> Interval:
        """Dyadic band certified to contain component n."""
        if n < 1:
            raise IndexError("component index starts at 1")
        return Interval(self.center + Fraction(1, 2**n), self.center + Fraction(1, 2 ** (n - 1)))

    def truncate(self, count: int) -> IntervalSet:
        """The union of components 1..count as a concrete interval set."""
        return IntervalSet.from_intervals(self.component(n) for n in range(1, count + 1))

    def truncated_class(self, count: int) -> QuotientClass:
        return project(self.truncate(count))

    def describe(self) -> str:
        return f"disjoint family member m={self.m} at {self.center}"


def disjoint_family(lam, m: int) -> DisjointFamily:
    """The m-th open set of the countable disjoint family anchored at ``lam``."""
    return DisjointFamily(as_fraction(lam), m)


# ---------------------------------------------------------------------------
# convergence


def _geometric_depths(depth: int):
    ks = []
    k = 1
    while k < depth:
        ks.append(k)
        k *= 2
    ks.append(depth)
    return ks


def converges_to(base: FilterBase, depth: int, tol):
    """Locate the point a base converges to, if the truncated meets pin one.

    Returns the limit point (the tag when it lies in the closure of the final
    bounding interval, else the exact midpoint) once the bounding interval of
    a truncated meet has diameter below ``tol``; :data:`DIVERGENT` when the
    meets escape monotonically to infinity; :data:`UNDETERMINED` otherwise.
    """
    if depth < 1:
        raise ValueError("depth must be at least 1")
    tol = as_fraction(tol)
    if tol <= 0:
        raise ValueError("tol must be positive")
    depth = min(depth, base.size)
    lows, highs = [], []
    for k in _geometric_depths(depth):
        m = base.truncated_meet(k)
        if m.is_zero:
            return UNDETERMINED
        lo = m.rep.components[0].lo
        hi = m.rep.components[-1].hi
        lows.append(lo)
        highs.append(hi)
        if not is_infinite(lo) and not is_infinite(hi) and hi - lo < tol:
            if base.tag is not None and lo <= base.tag <= hi:
                return base.tag
            return (lo + hi) / 2
    if all(is_infinite(h) for h in highs):
        finite = [lo for lo in lows if not is_infinite(lo)]
        if (
            len(finite) == len(lows)
            and all(a < b for a, b in zip(finite, finite[1:]))
            and finite[-1] - finite[0] >= 1
        ):
            return DIVERGENT
    if all(is_infinite(lo) for lo in lows):
        finite = [h for h in highs if not is_infinite(h)]
        if (
            len(finite) == len(highs)
            and all(a > b for a, b in zip(finite, finite[1:]))
            and finite[0] - finite[-1] >= 1
        ):
            return DIVERGENT
    return UNDETERMINED
