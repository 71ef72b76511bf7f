"""Exact sets of nonnegative rationals built from finitely many intervals.

An :class:`IntervalSet` is a normalized, sorted, pairwise-disjoint tuple of
:class:`Interval` pieces with open/closed endpoint flags.  The right endpoint
may be ``None`` meaning unbounded.  All arithmetic is exact (``Fraction``),
which is what makes the oracle trustworthy as a referee.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence, Tuple, Union

Rat = Fraction
RatLike = Union[Fraction, int, str]


def _rat(x: RatLike) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


@dataclass(frozen=True)
class Interval:
    """One contiguous piece: lo/hi with closedness flags; hi=None is +oo."""

    lo: Fraction
    lo_closed: bool
    hi: Optional[Fraction]
    hi_closed: bool

    def __post_init__(self) -> None:
        if self.hi is None and self.hi_closed:
            raise ValueError("unbounded interval cannot be right-closed")

    def is_empty(self) -> bool:
        if self.hi is None:
            return False
        if self.lo > self.hi:
            return True
        if self.lo == self.hi:
            return not (self.lo_closed and self.hi_closed)
        return False

    def contains(self, t: Fraction) -> bool:
        if t < self.lo or (t == self.lo and not self.lo_closed):
            return False
        if self.hi is not None:
            if t > self.hi or (t == self.hi and not self.hi_closed):
                return False
        return True

    def __str__(self) -> str:
        left = "[" if self.lo_closed else "("
        right = "]" if self.hi_closed else ")"
        hi = "inf" if self.hi is None else str(self.hi)
        return f"{left}{self.lo},{hi}{right}"


def _point(t: Fraction) -> Interval:
    return Interval(t, True, t, True)


def _touches(a: Interval, b: Interval) -> bool:
    """True if a and b overlap or are adjacent (sorted so a.lo <= b.lo)."""
    if a.hi is None:
        return True
    if a.hi > b.lo:
        return True
    if a.hi == b.lo:
        return a.hi_closed or b.lo_closed
    return False


class IntervalSet:
    """Normalized finite union of intervals over [0, oo)."""

    __slots__ = ("parts",)

    parts: Tuple[Interval, ...]

    def __init__(self, parts: Iterable[Interval] = ()) -> None:
        object.__setattr__(self, "parts", self._normalize(parts))

    def __setattr__(self, name: str, value: object) -> None:  # immutable
        raise AttributeError("IntervalSet is immutable")

    @staticmethod
    def _normalize(parts: Iterable[Interval]) -> Tuple[Interval, ...]:
        live = [p for p in parts if not p.is_empty()]
        for p in live:
            if p.lo < 0:
                raise ValueError(f"interval below zero: {p}")
        live.sort(key=lambda p: (p.lo, not p.lo_closed))
        merged: list[Interval] = []
        for p in live:
            if merged and _touches(merged[-1], p):
                a = merged[-1]
                if a.hi is None:
                    continue
                if p.hi is None:
                    hi, hic = None, False
                elif p.hi > a.hi:
                    hi, hic = p.hi, p.hi_closed
                elif p.hi == a.hi:
                    hi, hic = a.hi, a.hi_closed or p.hi_closed
                else:
                    hi, hic = a.hi, a.hi_closed
                merged[-1] = Interval(a.lo, a.lo_closed, hi, hic)
            else:
                merged.append(p)
        return tuple(merged)

    # -- constructors ---------------------------------------------------

    @staticmethod
    def empty() -> "IntervalSet":
        return IntervalSet(())

    @staticmethod
    def everything() -> "IntervalSet":
        return IntervalSet((Interval(Fraction(0), True, None, False),))

    @staticmethod
    def point(t: RatLike) -> "IntervalSet":
        return IntervalSet((_point(_rat(t)),))

    @staticmethod
    def make(
        lo: RatLike,
        hi: Optional[RatLike],
        lo_closed: bool = True,
        hi_closed: bool = False,
    ) -> "IntervalSet":
        h = None if hi is None else _rat(hi)
        return IntervalSet((Interval(_rat(lo), lo_closed, h, hi_closed),))

    # -- queries ---------------------------------------------------------

    def is_empty(self) -> bool:
        return not self.parts

    def contains(self, t: RatLike) -> bool:
        x = _rat(t)
        return any(p.contains(x) for p in self.parts)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, IntervalSet) and self.parts == other.parts

    def __hash__(self) -> int:
        return hash(self.parts)

    def __str__(self) -> str:
        if not self.parts:
            return "{}"
        return " u ".join(str(p) for p in self.parts)

    __repr__ = __str__

    # -- boolean algebra --------------------------------------------------

    def union(self, other: "IntervalSet") -> "IntervalSet":
        return IntervalSet(self.parts + other.parts)

    def complement(self) -> "IntervalSet":
        """Complement within [0, oo)."""
        out: list[Interval] = []
        cursor = Fraction(0)
        cursor_closed = True  # the complement currently includes `cursor`
        for p in self.parts:
            gap = Interval(cursor, cursor_closed, p.lo, not p.lo_closed)
            if not gap.is_empty():
                out.append(gap)
            if p.hi is None:
                return IntervalSet(out)
            cursor, cursor_closed = p.hi, not p.hi_closed
        out.append(Interval(cursor, cursor_closed, None, False))
        return IntervalSet(out)

    def intersect(self, other: "IntervalSet") -> "IntervalSet":
        out: list[Interval] = []
        i = j = 0
        a, b = self.parts, other.parts
        while i < len(a) and j < len(b):
            p, q = a[i], b[j]
            lo, loc = max(
                (p.lo, not p.lo_closed), (q.lo, not q.lo_closed)
            )  # larger lo wins; open beats closed at ties
            lo_closed = not loc
            if p.hi is None:
                hi, hic = q.hi, q.hi_closed
            elif q.hi is None:
                hi, hic = p.hi, p.hi_closed
            elif p.hi < q.hi:
                hi, hic = p.hi, p.hi_closed
            elif q.hi < p.hi:
                hi, hic = q.hi, q.hi_closed
            else:
                hi, hic = p.hi, p.hi_closed and q.hi_closed
            cand = Interval(lo, lo_closed, hi, hic)
            if not cand.is_empty():
                out.append(cand)
            # advance whichever ends first
            if p.hi is None:
                j += 1
            elif q.hi is None:
                i += 1
            elif p.hi < q.hi:
                i += 1
            elif q.hi < p.hi:
                j += 1
            else:
                i += 1
                j += 1
        return IntervalSet(out)

    def difference(self, other: "IntervalSet") -> "IntervalSet":
        return self.intersect(other.complement())

    # -- geometry ---------------------------------------------------------

    def shift_down(self, a: RatLike) -> "IntervalSet":
        """{t >= 0 : t + a in S}."""
        d = _rat(a)
        out = []
        for p in self.parts:
            lo = p.lo - d
            hi = None if p.hi is None else p.hi - d
            loc = p.lo_closed
            if lo < 0:
                lo, loc = Fraction(0), True
            if hi is not None and hi < 0:
                continue
            out.append(Interval(lo, loc, hi, p.hi_closed))
        return IntervalSet(out)

    def restrict(self, lo: RatLike, hi: Optional[RatLike]) -> "IntervalSet":
        """Intersection with [lo, hi)."""
        h = None if hi is None else _rat(hi)
        window = IntervalSet((Interval(_rat(lo), True, h, False),))
        return self.intersect(window)

    def endpoints(self) -> list[Fraction]:
        pts = []
        for p in self.parts:
            pts.append(p.lo)
            if p.hi is not None:
                pts.append(p.hi)
        return pts

    def measure_upper_bound(self) -> Optional[Fraction]:
        """Largest finite coordinate mentioned, or None when empty/unbounded."""
        if not self.parts:
            return Fraction(0)
        last = self.parts[-1]
        return None if last.hi is None else last.hi


def pullback(
    target: IntervalSet,
    lo: RatLike,
    hi: Optional[RatLike],
    lo_closed: bool,
    hi_closed: bool,
) -> IntervalSet:
    """{t >= 0 : <t+lo, t+hi> intersects target} for a window with the given
    endpoint flags (hi=None meaning unbounded).  This is exactly the truth set
    of "eventually within the window" applied to `target`."""
    a = _rat(lo)
    b = None if hi is None else _rat(hi)
    if b is not None and (a > b or (a == b and not (lo_closed and hi_closed))):
        raise ValueError("empty window")
    out = []
    for j in target.parts:
        # lower constraint: t + b must reach j.lo
        if b is None:
            new_lo, new_lo_closed = Fraction(0), True
        else:
            new_lo = j.lo - b
            new_lo_closed = hi_closed and j.lo_closed
            if new_lo < 0:
                new_lo, new_lo_closed = Fraction(0), True
        # upper constraint: t + a must not pass j.hi
        if j.hi is None:
            new_hi, new_hi_closed = None, False
        else:
            new_hi = j.hi - a
            new_hi_closed = lo_closed and j.hi_closed
            if new_hi < 0 or (new_hi == 0 and not new_hi_closed):
                continue
        cand = Interval(new_lo, new_lo_closed, new_hi, new_hi_closed)
        if not cand.is_empty():
            out.append(cand)
    return IntervalSet(out)


def until_set(
    phi: IntervalSet, psi: IntervalSet, horizon: Fraction
) -> IntervalSet:
    """Truth set of the plain strict until (no interval bound) on [0, horizon),
    assuming nothing is true at or beyond `horizon` (callers must leave enough
    slack for that assumption to wash out).

    t satisfies it iff some t' > t has psi(t') and phi throughout (t, t')."""
    cuts = {Fraction(0), horizon}
    for s in (phi, psi):
        for e in s.endpoints():
            if 0 <= e <= horizon:
                cuts.add(e)
    pts = sorted(cuts)
    # segments, right to left: [p_n] (p_{n-1},p_n) [p_{n-1}] ... (p_0,p_1) [p_0]
    # value_after_point: U value at the point segment to the right
    out: list[Interval] = []
    u_next_point = False  # U at pts[i+1] (false beyond horizon)
    for i in range(len(pts) - 2, -1, -1):
        x, y = pts[i], pts[i + 1]
        mid = (x + y) / 2
        phi_s = phi.contains(mid)
        psi_s = psi.contains(mid)
        phi_y = phi.contains(y) if y < horizon else False
        psi_y = psi.contains(y) if y < horizon else False
        # value on the open segment (x, y) and at the point [x] coincide:
        # both need phi across (.., y) then a witness in-segment, at y, or past y
        val = phi_s and (psi_s or psi_y or (phi_y and u_next_point))
        if val:
            out.append(Interval(x, True, y, False))
        # at the point x itself the same expression applies (witness strictly
        # after x): val already covers [x]
        # prepare for next iteration: U at point [x]
        u_next_point = val
    return IntervalSet(out)
