"""Exact interval-set algebra underpinning the oracle."""

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tamc.oracle.intervals import Interval, IntervalSet, pullback, until_set


def iv(lo, hi, lc=True, hc=False):
    return Interval(Fraction(lo), lc, None if hi is None else Fraction(hi), hc)


def S(*parts):
    return IntervalSet(parts)


# ---------------------------------------------------------------------------
# normalization and algebra


def test_merges_overlapping_and_adjacent_pieces():
    s = S(iv(1, 2, True, False), iv(2, 3, True, False), iv(5, 6), iv(4, 5, True, True))
    assert s == S(iv(1, 3), iv(4, 6))


def test_keeps_genuinely_separate_pieces():
    s = S(iv(1, 2, True, False), iv(2, 3, False, False))
    assert len(s.parts) == 2
    assert not s.contains(2)


def test_points_and_empty_pieces():
    p = IntervalSet.point(3)
    assert p.contains(3) and not p.contains(Fraction(29, 10))
    assert S(iv(2, 2, True, False)).is_empty()
    assert S(iv(3, 2)).is_empty()


def test_complement_roundtrip():
    s = S(iv(0, 1, True, True), iv(2, 3, False, False))
    c = s.complement()
    assert c.contains(2) and c.contains(Fraction(3, 2)) and c.contains(3)
    assert not c.contains(Fraction(1, 2))
    assert c.complement() == s


def test_intersection_endpoint_flags():
    a = S(iv(0, 2, True, True))
    b = S(iv(2, 4, True, True))
    assert a.intersect(b) == IntervalSet.point(2)
    b_open = S(iv(2, 4, False, True))
    assert a.intersect(b_open).is_empty()


def test_shift_down_clips_at_zero():
    s = S(iv(1, 3, False, True))
    assert s.shift_down(2) == S(iv(0, 1, True, True))
    assert s.shift_down(4).is_empty()


rat = st.fractions(min_value=0, max_value=8, max_denominator=4)


@st.composite
def interval_sets(draw):
    parts = []
    for _ in range(draw(st.integers(0, 4))):
        lo = draw(rat)
        width = draw(st.fractions(min_value=0, max_value=3, max_denominator=4))
        lc, hc = draw(st.booleans()), draw(st.booleans())
        if width == 0 and not (lc and hc):
            continue
        parts.append(Interval(lo, lc, lo + width, hc))
    if draw(st.booleans()):
        parts.append(Interval(draw(rat), draw(st.booleans()), None, False))
    return IntervalSet(parts)


@settings(max_examples=300, deadline=None)
@given(interval_sets(), interval_sets(), rat)
def test_boolean_algebra_pointwise(a, b, t):
    assert a.union(b).contains(t) == (a.contains(t) or b.contains(t))
    assert a.intersect(b).contains(t) == (a.contains(t) and b.contains(t))
    assert a.complement().contains(t) == (not a.contains(t))
    assert a.difference(b).contains(t) == (a.contains(t) and not b.contains(t))


@settings(max_examples=200, deadline=None)
@given(interval_sets())
def test_normalization_is_canonical(s):
    assert IntervalSet(s.parts) == s
    assert s.complement().complement() == s
    for p, q in zip(s.parts, s.parts[1:]):
        assert p.hi is not None and (p.hi < q.lo or (p.hi == q.lo and not (p.hi_closed or q.lo_closed)))


# ---------------------------------------------------------------------------
# window pullback (the "eventually within <a,b>" transform)


def test_pullback_basic_window():
    target = S(iv(1, 3, False, True))  # (1,3]
    # somewhere in (t, t+1): at t=0 the open window (0,1) misses (1,3]
    out = pullback(target, 0, 1, False, False)
    assert out == S(iv(0, 3, False, False))
    # somewhere in (t+2, t+4]: at t=1 the window (3,5] misses (1,3]
    out = pullback(target, 2, 4, False, True)
    assert out == S(iv(0, 1, True, False))


def test_pullback_point_target():
    target = IntervalSet.point(5)
    out = pullback(target, 0, 2, False, True)  # (t, t+2]
    assert out == S(iv(3, 5, True, False))
    out = pullback(target, 1, 2, True, True)  # [t+1, t+2]
    assert out == S(iv(3, 4, True, True))


def test_pullback_unbounded_window():
    target = S(iv(4, 6, True, False))
    out = pullback(target, 2, None, False, False)  # (t+2, oo)
    assert out == S(iv(0, 4, True, False))


@settings(max_examples=300, deadline=None)
@given(interval_sets(), rat, st.fractions(min_value=0, max_value=4, max_denominator=4),
       st.fractions(min_value=Fraction(1, 4), max_value=4, max_denominator=4),
       st.booleans(), st.booleans())
def test_pullback_pointwise(target, t, a, width, lc, hc):
    b = a + width
    out = pullback(target, a, b, lc and a > 0, hc)
    # reference: scan candidate witnesses from target endpoints and midpoints
    window = IntervalSet((Interval(t + a, lc and a > 0, t + b, hc),))
    hit = not window.intersect(target).is_empty()
    assert out.contains(t) == hit


# ---------------------------------------------------------------------------
# plain strict until over finite horizons


def test_until_needs_continuous_chain():
    phi = S(iv(0, 2, True, False), iv(2, 5, False, False))  # hole at exactly 2
    psi = S(iv(4, 5))
    out = until_set(phi, psi, Fraction(10))
    # the hole at 2 blocks every chain from before it
    assert not out.contains(1)
    assert out.contains(3)
    assert out.contains(Fraction(5, 2))


def test_until_witness_at_segment_end():
    phi = S(iv(0, 3, True, False))
    psi = IntervalSet.point(3)
    out = until_set(phi, psi, Fraction(10))
    assert out.contains(0) and out.contains(Fraction(5, 2))
    assert not out.contains(3)


def test_until_strictness_at_origin():
    # psi holds only at 0: no strictly-future witness anywhere
    psi = IntervalSet.point(0)
    phi = IntervalSet.everything()
    out = until_set(phi, psi, Fraction(10))
    assert out.is_empty()


def test_until_value_constant_on_open_segments():
    # psi on (1,2): every point strictly before 2 with phi-chain qualifies
    phi = IntervalSet.everything()
    psi = S(iv(1, 2, False, False))
    out = until_set(phi, psi, Fraction(10))
    assert out.contains(0) and out.contains(1) and out.contains(Fraction(3, 2))
    assert not out.contains(2)
