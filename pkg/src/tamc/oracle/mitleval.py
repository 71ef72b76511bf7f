"""Exact MITL evaluation on ultimately periodic piecewise-constant signals.

The evaluator computes, for every subformula, its full satisfaction set as an
:class:`IntervalSet` over a finite unrolled horizon.  Temporal operators only
look forward, so a finite horizon is enough -- but each operator trusts its
result a bit less far out than its children do.  Every node therefore returns
its set together with a validity bound and keeps the set restricted to the
trusted region, so no garbage from the dark zone can ever flow backwards
through an unbounded scan.

Completeness of the unbounded scans rests on periodicity: every subformula's
truth set is periodic (with the signal's period) past the signal prefix, so a
witness existing at all implies one within a single period of the query
window; the horizon is padded accordingly, and the final result is self-checked
for periodicity.

Interval until is reduced to exact set transformations via two identities,
both proved by splitting the witness at the interval's left endpoint a:

  phi U<a,b> psi  =  (phi U<a,oo) psi)  and  F<a,b> psi          (b finite)
  phi U[a,oo) psi =  G(0,a) phi  and  (psi or (phi and U psi)) at t+a
  phi U(a,oo) psi =  G(0,a) phi  and  (phi and (phi U psi)) at t+a
"""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, Tuple

from ..mitl import (
    And,
    Comparison,
    Eventually,
    Globally,
    Implies,
    Interval as MitlInterval,
    MFalse,
    MitlFormula,
    MTrue,
    Not,
    Or,
    Prop,
    Release,
    Until,
)
from ..model import eval_int_expr
from .intervals import Interval, IntervalSet, pullback, until_set
from .signals import Signal, State

SetAndValidity = Tuple[IntervalSet, Fraction]


def _atom_pred(f: MitlFormula):
    if isinstance(f, Prop):
        name = f.name
        return lambda s: s.has(name)
    if isinstance(f, Comparison):
        atom = f.atom
        def pred(s: State) -> bool:
            env = s.variables
            lhs = eval_int_expr(atom.lhs, env)
            rhs = eval_int_expr(atom.rhs, env)
            return lhs < rhs if atom.op == "<" else lhs == rhs
        return pred
    raise TypeError(f"not an atom: {f!r}")


def _atom_set(f: MitlFormula, sig: Signal, horizon: Fraction) -> IntervalSet:
    pred = _atom_pred(f)
    parts = []
    for t0, at, interior, t1 in sig.segments(horizon):
        if pred(at):
            parts.append(Interval(t0, True, t0, True))
        if pred(interior):
            parts.append(Interval(t0, False, min(t1, horizon), False))
    return IntervalSet(parts)


def _slack(f: MitlFormula, period: Fraction) -> Fraction:
    """Upper bound on how much validity this node loses relative to its
    children; used only to size the unrolled horizon up front."""
    if isinstance(f, (MTrue, MFalse, Prop, Comparison)):
        return Fraction(0)
    if isinstance(f, Not):
        return _slack(f.arg, period)
    if isinstance(f, (And, Or)):
        return max((_slack(g, period) for g in f.items), default=Fraction(0))
    if isinstance(f, Implies):
        return max(_slack(f.left, period), _slack(f.right, period))
    if isinstance(f, (Eventually, Globally)):
        inner = _slack(f.arg, period)
        hi = Fraction(f.interval.hi) if f.interval.hi is not None else period
        return inner + Fraction(f.interval.lo) + hi + period
    if isinstance(f, (Until, Release)):
        inner = max(_slack(f.left, period), _slack(f.right, period))
        hi = Fraction(f.interval.hi) if f.interval.hi is not None else period
        return inner + Fraction(f.interval.lo) + hi + 2 * period
    raise TypeError(f"unknown formula node: {f!r}")


def _negated(sv: SetAndValidity) -> SetAndValidity:
    s, v = sv
    return IntervalSet.make(0, v, True, False).difference(s), v


def _window_pullback(
    sv: SetAndValidity, iv_lo: Fraction, iv_hi: Fraction | None,
    lo_closed: bool, hi_closed: bool, period: Fraction,
) -> SetAndValidity:
    s, v = sv
    out = pullback(s, iv_lo, iv_hi, lo_closed, hi_closed)
    if iv_hi is None:
        # witnesses recur within one period, so missing data past v only
        # affects queries in the last period before it (plus the offset)
        nv = v - iv_lo - period
    else:
        nv = v - iv_hi
    return out.restrict(0, nv), nv


def _plain_until(lv: SetAndValidity, rv: SetAndValidity, period: Fraction) -> SetAndValidity:
    ls, lval = lv
    rs, rval = rv
    scan = min(lval, rval)
    out = until_set(ls, rs, scan)
    nv = scan - period
    return out.restrict(0, nv), nv


def _until_with_interval(
    lv: SetAndValidity, rv: SetAndValidity, iv: MitlInterval, period: Fraction
) -> SetAndValidity:
    base = _plain_until(lv, rv, period)
    if iv.is_plain_future():
        return base
    a = Fraction(iv.lo)
    hi = None if iv.hi is None else Fraction(iv.hi)
    if a == 0:
        upper = _window_pullback(rv, a, hi, False, iv.hi_closed, period)
        s = base[0].intersect(upper[0])
        v = min(base[1], upper[1])
        return s.restrict(0, v), v
    # a > 0: prefix condition G(0,a) on the left argument ...
    g_pref = _negated(_window_pullback(_negated(lv), Fraction(0), a, False, False, period))
    # ... plus the witness condition read off at offset exactly a
    ws = lv[0].intersect(base[0])
    wv = min(lv[1], base[1])
    if iv.lo_closed:
        ws = ws.union(rv[0]).restrict(0, min(wv, rv[1]))
        wv = min(wv, rv[1])
    shifted = ws.shift_down(a), wv - a
    s = g_pref[0].intersect(shifted[0])
    v = min(g_pref[1], shifted[1])
    if hi is not None:
        upper = _window_pullback(rv, a, hi, iv.lo_closed, iv.hi_closed, period)
        s = s.intersect(upper[0])
        v = min(v, upper[1])
    return s.restrict(0, v), v


def _sets(
    f: MitlFormula,
    sig: Signal,
    horizon: Fraction,
    memo: Dict[MitlFormula, SetAndValidity],
) -> SetAndValidity:
    hit = memo.get(f)
    if hit is not None:
        return hit
    period = sig.period
    if isinstance(f, MTrue):
        out = IntervalSet.make(0, horizon, True, False), horizon
    elif isinstance(f, MFalse):
        out = IntervalSet.empty(), horizon
    elif isinstance(f, (Prop, Comparison)):
        out = _atom_set(f, sig, horizon), horizon
    elif isinstance(f, Not):
        out = _negated(_sets(f.arg, sig, horizon, memo))
    elif isinstance(f, And):
        s, v = IntervalSet.everything(), horizon
        for g in f.items:
            gs, gv = _sets(g, sig, horizon, memo)
            s, v = s.intersect(gs), min(v, gv)
        out = s.restrict(0, v), v
    elif isinstance(f, Or):
        s, v = IntervalSet.empty(), horizon
        for g in f.items:
            gs, gv = _sets(g, sig, horizon, memo)
            s, v = s.union(gs), min(v, gv)
        out = s.restrict(0, v), v
    elif isinstance(f, Implies):
        ls, lvv = _negated(_sets(f.left, sig, horizon, memo))
        rs, rvv = _sets(f.right, sig, horizon, memo)
        v = min(lvv, rvv)
        out = ls.union(rs).restrict(0, v), v
    elif isinstance(f, Eventually):
        iv = f.interval
        hi = None if iv.hi is None else Fraction(iv.hi)
        out = _window_pullback(
            _sets(f.arg, sig, horizon, memo),
            Fraction(iv.lo), hi, iv.lo_closed, iv.hi_closed, period,
        )
    elif isinstance(f, Globally):
        iv = f.interval
        hi = None if iv.hi is None else Fraction(iv.hi)
        bad = _window_pullback(
            _negated(_sets(f.arg, sig, horizon, memo)),
            Fraction(iv.lo), hi, iv.lo_closed, iv.hi_closed, period,
        )
        out = _negated(bad)
    elif isinstance(f, Until):
        out = _until_with_interval(
            _sets(f.left, sig, horizon, memo),
            _sets(f.right, sig, horizon, memo),
            f.interval, period,
        )
    elif isinstance(f, Release):
        u = _until_with_interval(
            _negated(_sets(f.left, sig, horizon, memo)),
            _negated(_sets(f.right, sig, horizon, memo)),
            f.interval, period,
        )
        out = _negated(u)
    else:
        raise TypeError(f"unknown formula node: {f!r}")
    memo[f] = out
    return out


def satisfaction_set(
    f: MitlFormula, sig: Signal, extra_periods: int = 6
) -> SetAndValidity:
    """Compute the exact satisfaction set of `f` on the signal.

    Returns (set, valid_until): membership answers are exact for every
    t < valid_until.  The result is checked to be periodic near the end of
    the trusted region; if the check fails the horizon is enlarged and the
    computation retried (a safety net -- it should never trigger)."""
    period = sig.period
    pad = _slack(f, period)
    for attempt in range(5):
        horizon = sig.prefix_end + pad + (extra_periods << attempt) * period
        out, valid = _sets(f, sig, horizon, {})
        lo = valid - 2 * period
        if lo >= sig.prefix_end:
            a = out.restrict(lo, valid - period).shift_down(lo)
            b = out.restrict(valid - period, valid).shift_down(lo + period)
            if a == b:
                return out, valid
    raise RuntimeError(
        "satisfaction set failed to stabilize; this indicates a bug in the "
        "oracle or a malformed signal"
    )


def eval_mitl_signal(f: MitlFormula, sig: Signal, t: Fraction | int = 0) -> bool:
    """Exact truth of `f` on the signal at time `t` (default: the origin)."""
    at = Fraction(t)
    out, valid = satisfaction_set(f, sig)
    if at >= valid:
        # truth sets are period-invariant past the signal prefix (the
        # stabilization check in satisfaction_set verifies this), so fold
        # distant query times back into the trusted region
        period = sig.period
        laps = (at - sig.prefix_end) // period
        at -= laps * period
        if at >= valid:
            raise ValueError(f"query time {t} outside trusted region [0, {valid})")
    return out.contains(at)
