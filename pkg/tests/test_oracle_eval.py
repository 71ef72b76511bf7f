"""Dense-time formula evaluation over piecewise-constant signals.

The interval-set evaluator is refereed by tests.helpers.grid_eval, a
deliberately different algorithm (dense rational grid scan, exact for
formulas whose interval bounds are finite).
"""

from fractions import Fraction

import pytest
from hypothesis import given, settings, HealthCheck
from hypothesis import strategies as st

from tamc.mitl import (
    Eventually,
    Globally,
    Interval,
    MTrue,
    Not,
    Prop,
    Until,
    Release,
    UNBOUNDED,
    parse_mitl,
)
from tamc.model import IntConst, IntVar, VarAtom
from tamc.mitl import Comparison
from tamc.oracle import eval_mitl_signal, satisfaction_set, trace_to_signal, validate_trace
from tamc.oracle.signals import Piece, Signal
from tamc.oracle.traces import Move, Trace, TracePosition

from helpers import (
    bounded_intervals,
    formulas,
    grid_eval,
    label_example_net,
    mk_signal,
    mk_state,
    prop_signals,
)


def F(lo, hi, arg, lc=False, hc=False):
    return Eventually(arg, Interval(Fraction(lo), None if hi is None else Fraction(hi), lc, hc))


def G(lo, hi, arg, lc=False, hc=False):
    return Globally(arg, Interval(Fraction(lo), None if hi is None else Fraction(hi), lc, hc))


# ---------------------------------------------------------------------------
# basic signal evaluation


def test_prop_reads_signal_pieces():
    sig = mk_signal([("a", 2), ("b", 3)], loop=[("a", 1), ("b", 1)])
    p = Prop("a")
    assert eval_mitl_signal(p, sig, 0)
    assert eval_mitl_signal(p, sig, Fraction(3, 2))
    assert not eval_mitl_signal(p, sig, 3)
    # loop unrolls forever: a holds on [5,6), b on [6,7), a on [7,8)...
    assert eval_mitl_signal(p, sig, 5)
    assert not eval_mitl_signal(p, sig, 6)
    assert eval_mitl_signal(p, sig, 105)


def test_comparison_reads_variables():
    s0 = mk_state("a", n=0)
    s1 = mk_state("a", n=2)
    sig = Signal((Piece(s0, s0, Fraction(1)),), (Piece(s1, s1, Fraction(1)),))
    f = Comparison(VarAtom(IntVar("n"), "<", IntConst(1)))
    assert eval_mitl_signal(f, sig, 0)
    assert not eval_mitl_signal(f, sig, 1)
    assert not eval_mitl_signal(f, sig, 17)


def test_globally_unbounded_is_strict_at_origin():
    # p fails only at t=0; G_(0,oo) p still holds at 0 (origin excluded)
    s_off = mk_state()
    s_on = mk_state("p")
    sig = Signal((Piece(s_off, s_on, Fraction(1)),), (Piece(s_on, s_on, Fraction(1)),))
    f = Globally(Prop("p"), UNBOUNDED)
    assert eval_mitl_signal(f, sig, 0)
    assert eval_mitl_signal(Not(Prop("p")), sig, 0)


def test_until_requires_interior_chain():
    # a on [0,2), gap at 2 (interior of the second piece has no a), b at 4
    pieces = [
        Piece(mk_state("a"), mk_state("a"), Fraction(2)),      # [0,2)
        Piece(mk_state("a"), mk_state(), Fraction(2)),         # a at instant 2 only
        Piece(mk_state("b"), mk_state("b"), Fraction(1)),      # [4,5)
    ]
    sig = Signal(tuple(pieces), (Piece(mk_state(), mk_state(), Fraction(1)),))
    f = Until(Prop("a"), Prop("b"), UNBOUNDED)
    assert not eval_mitl_signal(f, sig, 0)
    assert not eval_mitl_signal(f, sig, 1)
    # from inside (2,4) the chain to b is unbroken? a is false there -> still no
    assert not eval_mitl_signal(f, sig, 3)


def test_until_with_witness():
    sig = mk_signal([("a", 2), ("ab", 1)], loop=[("", 1)])
    f = Until(Prop("a"), Prop("b"), UNBOUNDED)
    assert eval_mitl_signal(f, sig, 0)
    assert eval_mitl_signal(f, sig, Fraction(3, 2))
    # at 2 b already holds now, but until needs a STRICTLY future witness;
    # b keeps holding on (2,3) so witnesses exist
    assert eval_mitl_signal(f, sig, 2)
    assert not eval_mitl_signal(f, sig, 3)


def test_bounded_eventually_window_edges():
    sig = mk_signal([("", 3), ("p", 1)], loop=[("", 1)])  # p exactly on [3,4)
    assert eval_mitl_signal(F(0, 3, Prop("p"), hc=True), sig, 0)   # (0,3]: hits 3
    assert not eval_mitl_signal(F(0, 3, Prop("p")), sig, 0)        # (0,3): open, misses
    assert eval_mitl_signal(F(2, 4, Prop("p")), sig, 0)
    assert not eval_mitl_signal(F(0, 1, Prop("p")), sig, 0)
    # from t=4, p is already over
    assert not eval_mitl_signal(F(0, None, Prop("p")), sig, 4)


def test_release_duality():
    sig = mk_signal([("a", 1), ("ab", 2)], loop=[("b", 2)])
    f = Release(Prop("a"), Prop("b"), UNBOUNDED)
    g = Not(Until(Not(Prop("a")), Not(Prop("b")), UNBOUNDED))
    for t in (0, Fraction(1, 2), 1, 2, 3, Fraction(9, 2)):
        assert eval_mitl_signal(f, sig, t) == eval_mitl_signal(g, sig, t)


# ---------------------------------------------------------------------------
# frozen facts about the three-location labelled example


def test_label_example_signal_shape():
    net = label_example_net()
    # positions: delay 3, fire e1 (q0->q1, n:=2); delay 2, fire e2 (q1->q2, n:=1);
    # delay 1, fire e3 (q2->q0, n:=0); loop from position 0... but vars differ
    # after a lap (n back to 0), so close the loop over the full cycle.
    trace = Trace(
        (
            TracePosition(Fraction(3), (Move(0, "]("),)),
            TracePosition(Fraction(2), (Move(1, "]("),)),
            TracePosition(Fraction(1), (Move(2, "]("),)),
            TracePosition(Fraction(3), (Move(0, "]("),)),
        ),
        loop=1,
    )
    assert validate_trace(net, trace) == []
    sig = trace_to_signal(net, trace)

    # the closed-open edge keeps OLD labels and OLD variable values at the
    # switching instant: at time 3 the signal still shows a with n=0,
    # and n=2 only on the open interval after it
    a = Prop("a")
    n_is = lambda v: Comparison(VarAtom(IntVar("n"), "=", IntConst(v)))
    assert eval_mitl_signal(a, sig, 3)
    assert eval_mitl_signal(n_is(0), sig, 3)
    assert eval_mitl_signal(n_is(2), sig, Fraction(7, 2))
    assert eval_mitl_signal(n_is(2), sig, 4)

    # c labels q2, which is occupied on (5,6]: F_(0,1)(c) is false AT 6
    # (nothing strictly ahead) and true just before
    f = F(0, 1, Prop("c"))
    assert eval_mitl_signal(f, sig, 5)
    assert eval_mitl_signal(f, sig, Fraction(11, 2))
    assert not eval_mitl_signal(f, sig, 6)


# ---------------------------------------------------------------------------
# decomposition identities the encoder will later rely on


@settings(max_examples=150, deadline=None, suppress_health_check=[HealthCheck.too_slow])
@given(prop_signals(), st.fractions(min_value=0, max_value=3, max_denominator=4),
       st.fractions(min_value=Fraction(1, 2), max_value=3, max_denominator=4),
       st.booleans())
def test_interval_until_splits_into_unbounded_until_and_eventually(sig, a, width, hc):
    b = a + width
    lhs, rhs = Prop("a"), Prop("b")
    whole = Until(lhs, rhs, Interval(a, b, False, hc))
    split_u = Until(lhs, rhs, Interval(a, None, False, False))
    split_f = Eventually(rhs, Interval(a, b, False, hc))
    for t in (Fraction(0), Fraction(1, 2), Fraction(1)):
        got = eval_mitl_signal(whole, sig, t)
        want = eval_mitl_signal(split_u, sig, t) and eval_mitl_signal(split_f, sig, t)
        assert got == want


@settings(max_examples=150, deadline=None, suppress_health_check=[HealthCheck.too_slow])
@given(prop_signals(), st.fractions(min_value=Fraction(1, 2), max_value=3, max_denominator=4))
def test_lower_bounded_until_shifts_to_plain_until(sig, a):
    lhs, rhs = Prop("a"), Prop("b")
    whole = Until(lhs, rhs, Interval(a, None, False, False))
    # phi U_(a,oo) psi == G_(0,a] phi and (phi and (phi U psi)) at t+a
    prefix = Globally(lhs, Interval(Fraction(0), a, False, True))
    tail = Until(lhs, rhs, UNBOUNDED)
    for t in (Fraction(0), Fraction(1, 2)):
        got = eval_mitl_signal(whole, sig, t)
        want = eval_mitl_signal(prefix, sig, t) and eval_mitl_signal(lhs, sig, t + a) and eval_mitl_signal(tail, sig, t + a)
        assert got == want


# ---------------------------------------------------------------------------
# the main event: differential against the grid referee


@settings(max_examples=400, deadline=None, suppress_health_check=[HealthCheck.too_slow])
@given(
    formulas(depth=3, interval_strategy=bounded_intervals()),
    prop_signals(),
    st.sampled_from([Fraction(0), Fraction(1, 2), Fraction(3, 2)]),
)
def test_matches_grid_referee(f, sig, t):
    assert eval_mitl_signal(f, sig, t) == grid_eval(f, sig, t)


@settings(max_examples=150, deadline=None, suppress_health_check=[HealthCheck.too_slow])
@given(
    formulas(depth=2, interval_strategy=bounded_intervals(), variables=("n",)),
    prop_signals(variables={"n": (0, 2)}),
)
def test_matches_grid_referee_with_variables(f, sig):
    assert eval_mitl_signal(f, sig, 0) == grid_eval(f, sig, 0)


# benchmark-shaped formulas against hand-built scenarios


def test_request_response_shapes():
    # every request is answered within (0,3]
    good = mk_signal([(("req",), 1), (("wait",), 1)], loop=[(("req",), 1), (("wait",), 1)])
    f = Globally(parse_mitl("req -> F[0,3] wait"), UNBOUNDED)
    assert eval_mitl_signal(f, good, 0)
    # response arrives too late
    slow = mk_signal([(("req",), 1), ((), 4), (("wait",), 1)], loop=[((), 1)])
    assert not eval_mitl_signal(f, slow, 0)


def test_mutual_exclusion_shape():
    both = mk_signal([("p", 1)], loop=[("pq", 1), ("", 1)])
    f = Globally(Not(parse_mitl("p && q")), UNBOUNDED)
    assert not eval_mitl_signal(f, both, 0)
    apart = mk_signal([("p", 1)], loop=[("q", 1), ("p", 1)])
    assert eval_mitl_signal(f, apart, 0)
