"""Independent dense-time oracle: trace validation, signal extraction,
exact MITL evaluation over piecewise-constant signals, and a small
counterexample search.  Everything here works with exact rationals and is
deliberately separate from the solver pipeline so the two can referee each
other."""

from .intervals import Interval, IntervalSet
from .mitleval import eval_mitl_signal, satisfaction_set
from .signals import Piece, Signal, State
from .traces import Move, Trace, TracePosition, trace_to_signal, validate_trace
from .search import random_trace, search_counterexample

__all__ = [
    "Interval",
    "IntervalSet",
    "eval_mitl_signal",
    "satisfaction_set",
    "Piece",
    "Signal",
    "State",
    "Move",
    "Trace",
    "TracePosition",
    "trace_to_signal",
    "validate_trace",
    "random_trace",
    "search_counterexample",
]
