"""Piecewise-constant signals over dense time.

A signal maps [0, oo) to a :class:`State` (a set of true propositions plus an
integer valuation of the variables).  It is represented as a finite prefix of
pieces followed by a loop of pieces that repeats forever, so every signal here
is ultimately periodic with exact rational breakpoints.  Each piece carries a
separate value *at* its starting instant and *on* the open interval that
follows, because discrete jumps make the two differ.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Optional, Tuple

Rat = Fraction


@dataclass(frozen=True)
class State:
    """Instantaneous observation: true propositions + variable values."""

    props: frozenset[str]
    var_items: Tuple[Tuple[str, int], ...]

    @staticmethod
    def make(props: Iterable[str] = (), variables: Optional[Mapping[str, int]] = None) -> "State":
        items = tuple(sorted((variables or {}).items()))
        return State(frozenset(props), items)

    @property
    def variables(self) -> dict[str, int]:
        return dict(self.var_items)

    def var(self, name: str) -> int:
        for k, v in self.var_items:
            if k == name:
                return v
        raise KeyError(f"variable {name!r} not present in signal state")

    def has(self, prop: str) -> bool:
        return prop in self.props


@dataclass(frozen=True)
class Piece:
    """Value at the piece's first instant, then on the open interval after it."""

    at: State
    interior: State
    duration: Fraction

    def __post_init__(self) -> None:
        if self.duration <= 0:
            raise ValueError("piece duration must be positive")


class Signal:
    """Ultimately periodic piecewise-constant signal on [0, oo)."""

    __slots__ = ("prefix", "loop", "prefix_end", "period")

    def __init__(self, prefix: Iterable[Piece], loop: Iterable[Piece]) -> None:
        pre = tuple(prefix)
        lp = tuple(loop)
        if not lp:
            raise ValueError("signal needs a nonempty loop (use a constant piece)")
        object.__setattr__(self, "prefix", pre)
        object.__setattr__(self, "loop", lp)
        object.__setattr__(self, "prefix_end", sum((p.duration for p in pre), Fraction(0)))
        object.__setattr__(self, "period", sum((p.duration for p in lp), Fraction(0)))

    def __setattr__(self, name: str, value: object) -> None:
        raise AttributeError("Signal is immutable")

    @staticmethod
    def constant(state: State) -> "Signal":
        return Signal((), (Piece(state, state, Fraction(1)),))

    # -- pointwise access -------------------------------------------------

    def value_at(self, t: Fraction) -> State:
        if t < 0:
            raise ValueError("signals start at time zero")
        pos = Fraction(t)
        for piece in self.prefix:
            if pos == 0:
                return piece.at
            if pos < piece.duration:
                return piece.interior
            pos -= piece.duration
        pos = pos % self.period if pos >= self.period else pos
        for piece in self.loop:
            if pos == 0:
                return piece.at
            if pos < piece.duration:
                return piece.interior
            pos -= piece.duration
        raise AssertionError("unreachable")

    # -- segment iteration -------------------------------------------------

    def segments(self, horizon: Fraction):
        """Yield (start_time, at_state, interior_state, end_time) for every
        piece whose start lies in [0, horizon), unrolling the loop."""
        t = Fraction(0)
        for piece in self.prefix:
            if t >= horizon:
                return
            yield t, piece.at, piece.interior, t + piece.duration
            t += piece.duration
        while t < horizon:
            for piece in self.loop:
                if t >= horizon:
                    return
                yield t, piece.at, piece.interior, t + piece.duration
                t += piece.duration
