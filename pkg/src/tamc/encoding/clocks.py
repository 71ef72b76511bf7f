"""Clock handling: the two-copy scheme and reset-aware constraint rewrites.

Formula-level clocks never rewind, so each network clock x is represented
by two alternating copies c0[x], c1[x] plus an integer selector sel[x]
naming the copy that currently carries x's value.  A reset zeroes the idle
copy at the position where the firing takes effect; the selector switches
one position later, so at the effect position the old copy still shows the
pre-reset value while the new copy is exactly 0.

Because a comparison ``x ~ d`` reads the active copy, it is correct only
at positions where the active copy actually carries x.  The two rewrites
below patch the places where that fails:

* ``r1``: at a position where x was just reset, decide each atom by
  substituting 0 (a compile-time constant).
* ``r2``: read the active copy only when neither copy is 0, and fall back
  to the substituted constant otherwise.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Optional

from tamc.cltloc import (
    And,
    ClockCmp,
    Cnt,
    FALSE,
    Formula,
    Globally,
    IntCmp,
    Next,
    Num,
    Release,
    TRUE,
    conj,
    disj,
    implies,
    neg,
)
from tamc.model import ClockAtom, ClockLit, Guard, eval_clock_lit
from tamc.encoding.vocab import NetworkVocabulary


def _sel_is(vocab: NetworkVocabulary, clock: str, j: int) -> IntCmp:
    return IntCmp(Cnt(vocab.sel(clock)), "=", Num(j))


def _copy(vocab: NetworkVocabulary, clock: str, j: int) -> str:
    return vocab.c0(clock) if j == 0 else vocab.c1(clock)


def encode_clock_atom(atom: ClockAtom, vocab: NetworkVocabulary) -> Formula:
    """``x ~ d`` read through the active copy.

    ((c0[x] ~ d and sel[x] = 0) or (c1[x] ~ d and sel[x] = 1))
    """
    clock = atom.clock
    return disj(
        conj(ClockCmp(vocab.c0(clock), atom.op, atom.bound), _sel_is(vocab, clock, 0)),
        conj(ClockCmp(vocab.c1(clock), atom.op, atom.bound), _sel_is(vocab, clock, 1)),
    )


def encode_clock_lit(lit: ClockLit, vocab: NetworkVocabulary) -> Formula:
    body = encode_clock_atom(lit.atom, vocab)
    return neg(body) if lit.negated else body


def encode_clock_guard(guard: Optional[Guard], vocab: NetworkVocabulary) -> Formula:
    """Conjunction of literals; None stands for an unsatisfiable constraint."""
    if guard is None:
        return FALSE
    return conj(*(encode_clock_lit(lit, vocab) for lit in guard))


def weakened_invariant(inv: Guard) -> Optional[Guard]:
    """Close the strict comparisons of an invariant; None when unsatisfiable.

    ``x < d`` and ``x <= d`` both close to ``x <= d``; their negations both
    relax to ``x >= d`` (which the kernel spells as a negated ``x < d``);
    an equality closes to nothing satisfiable and a negated equality holds
    vacuously on the closure.
    """
    out = []
    for lit in inv:
        a = lit.atom
        if a.op == "=":
            if not lit.negated:
                return None
            continue
        if lit.negated:
            out.append(ClockLit(ClockAtom(a.clock, "<", a.bound), True))
        else:
            out.append(ClockLit(ClockAtom(a.clock, "<=", a.bound), False))
    return tuple(out)


def _lit_at_zero(lit: ClockLit) -> bool:
    return eval_clock_lit(lit, {lit.atom.clock: Fraction(0)})


def some_copy_zero(vocab: NetworkVocabulary, clock: str) -> Formula:
    return disj(
        ClockCmp(vocab.c0(clock), "=", 0),
        ClockCmp(vocab.c1(clock), "=", 0),
    )


def _both_copies_positive(vocab: NetworkVocabulary, clock: str) -> Formula:
    return conj(
        ClockCmp(vocab.c0(clock), ">", 0),
        ClockCmp(vocab.c1(clock), ">", 0),
    )


def rewrite_reset_aware(
    guard: Optional[Guard], mode: str, vocab: NetworkVocabulary
) -> Formula:
    """Translate a clock constraint so that fresh resets are read as 0.

    ``r1`` replaces each literal by (some copy is 0 -> the literal's value
    at 0); it is conjoined with the plain translation, which covers the
    un-reset clocks.  ``r2`` is self-contained: each literal becomes (both
    copies positive -> active-copy comparison) and (some copy 0 -> value
    at 0).
    """
    if mode not in ("r1", "r2"):
        msg = f"unknown rewrite mode {mode!r}"
        raise ValueError(msg)
    if guard is None:
        return FALSE
    parts = []
    for lit in guard:
        clock = lit.atom.clock
        at_zero = TRUE if _lit_at_zero(lit) else FALSE
        if mode == "r1":
            parts.append(implies(some_copy_zero(vocab, clock), at_zero))
        else:
            parts.append(
                conj(
                    implies(
                        _both_copies_positive(vocab, clock),
                        encode_clock_lit(lit, vocab),
                    ),
                    implies(some_copy_zero(vocab, clock), at_zero),
                )
            )
    return conj(*parts)


def encode_weak_guard(inv: Guard, vocab: NetworkVocabulary) -> Formula:
    return encode_clock_guard(weakened_invariant(inv), vocab)


def encode_clock_system(clocks, vocab: NetworkVocabulary) -> Formula:
    """Structure of the copy pairs: initial split plus alternation.

    Per clock, initially c0[x] = 0, c1[x] > 0 and sel[x] = 0; and whenever
    copy j is 0, from the next position on copy j stays positive and
    selected until the other copy is reset in turn.
    """
    init = []
    for x in clocks:
        init.append(ClockCmp(vocab.c0(x), "=", 0))
        init.append(ClockCmp(vocab.c1(x), ">", 0))
        init.append(_sel_is(vocab, x, 0))
    steps = []
    for x in clocks:
        for j in (0, 1):
            steps.append(
                implies(
                    ClockCmp(_copy(vocab, x, j), "=", 0),
                    Next(
                        Release(
                            ClockCmp(_copy(vocab, x, 1 - j), "=", 0),
                            conj(
                                _sel_is(vocab, x, j),
                                ClockCmp(_copy(vocab, x, j), ">", 0),
                            ),
                        )
                    ),
                )
            )
    if not init:
        return TRUE
    return conj(And(tuple(init)), Globally(conj(*steps)))
