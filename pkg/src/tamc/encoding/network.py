"""Structural encoding of a network: every model is one of its runs.

Positions of the formula are the fronts between consecutive time slices of
a run.  Position i carries the configuration entering the i-th slice;
a firing recorded by ``tr[k]`` at i fires at the next front, so its effects
(target location, new variable values, fresh resets) appear at i+1, while
its enabling conditions split between i (variable guard, read on old
values) and i+1 (clock guard, read on the just-elapsed clock values before
the selector switch).

The conjuncts fall into three groups: the clock-pair structure, the
description of position 0, and a stepped invariant relating every position
to its successor (firing effects, inertia of idle automata, and the rule
that locations, resets and variable changes all need a recorded firing).
A last stepped conjunct bounds every counter to its domain; without it a
model could park ``loc[k]`` or ``tr[k]`` outside the coded range, where no
antecedent matches, and evade the invariant and firing rules entirely.
"""

from __future__ import annotations

from tamc.cltloc import (
    Cnt,
    Formula,
    Globally,
    IntCmp,
    Next,
    Num,
    Nxt,
    TRUE,
    conj,
    disj,
    implies,
    neg,
)
from tamc.model import Network, TimedAutomaton, Transition
from tamc.encoding.clocks import (
    some_copy_zero,
    encode_clock_guard,
    encode_clock_system,
    rewrite_reset_aware,
    weakened_invariant,
)
from tamc.encoding.exprs import cnt_term, encode_var_constraint
from tamc.encoding.vocab import NetworkVocabulary

_VARIANTS = ("general", "lorc")


def _initial_position(net: Network, vocab: NetworkVocabulary) -> list[Formula]:
    parts: list[Formula] = []
    for k, auto in enumerate(net.automata):
        parts.append(vocab.loc_is(k, auto.initial))
    for decl in net.all_variables:
        parts.append(IntCmp(Cnt(decl.name), "=", Num(decl.init)))
    for k, auto in enumerate(net.automata):
        inv = auto.location(auto.initial).invariant
        parts.append(encode_clock_guard(inv, vocab))
    return parts


def _idle_invariants(
    k: int, auto: TimedAutomaton, vocab: NetworkVocabulary
) -> list[Formula]:
    """An automaton that does not fire keeps its location's invariant, both
    on the elapsed clock values and on whatever other automata reset."""
    parts: list[Formula] = []
    for q in auto.locations:
        if not q.invariant:
            continue
        parts.append(
            implies(
                conj(vocab.loc_is(k, q.name), vocab.tr_null(k)),
                Next(
                    conj(
                        encode_clock_guard(q.invariant, vocab),
                        rewrite_reset_aware(q.invariant, "r1", vocab),
                    )
                ),
            )
        )
    return parts


def _endpoint_cases(
    k: int, auto: TimedAutomaton, t: Transition, vocab: NetworkVocabulary, variant: str
) -> Formula:
    """Invariant obligations at the firing front, by step kind.

    When the step keeps the old values at its instant, the instant still
    belongs to the source location: the source invariant holds on the
    elapsed values and the target invariant holds in closed form on the
    values after resets.  When it takes the new values, the two roles swap.
    The ``lorc`` variant hardwires the first kind and drops the edge flag.
    """
    inv_src = auto.location(t.src).invariant
    inv_dst = auto.location(t.dst).invariant
    old_at_front = conj(
        encode_clock_guard(inv_src, vocab),
        rewrite_reset_aware(weakened_invariant(inv_dst), "r2", vocab),
    )
    if variant == "lorc":
        return old_at_front
    new_at_front = conj(
        encode_clock_guard(weakened_invariant(inv_src), vocab),
        rewrite_reset_aware(inv_dst, "r2", vocab),
    )
    return disj(
        conj(old_at_front, vocab.edge_flag(k)),
        conj(new_at_front, neg(vocab.edge_flag(k))),
    )


def _firing_effects(
    k: int, auto: TimedAutomaton, vocab: NetworkVocabulary, variant: str
) -> list[Formula]:
    parts: list[Formula] = []
    for j, t in enumerate(auto.transitions):
        now = [vocab.loc_is(k, t.src), encode_var_constraint(t.var_guard)]
        for a in t.updates:
            now.append(IntCmp(Nxt(a.target), "=", cnt_term(a.value)))
        after = [
            vocab.loc_is(k, t.dst),
            encode_clock_guard(t.clock_guard, vocab),
        ]
        for x in t.resets:
            after.append(some_copy_zero(vocab, x))
        after.append(_endpoint_cases(k, auto, t, vocab, variant))
        parts.append(implies(vocab.tr_is(k, j), conj(*now, Next(conj(*after)))))
    return parts


def _moves_need_firings(
    k: int, auto: TimedAutomaton, vocab: NetworkVocabulary
) -> list[Formula]:
    parts: list[Formula] = []
    for q in auto.locations:
        for q2 in auto.locations:
            if q.name == q2.name:
                continue
            firings = [
                vocab.tr_is(k, j)
                for j, t in enumerate(auto.transitions)
                if t.src == q.name and t.dst == q2.name
            ]
            parts.append(
                implies(
                    conj(vocab.loc_is(k, q.name), Next(vocab.loc_is(k, q2.name))),
                    disj(*firings),
                )
            )
    return parts


def _resets_need_firings(net: Network, vocab: NetworkVocabulary) -> list[Formula]:
    parts: list[Formula] = []
    for x in vocab.clocks:
        resetters = [
            vocab.tr_is(k, j)
            for k, auto in enumerate(net.automata)
            for j, t in enumerate(auto.transitions)
            if x in t.resets
        ]
        parts.append(implies(Next(some_copy_zero(vocab, x)), disj(*resetters)))
    return parts


def _changes_need_firings(net: Network, vocab: NetworkVocabulary) -> list[Formula]:
    parts: list[Formula] = []
    for decl in net.all_variables:
        updaters = [
            vocab.tr_is(k, j)
            for k, auto in enumerate(net.automata)
            for j, t in enumerate(auto.transitions)
            if decl.name in t.updated_vars
        ]
        parts.append(
            implies(
                neg(IntCmp(Cnt(decl.name), "=", Nxt(decl.name))),
                disj(*updaters),
            )
        )
    return parts


def _range(name: str, lo: int, hi: int) -> Formula:
    return conj(
        IntCmp(Num(lo), "<=", Cnt(name)),
        IntCmp(Cnt(name), "<=", Num(hi)),
    )


def _domain_bounds(net: Network, vocab: NetworkVocabulary) -> list[Formula]:
    parts: list[Formula] = []
    for k, auto in enumerate(net.automata):
        parts.append(_range(vocab.loc(k), 0, len(auto.locations) - 1))
        parts.append(_range(vocab.tr(k), 0, vocab.null(k)))
    for x in vocab.clocks:
        parts.append(_range(vocab.sel(x), 0, 1))
    for decl in net.all_variables:
        parts.append(_range(decl.name, decl.lo, decl.hi))
    return parts


def encode_network(
    net: Network, vocab: NetworkVocabulary, variant: str = "general"
) -> Formula:
    """All runs of the network, as a formula over the vocabulary's symbols."""
    if variant not in _VARIANTS:
        msg = f"unknown encoding variant {variant!r}"
        raise ValueError(msg)
    stepped: list[Formula] = []
    for k, auto in enumerate(net.automata):
        stepped.extend(_idle_invariants(k, auto, vocab))
        stepped.extend(_firing_effects(k, auto, vocab, variant))
        stepped.extend(_moves_need_firings(k, auto, vocab))
    stepped.extend(_resets_need_firings(net, vocab))
    stepped.extend(_changes_need_firings(net, vocab))
    stepped.extend(_domain_bounds(net, vocab))
    body = conj(*stepped)
    return conj(
        encode_clock_system(vocab.clocks, vocab),
        *_initial_position(net, vocab),
        body if body == TRUE else Globally(body),
    )
