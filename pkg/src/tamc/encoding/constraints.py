"""Run-selection constraints: progress, synchronization and step kinds.

These conjuncts do not describe the network's step relation (that is
:mod:`tamc.encoding.network`); they restrict which infinite runs count.
All of them quantify over firings, so they reuse the recorded-firing
counters, and any obligation about the instant a firing happens at sits
one position after the recording, like the effects themselves.
"""

from __future__ import annotations

from tamc.cltloc import (
    Eventually,
    Formula,
    Globally,
    Next,
    TRUE,
    FALSE,
    conj,
    disj,
    iff,
    implies,
    neg,
)
from tamc.model import LIVENESS_MODES, Network, SemanticsConfig, TimedAutomaton
from tamc.encoding.clocks import encode_clock_guard
from tamc.encoding.exprs import encode_var_constraint
from tamc.encoding.vocab import NetworkVocabulary


def _globally(f: Formula) -> Formula:
    return f if f in (TRUE, FALSE) else Globally(f)


def _eventually(f: Formula) -> Formula:
    return f if f in (TRUE, FALSE) else Eventually(f)


def _next(f: Formula) -> Formula:
    return f if f in (TRUE, FALSE) else Next(f)


# -- progress ----------------------------------------------------------------


def _any_firing(k: int, auto: TimedAutomaton, vocab: NetworkVocabulary) -> Formula:
    return disj(*(vocab.tr_is(k, j) for j in range(len(auto.transitions))))


def _enabled_from(
    k: int, auto: TimedAutomaton, location: str, vocab: NetworkVocabulary
) -> Formula:
    return disj(
        *(
            conj(
                encode_clock_guard(t.clock_guard, vocab),
                encode_var_constraint(t.var_guard),
            )
            for t in auto.transitions
            if t.src == location
        )
    )


def _guard_progress(
    k: int, auto: TimedAutomaton, vocab: NetworkVocabulary
) -> Formula:
    return conj(
        *(
            implies(
                vocab.loc_is(k, q.name),
                _eventually(_enabled_from(k, auto, q.name, vocab)),
            )
            for q in auto.locations
        )
    )


def _liveness(net: Network, modes: frozenset, vocab: NetworkVocabulary) -> Formula:
    parts: list[Formula] = []
    for mode in LIVENESS_MODES:
        if mode not in modes:
            continue
        if mode == "strong-transition":
            for k, auto in enumerate(net.automata):
                parts.append(_globally(_eventually(_any_firing(k, auto, vocab))))
        elif mode == "weak-transition":
            parts.append(
                _globally(
                    _eventually(
                        disj(
                            *(
                                _any_firing(k, auto, vocab)
                                for k, auto in enumerate(net.automata)
                            )
                        )
                    )
                )
            )
        elif mode == "strong-guard":
            parts.append(
                _globally(
                    conj(
                        *(
                            _guard_progress(k, auto, vocab)
                            for k, auto in enumerate(net.automata)
                        )
                    )
                )
            )
        else:  # weak-guard
            parts.append(
                _globally(
                    disj(
                        *(
                            _guard_progress(k, auto, vocab)
                            for k, auto in enumerate(net.automata)
                        )
                    )
                )
            )
    return conj(*parts)


# -- synchronization ---------------------------------------------------------


def _sync_on(
    net: Network, vocab: NetworkVocabulary, k: int, channel: str, role: str
) -> Formula:
    auto = net.automata[k]
    return disj(
        *(
            vocab.tr_is(k, j)
            for j, t in enumerate(auto.transitions)
            if t.sync is not None and t.sync.channel == channel and t.sync.role == role
        )
    )


def _sync_on_but(
    net: Network, vocab: NetworkVocabulary, exempt: frozenset, channel: str, role: str
) -> Formula:
    return disj(
        *(
            _sync_on(net, vocab, g, channel, role)
            for g in range(len(net.automata))
            if g not in exempt
        )
    )


def _same_edge(vocab: NetworkVocabulary, k: int, h: int) -> Formula:
    return Next(iff(vocab.edge_flag(k), vocab.edge_flag(h)))


def _firings_on(net: Network, channel: str, role: str):
    for k, auto in enumerate(net.automata):
        for j, t in enumerate(auto.transitions):
            if t.sync is not None and t.sync.channel == channel and t.sync.role == role:
                yield k, j, t


def _channel_rules(
    net: Network, vocab: NetworkVocabulary, channel: str
) -> list[Formula]:
    """Exactly one sender/receiver pair, agreeing on the step kind."""
    parts: list[Formula] = []
    for k, j, _t in _firings_on(net, channel, "!"):
        partners = [
            conj(
                _sync_on(net, vocab, h, channel, "?"),
                neg(_sync_on_but(net, vocab, frozenset((k, h)), channel, "?")),
                _same_edge(vocab, k, h),
            )
            for h in range(len(net.automata))
            if h != k
        ]
        parts.append(implies(vocab.tr_is(k, j), disj(*partners)))
    for k, j, _t in _firings_on(net, channel, "?"):
        partners = [
            conj(
                _sync_on(net, vocab, h, channel, "!"),
                neg(_sync_on_but(net, vocab, frozenset((k, h)), channel, "!")),
            )
            for h in range(len(net.automata))
            if h != k
        ]
        parts.append(implies(vocab.tr_is(k, j), disj(*partners)))
    return parts


def _broadcast_receiver_case(
    net: Network, vocab: NetworkVocabulary, k: int, h: int, channel: str
) -> Formula:
    """Automaton h either receives with the sender's step kind, or has no
    enabled receiving transition at the firing front."""
    auto = net.automata[h]
    disabled = conj(
        *(
            disj(
                _next(neg(encode_clock_guard(t.clock_guard, vocab))),
                neg(encode_var_constraint(t.var_guard)),
                neg(vocab.loc_is(h, t.src)),
            )
            for t in auto.transitions
            if t.sync is not None and t.sync.channel == channel and t.sync.role == "@"
        )
    )
    return disj(
        conj(_sync_on(net, vocab, h, channel, "@"), _same_edge(vocab, k, h)),
        disabled,
    )


def _broadcast_rules(
    net: Network, vocab: NetworkVocabulary, channel: str
) -> list[Formula]:
    """One sender; every peer that could receive does, with the same kind."""
    parts: list[Formula] = []
    for k, j, _t in _firings_on(net, channel, "#"):
        parts.append(
            implies(
                vocab.tr_is(k, j),
                neg(_sync_on_but(net, vocab, frozenset((k,)), channel, "#")),
            )
        )
        parts.append(
            implies(
                vocab.tr_is(k, j),
                conj(
                    *(
                        _broadcast_receiver_case(net, vocab, k, h, channel)
                        for h in range(len(net.automata))
                        if h != k
                    )
                ),
            )
        )
    for k, j, _t in _firings_on(net, channel, "@"):
        parts.append(
            implies(
                vocab.tr_is(k, j),
                _sync_on_but(net, vocab, frozenset((k,)), channel, "#"),
            )
        )
    return parts


def _one_to_many_rules(
    net: Network, vocab: NetworkVocabulary, channel: str
) -> list[Formula]:
    """A unique sender with at least one receiver, step kinds unrelated."""
    parts: list[Formula] = []
    for k, j, _t in _firings_on(net, channel, "&"):
        parts.append(
            implies(
                vocab.tr_is(k, j),
                conj(
                    neg(_sync_on_but(net, vocab, frozenset((k,)), channel, "&")),
                    _sync_on_but(net, vocab, frozenset((k,)), channel, "*"),
                ),
            )
        )
    for k, j, _t in _firings_on(net, channel, "*"):
        parts.append(
            implies(
                vocab.tr_is(k, j),
                _sync_on_but(net, vocab, frozenset((k,)), channel, "&"),
            )
        )
    return parts


_FAMILY_RULES = {
    "channel": _channel_rules,
    "broadcast": _broadcast_rules,
    "one-to-many": _one_to_many_rules,
}


def _synchronization(net: Network, vocab: NetworkVocabulary) -> Formula:
    by_family: dict[str, set[str]] = {}
    for auto in net.automata:
        for t in auto.transitions:
            if t.sync is not None:
                by_family.setdefault(t.sync.family, set()).add(t.sync.channel)
    parts: list[Formula] = []
    for family in ("channel", "broadcast", "one-to-many"):
        if family not in by_family:
            continue
        rules: list[Formula] = []
        for channel in sorted(by_family[family]):
            rules.extend(_FAMILY_RULES[family](net, vocab, channel))
        parts.append(_globally(conj(*rules)))
    return conj(*parts)


# -- step kinds --------------------------------------------------------------


def _edge_restriction(net: Network, config: SemanticsConfig, vocab) -> Formula:
    if config.edges == "unrestricted":
        return TRUE
    flags = (vocab.edge_flag(k) for k in range(len(net.automata)))
    if config.edges == "closed-open":
        return _globally(conj(*flags))
    return _globally(conj(*(neg(f) for f in flags)))


def _edge_agreement(net: Network, vocab: NetworkVocabulary) -> Formula:
    """Simultaneous firings of different automata that write a common
    variable must use the same step kind, or the written value at their
    shared instant would be ambiguous."""
    parts: list[Formula] = []
    for k in range(len(net.automata)):
        for h in range(k + 1, len(net.automata)):
            for i, t1 in enumerate(net.automata[k].transitions):
                for j, t2 in enumerate(net.automata[h].transitions):
                    if t1.updated_vars & t2.updated_vars:
                        parts.append(
                            implies(
                                conj(vocab.tr_is(k, i), vocab.tr_is(h, j)),
                                _same_edge(vocab, k, h),
                            )
                        )
    return _globally(conj(*parts))


def encode_constraints(
    net: Network, config: SemanticsConfig, vocab: NetworkVocabulary
) -> Formula:
    """Progress, synchronization and step-kind selection for one run set."""
    return conj(
        _liveness(net, config.liveness, vocab),
        _synchronization(net, vocab),
        _edge_restriction(net, config, vocab),
        _edge_agreement(net, vocab),
    )
