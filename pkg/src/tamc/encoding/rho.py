"""From a validated lasso trace to a model of the encoded network.

The mapping drives the completeness half of the round-trip tests: every
run the step semantics accepts must satisfy the encoder's formula.  Most
tracks read off the trace directly — position h carries the configuration
entering slice h, the firing recorded there, and the observation booleans
of the slice and of its opening front.

The loop needs care.  An interpretation stores one value per position, so
the loop head must look the same whether it is entered from the prefix or
from the seam.  Two mismatches can arise:

* the move vectors entering the head the first time and at the seam can
  differ (always the case when the trace loops to position 0, which an
  interpretation cannot do anyway).  Unrolling one lap into the prefix
  makes both entries lap boundaries, where determinism plus loop closure
  make every discrete track agree;
* each reset of a clock inside the lap flips its copy selector, so a lap
  with an odd number of reset fronts returns with the selectors swapped.
  Emitting two laps as the loop restores the parity.

The first repair is applied unconditionally, the second when the parity
calls for it; the seam is then checked explicitly, one simulated position
past the end.  A residual mismatch raises — it would mean the mapping
itself is wrong, not the trace.
"""

from __future__ import annotations

from fractions import Fraction

from tamc.cltloc import LassoInterpretation
from tamc.model import eval_var_constraint
from tamc.oracle.signals import State
from tamc.oracle.traces import (
    EDGE_CLOSED_OPEN,
    Config,
    Trace,
    TracePosition,
    apply_position,
    initial_config,
    instant_observation,
    observation,
)
from tamc.encoding.vocab import NetworkVocabulary, comparison_key


def _zeroed_by(net, pos: TracePosition) -> set[str]:
    out: set[str] = set()
    for k, mv in enumerate(pos.moves):
        if mv is not None:
            out.update(net.automata[k].transitions[mv.transition].resets)
    return out


def _atom_truth(vocab: NetworkVocabulary, state: State) -> dict[str, bool]:
    out: dict[str, bool] = {}
    for p in vocab.atoms.props:
        out[p] = state.has(p)
    for a in vocab.atoms.comparisons:
        out[comparison_key(a)] = eval_var_constraint(a, state.variables)
    return out


def lasso_interpretation(vocab: NetworkVocabulary, trace: Trace) -> LassoInterpretation:
    """Interpret the trace as a model over the vocabulary's symbols.

    The trace must be a valid lasso over ``vocab.net``; traces without a
    loop have no ultimately-periodic counterpart here.
    """
    if trace.loop is None:
        msg = "only lasso traces map to interpretations; this one has no loop"
        raise ValueError(msg)
    net = vocab.net
    m = len(trace.positions)
    lap = list(trace.positions[trace.loop :])

    emitted = list(trace.positions) + lap
    head = m
    odd_parity = any(
        sum(1 for pos in lap if x in _zeroed_by(net, pos)) % 2 for x in vocab.clocks
    )
    if odd_parity:
        emitted += lap
    n = len(emitted)

    configs: list[Config] = [initial_config(net)]
    for pos in emitted:
        _, after = apply_position(net, configs[-1], pos)
        configs.append(after)

    # clock copies, simulated one position past the end for the seam check:
    # the idle copy takes the zero at a reset front, the selector follows
    # one position later
    c0s: dict[str, list[Fraction]] = {x: [Fraction(0)] for x in vocab.clocks}
    c1s: dict[str, list[Fraction]] = {x: [Fraction(1)] for x in vocab.clocks}
    sels: dict[str, list[int]] = {x: [0] for x in vocab.clocks}
    fresh: dict[str, bool] = {x: False for x in vocab.clocks}
    for h in range(1, n + 1):
        pos = emitted[h - 1]
        zeroed = _zeroed_by(net, pos)
        for x in vocab.clocks:
            s = (1 - sels[x][-1]) if fresh[x] else sels[x][-1]
            sels[x].append(s)
            c0s[x].append(c0s[x][-1] + pos.delay)
            c1s[x].append(c1s[x][-1] + pos.delay)
            if x in zeroed:
                (c1s if s == 0 else c0s)[x][-1] = Fraction(0)
            fresh[x] = x in zeroed

    # observation booleans: the slice value and the front value, with one
    # extra front at n for the seam check
    interiors = [_atom_truth(vocab, observation(net, configs[h])) for h in range(n)]
    fronts = [_atom_truth(vocab, observation(net, configs[0]))]
    for h in range(1, n + 1):
        state = instant_observation(net, configs[h - 1], configs[h], emitted[h - 1])
        fronts.append(_atom_truth(vocab, state))

    _check_seam(vocab, emitted, configs, sels, c0s, c1s, fronts, head, n)

    booleans: dict[str, list[bool]] = {}
    counters: dict[str, list[int]] = {}
    clocks: dict[str, list[Fraction]] = {}
    for k, auto in enumerate(net.automata):
        counters[vocab.loc(k)] = [
            auto.location_index(configs[h].locs[k]) for h in range(n)
        ]
        counters[vocab.tr(k)] = [
            emitted[h].moves[k].transition
            if emitted[h].moves[k] is not None
            else vocab.null(k)
            for h in range(n)
        ]
        booleans[vocab.edge(k)] = [True] + [
            emitted[h - 1].moves[k] is None
            or emitted[h - 1].moves[k].edge == EDGE_CLOSED_OPEN
            for h in range(1, n)
        ]
    for decl in net.all_variables:
        counters[decl.name] = [configs[h].vars[decl.name] for h in range(n)]
    for x in vocab.clocks:
        clocks[vocab.c0(x)] = c0s[x][:n]
        clocks[vocab.c1(x)] = c1s[x][:n]
        counters[vocab.sel(x)] = sels[x][:n]
    for key in vocab.atoms.keys():
        booleans[vocab.fst(key)] = [fronts[h][key] for h in range(n)]
        booleans[vocab.rst(key)] = [interiors[h][key] for h in range(n)]

    return LassoInterpretation(
        bound=n - 1,
        loop=head,
        delays=tuple(pos.delay for pos in emitted),
        booleans=booleans,
        counters=counters,
        clocks=clocks,
    )


def _check_seam(vocab, emitted, configs, sels, c0s, c1s, fronts, head, n) -> None:
    """The wrap-around must reproduce the head position exactly on every
    discrete track; a mismatch is a bug in the construction above."""
    problems = []
    if configs[n].locs != configs[head].locs:
        problems.append("locations do not close")
    if configs[n].vars != configs[head].vars:
        problems.append("variable values do not close")
    if emitted[n - 1].moves != emitted[head - 1].moves:
        problems.append("entering moves differ")
    for x in vocab.clocks:
        if sels[x][n] != sels[x][head]:
            problems.append(f"selector of {x} does not close")
        for vec in (c0s[x], c1s[x]):
            if (vec[n] == 0) != (vec[head] == 0):
                problems.append(f"reset pattern of {x} does not close")
                break
    if fronts[n] != fronts[head]:
        problems.append("front observations do not close")
    if problems:
        msg = "loop seam mismatch: " + "; ".join(problems)
        raise RuntimeError(msg)
