"""Assembly of the complete formula handed to the bounded search."""

from __future__ import annotations

from dataclasses import dataclass

from tamc.cltloc import Formula, conj
from tamc.model import (
    ClockAtom,
    ClockLit,
    Location,
    Network,
    SemanticsConfig,
    TimedAutomaton,
    Transition,
    validate_network,
)
from tamc.encoding.constraints import encode_constraints
from tamc.encoding.network import encode_network
from tamc.encoding.signals import encode_signal_binding
from tamc.encoding.vocab import AtomInventory, NetworkVocabulary, build_vocabulary


@dataclass(frozen=True)
class EncoderOutput:
    """The formula plus everything needed to read its models back.

    ``vocabulary.net`` is the network the formula actually describes; with
    the time-progress guard enabled it has one automaton more than the
    network handed in, and decoded runs must be checked against it.
    """

    formula: Formula
    vocabulary: NetworkVocabulary
    symbols: dict[str, tuple]
    config: SemanticsConfig

    @property
    def network(self) -> Network:
        return self.vocabulary.net


def _fresh(base: str, taken: set[str]) -> str:
    name = base
    i = 2
    while name in taken:
        name = f"{base}{i}"
        i += 1
    return name


def _with_progress_ticker(net: Network) -> Network:
    """Add an automaton that must reset a fresh clock whenever it reaches 1,
    so any repeating behavior advances time by at least one unit per lap."""
    name = _fresh("ticker", {a.name for a in net.automata})
    z = _fresh("z", set(net.all_clocks))
    ticker = TimedAutomaton(
        name=name,
        locations=(Location("loop", invariant=(ClockLit(ClockAtom(z, "<=", 1)),)),),
        initial="loop",
        transitions=(
            Transition(
                "loop",
                "loop",
                clock_guard=(ClockLit(ClockAtom(z, "=", 1)),),
                resets=(z,),
            ),
        ),
        clocks=(z,),
    )
    return Network(
        automata=net.automata + (ticker,),
        clocks=net.clocks,
        variables=net.variables,
        name=net.name,
    )


def encode_system(
    net: Network, config: SemanticsConfig, atoms: AtomInventory | None = None
) -> EncoderOutput:
    """Compile the network under the given semantics into one formula."""
    if config.encoding == "lorc" and config.edges != "closed-open":
        msg = (
            "the right-closed/left-open encoding fixes every step to the"
            f" closed-open kind; it cannot run with edges={config.edges!r}"
        )
        raise ValueError(msg)
    inventory = atoms if atoms is not None else AtomInventory()
    target = _with_progress_ticker(net) if config.non_zeno else net
    validate_network(target)
    vocab = build_vocabulary(target, inventory)
    formula = conj(
        encode_network(target, vocab, config.encoding),
        encode_constraints(target, config, vocab),
        encode_signal_binding(target, inventory, vocab, config.encoding),
    )
    return EncoderOutput(
        formula=formula,
        vocabulary=vocab,
        symbols=vocab.symbols(),
        config=config,
    )
