"""Compilation of automaton networks into temporal formulas over clock pairs.

The subpackage turns a :class:`~tamc.model.Network`, a
:class:`~tamc.model.SemanticsConfig` and the property's atom inventory into
a single :mod:`tamc.cltloc` formula whose lasso models are exactly the
selected runs of the network, paired with the first/rest atoms that sample
the induced piecewise-constant signal.
"""

from tamc.encoding.clocks import (
    encode_clock_atom,
    encode_clock_guard,
    encode_clock_system,
    encode_weak_guard,
    rewrite_reset_aware,
    weakened_invariant,
)
from tamc.encoding.constraints import encode_constraints
from tamc.encoding.network import encode_network
from tamc.encoding.rho import lasso_interpretation
from tamc.encoding.signals import encode_signal_binding
from tamc.encoding.system import EncoderOutput, encode_system
from tamc.encoding.vocab import (
    AtomInventory,
    ClockPair,
    NetworkVocabulary,
    build_vocabulary,
)

__all__ = [
    "AtomInventory",
    "ClockPair",
    "EncoderOutput",
    "NetworkVocabulary",
    "build_vocabulary",
    "encode_clock_atom",
    "encode_clock_guard",
    "encode_clock_system",
    "encode_constraints",
    "encode_network",
    "encode_signal_binding",
    "encode_system",
    "encode_weak_guard",
    "lasso_interpretation",
    "rewrite_reset_aware",
    "weakened_invariant",
]
