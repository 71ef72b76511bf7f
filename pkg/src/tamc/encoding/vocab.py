"""Symbol universe shared by the encoder stages.

Every declared object of the network gets exactly one formula-level name:

========================  =====================================
object                    symbol
========================  =====================================
automaton k location      integer counter ``loc[<automaton>]``
automaton k firing        integer counter ``tr[<automaton>]``
automaton k edge kind     boolean ``edge[<automaton>]``
integer variable n        integer counter ``n`` (same name)
clock x                   clocks ``c0[x]``, ``c1[x]`` and the
                          selector counter ``sel[x]``
property atom β           booleans ``fst[<β>]`` and ``rst[<β>]``
========================  =====================================

``tr[k]`` ranges over transition indices plus one sentinel value (the
number of transitions) meaning "no transition fired"; a firing recorded at
position i takes effect at position i+1.  ``edge[k]`` is true when the
recorded firing keeps the old values at its instant (right-closed step)
and false when it is the left-closed kind.

A network with no clocks at all still needs one real-valued track so that
models determine the delays; in that case a synthetic clock is added to
the vocabulary only — no transition resets it and no guard mentions it.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from tamc.cltloc import BoolVar, Cnt, IntCmp, Num
from tamc.dsl import print_var_constraint
from tamc.mitl import Comparison, MitlFormula, Prop
from tamc.model import Network, VarAtom, var_constraint_vars


def comparison_key(atom: VarAtom) -> str:
    """Canonical spelling of an arithmetic atom, used in fst/rst names."""
    return print_var_constraint(atom)


@dataclass(frozen=True)
class ClockPair:
    """The three formula symbols standing for one network clock."""

    clock: str
    c0: str
    c1: str
    sel: str


@dataclass(frozen=True)
class AtomInventory:
    """The propositions and arithmetic atoms a property observes."""

    props: tuple[str, ...] = ()
    comparisons: tuple[VarAtom, ...] = ()

    @classmethod
    def from_property(cls, phi: MitlFormula) -> "AtomInventory":
        props: dict[str, None] = {}
        comparisons: dict[VarAtom, None] = {}
        stack = [phi]
        while stack:
            f = stack.pop()
            if isinstance(f, Prop):
                props.setdefault(f.name)
            elif isinstance(f, Comparison):
                comparisons.setdefault(f.atom)
            else:
                for attr in ("arg", "left", "right"):
                    child = getattr(f, attr, None)
                    if child is not None:
                        stack.append(child)
                for child in getattr(f, "items", ()):
                    stack.append(child)
        return cls(tuple(props), tuple(comparisons))

    def keys(self) -> tuple[str, ...]:
        return self.props + tuple(comparison_key(a) for a in self.comparisons)


_SYNTHETIC_CLOCK = "tick"


@dataclass(frozen=True)
class NetworkVocabulary:
    net: Network
    atoms: AtomInventory = field(default_factory=AtomInventory)
    synthetic_clock: str | None = None

    # -- clocks ------------------------------------------------------------

    @property
    def clocks(self) -> tuple[str, ...]:
        declared = self.net.all_clocks
        if self.synthetic_clock is not None:
            return declared + (self.synthetic_clock,)
        return declared

    def c0(self, clock: str) -> str:
        self._check_clock(clock)
        return f"c0[{clock}]"

    def c1(self, clock: str) -> str:
        self._check_clock(clock)
        return f"c1[{clock}]"

    def sel(self, clock: str) -> str:
        self._check_clock(clock)
        return f"sel[{clock}]"

    def pair(self, clock: str) -> ClockPair:
        return ClockPair(clock, self.c0(clock), self.c1(clock), self.sel(clock))

    def _check_clock(self, clock: str) -> None:
        if clock not in self.clocks:
            msg = f"unknown clock {clock!r}"
            raise KeyError(msg)

    # -- automata ----------------------------------------------------------

    def loc(self, k: int) -> str:
        return f"loc[{self.net.automata[k].name}]"

    def tr(self, k: int) -> str:
        return f"tr[{self.net.automata[k].name}]"

    def edge(self, k: int) -> str:
        return f"edge[{self.net.automata[k].name}]"

    def edge_flag(self, k: int) -> BoolVar:
        return BoolVar(self.edge(k))

    def null(self, k: int) -> int:
        """The tr[k] value meaning "no transition fired"."""
        return len(self.net.automata[k].transitions)

    def loc_is(self, k: int, location: str) -> IntCmp:
        idx = self.net.automata[k].location_index(location)
        return IntCmp(Cnt(self.loc(k)), "=", Num(idx))

    def tr_is(self, k: int, t_index: int) -> IntCmp:
        return IntCmp(Cnt(self.tr(k)), "=", Num(t_index))

    def tr_null(self, k: int) -> IntCmp:
        return self.tr_is(k, self.null(k))

    # -- signal atoms --------------------------------------------------------

    def fst(self, key: str) -> str:
        return f"fst[{key}]"

    def rst(self, key: str) -> str:
        return f"rst[{key}]"

    # -- decoding support ----------------------------------------------------

    def symbols(self) -> dict[str, tuple]:
        """Formula-level name -> (kind, *details), for model decoding."""
        out: dict[str, tuple] = {}
        for k, auto in enumerate(self.net.automata):
            out[self.loc(k)] = ("location", auto.name)
            out[self.tr(k)] = ("firing", auto.name)
            out[self.edge(k)] = ("edge", auto.name)
        for decl in self.net.all_variables:
            out[decl.name] = ("variable", decl.name)
        for x in self.clocks:
            out[self.c0(x)] = ("clock-copy", x, 0)
            out[self.c1(x)] = ("clock-copy", x, 1)
            out[self.sel(x)] = ("clock-selector", x)
        for key in self.atoms.keys():
            out[self.fst(key)] = ("first", key)
            out[self.rst(key)] = ("rest", key)
        return out


def build_vocabulary(net: Network, atoms: AtomInventory | None = None) -> NetworkVocabulary:
    """Name every declared object; checks comparison atoms against declarations."""
    inventory = atoms if atoms is not None else AtomInventory()
    declared = {d.name for d in net.all_variables}
    for atom in inventory.comparisons:
        for name in sorted(var_constraint_vars(atom)):
            if name not in declared:
                msg = f"atom {comparison_key(atom)!r} references unknown variable {name!r}"
                raise KeyError(msg)
    synthetic = _SYNTHETIC_CLOCK if not net.all_clocks else None
    return NetworkVocabulary(net, inventory, synthetic)
