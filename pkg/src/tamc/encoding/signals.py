"""Binding of the property's atoms to the runs of the network.

The induced signal of a run is piecewise constant between fronts, so each
observed atom β gets two booleans: ``rst[β]`` says β holds on the open
slice starting at the current front, ``fst[β]`` says β holds at the
current front itself.  Slices take their value from the current position
(locations, variable values).  Fronts are where the step kinds matter: a
firing whose step keeps the old values leaves its instant in the source
location with unchanged variables, the other kind puts the instant in the
target location with the written values; idle automata hold their slice
value through the front.

The right-closed/left-open variant needs no case split — every instant
belongs to the closing slice — which is why it pairs with the smaller
network encoding.
"""

from __future__ import annotations

from itertools import combinations

from tamc.cltloc import (
    BoolVar,
    Formula,
    Globally,
    Next,
    TRUE,
    FALSE,
    conj,
    disj,
    iff,
    neg,
)
from tamc.model import Network, VarAtom, var_constraint_vars
from tamc.encoding.exprs import encode_var_constraint
from tamc.encoding.vocab import AtomInventory, NetworkVocabulary, comparison_key


def _globally(f: Formula) -> Formula:
    return f if f in (TRUE, FALSE) else Globally(f)


def _check_comparisons(net: Network, atoms: AtomInventory) -> None:
    declared = {d.name for d in net.all_variables}
    for a in atoms.comparisons:
        for name in sorted(var_constraint_vars(a)):
            if name not in declared:
                msg = (
                    f"atom {comparison_key(a)!r} references unknown"
                    f" variable {name!r}"
                )
                raise KeyError(msg)


def _holders(net: Network, vocab: NetworkVocabulary, prop: str) -> Formula:
    """Some automaton currently occupies a location labeled with the
    proposition.  An unlabeled proposition gives the empty disjunction, so
    it is bound to false everywhere rather than rejected."""
    return disj(
        *(
            vocab.loc_is(k, q.name)
            for k, auto in enumerate(net.automata)
            for q in auto.locations
            if prop in q.labels
        )
    )


def _initial_holders(net: Network, vocab: NetworkVocabulary, prop: str) -> Formula:
    return disj(
        *(
            vocab.loc_is(k, auto.initial)
            for k, auto in enumerate(net.automata)
            if prop in auto.location(auto.initial).labels
        )
    )


def _prop_front(net: Network, vocab: NetworkVocabulary, prop: str) -> Formula:
    """The proposition holds at the next front: some automaton whose
    location carries it either stays put, or leaves it by an old-values
    step, or arrives in it by a new-values step."""
    cases: list[Formula] = []
    for k, auto in enumerate(net.automata):
        for q in auto.locations:
            if prop not in q.labels:
                continue
            cases.append(
                conj(
                    vocab.loc_is(k, q.name),
                    disj(
                        vocab.tr_null(k),
                        conj(neg(vocab.tr_null(k)), Next(vocab.edge_flag(k))),
                    ),
                )
            )
            cases.append(
                conj(
                    Next(vocab.loc_is(k, q.name)),
                    neg(vocab.tr_null(k)),
                    Next(neg(vocab.edge_flag(k))),
                )
            )
    return disj(*cases)


def _written_at_front(net: Network, vocab: NetworkVocabulary, name: str) -> Formula:
    """The variable shows its new value already at the next front, because
    a writer fires with a new-values step."""
    return disj(
        *(
            conj(vocab.tr_is(k, j), Next(neg(vocab.edge_flag(k))))
            for k, auto in enumerate(net.automata)
            for j, t in enumerate(auto.transitions)
            if name in t.updated_vars
        )
    )


def _comparison_front(
    net: Network, vocab: NetworkVocabulary, atom: VarAtom
) -> Formula:
    """The atom's value at the next front: each variable independently
    shows its old or new value there, so split on which subset is new."""
    names = sorted(var_constraint_vars(atom))
    written = {n: _written_at_front(net, vocab, n) for n in names}
    cases: list[Formula] = []
    for r in range(len(names) + 1):
        for take in combinations(names, r):
            taken = frozenset(take)
            picks = [
                written[n] if n in taken else neg(written[n]) for n in names
            ]
            cases.append(conj(*picks, encode_var_constraint(atom, primed=taken)))
    return disj(*cases)


def encode_signal_binding(
    net: Network,
    atoms: AtomInventory,
    vocab: NetworkVocabulary,
    variant: str = "general",
) -> Formula:
    """Tie every fst/rst boolean to the run, at the origin and at fronts."""
    _check_comparisons(net, atoms)
    origin: list[Formula] = []
    stepped: list[Formula] = []
    for p in atoms.props:
        origin.append(iff(BoolVar(vocab.fst(p)), _initial_holders(net, vocab, p)))
        stepped.append(iff(BoolVar(vocab.rst(p)), _holders(net, vocab, p)))
    for a in atoms.comparisons:
        key = comparison_key(a)
        origin.append(iff(BoolVar(vocab.fst(key)), encode_var_constraint(a)))
        stepped.append(iff(BoolVar(vocab.rst(key)), encode_var_constraint(a)))
    if variant == "lorc":
        for p in atoms.props:
            stepped.append(
                iff(Next(BoolVar(vocab.fst(p))), _holders(net, vocab, p))
            )
        for a in atoms.comparisons:
            stepped.append(
                iff(Next(BoolVar(vocab.fst(comparison_key(a)))), encode_var_constraint(a))
            )
    else:
        for p in atoms.props:
            stepped.append(
                iff(Next(BoolVar(vocab.fst(p))), _prop_front(net, vocab, p))
            )
        for a in atoms.comparisons:
            stepped.append(
                iff(
                    Next(BoolVar(vocab.fst(comparison_key(a)))),
                    _comparison_front(net, vocab, a),
                )
            )
    return conj(*origin, _globally(conj(*stepped)))
