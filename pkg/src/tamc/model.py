"""Core model types for networks of timed automata with integer variables.

Clock constraints are kept in a small kernel ({<, <=, =} plus negation and
conjunction); the surface syntax desugars richer comparisons into it.  Guards
over clocks must be convex conjunctions once stored on a transition, so
disjunctive surface guards are split via :func:`normalize_guard` at load time.
All clock arithmetic uses exact rationals.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Optional, Union

Rational = Union[int, Fraction]


# ---------------------------------------------------------------------------
# clock constraints
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ClockAtom:
    """Atomic clock comparison ``clock op bound`` with op in {'<', '<=', '='}."""

    clock: str
    op: str
    bound: int

    def __post_init__(self) -> None:
        if self.op not in ("<", "<=", "="):
            msg = f"clock atom operator must be '<', '<=' or '=', got {self.op!r}"
            raise ValueError(msg)
        if self.bound < 0:
            msg = f"clock bounds must be non-negative, got {self.bound}"
            raise ValueError(msg)


@dataclass(frozen=True)
class ClockLit:
    """A possibly negated clock atom."""

    atom: ClockAtom
    negated: bool = False


# A stored (convex) guard or invariant: a conjunction of literals.
Guard = tuple[ClockLit, ...]
TRUE_GUARD: Guard = ()


@dataclass(frozen=True)
class CNot:
    arg: "ClockExpr"


@dataclass(frozen=True)
class CAnd:
    items: tuple["ClockExpr", ...]


@dataclass(frozen=True)
class COr:
    items: tuple["ClockExpr", ...]


ClockExpr = Union[ClockAtom, CNot, CAnd, COr]


def guard_expr(g: Guard) -> ClockExpr:
    """View a stored guard as a general clock expression."""
    return CAnd(tuple(CNot(l.atom) if l.negated else l.atom for l in g))


def _eval_atom_weak(atom: ClockAtom, value: Fraction) -> bool:
    if atom.op in ("<", "<="):
        # the closures of x<d and x<=d both contain exactly [0, d]
        return value <= atom.bound
    # equalities never hold weakly
    return False


def _eval_atom_strong(atom: ClockAtom, value: Fraction) -> bool:
    if atom.op == "<":
        return value < atom.bound
    if atom.op == "<=":
        return value <= atom.bound
    return value == atom.bound


def eval_clock_lit(lit: ClockLit, v: Mapping[str, Rational], mode: str = "strong") -> bool:
    value = Fraction(v[lit.atom.clock])
    if mode == "strong":
        result = _eval_atom_strong(lit.atom, value)
        return not result if lit.negated else result
    if mode != "weak":
        msg = f"unknown satisfaction mode {mode!r}"
        raise ValueError(msg)
    if lit.negated:
        if lit.atom.op == "=":
            # the closure of an inequation covers everything
            return True
        # the closures of x>d and x>=d both contain exactly [d, oo)
        return value >= lit.atom.bound
    return _eval_atom_weak(lit.atom, value)


def eval_clock_constraint(
    gamma: Union[Guard, ClockExpr], v: Mapping[str, Rational], mode: str = "strong"
) -> bool:
    """Evaluate a clock constraint under strong or weak satisfaction.

    Weak satisfaction closes strict comparisons, treats equalities as
    unsatisfiable and negated equalities as vacuous; it is only defined on
    negation-normal conjunctions, so disjunctions are rejected in weak mode.
    """
    if isinstance(gamma, tuple):
        return all(eval_clock_lit(lit, v, mode) for lit in gamma)
    if isinstance(gamma, ClockAtom):
        return eval_clock_lit(ClockLit(gamma), v, mode)
    if isinstance(gamma, CNot):
        if isinstance(gamma.arg, ClockAtom):
            return eval_clock_lit(ClockLit(gamma.arg, negated=True), v, mode)
        if mode == "weak":
            msg = "weak satisfaction is only defined for literals and conjunctions"
            raise ValueError(msg)
        return not eval_clock_constraint(gamma.arg, v, mode)
    if isinstance(gamma, CAnd):
        return all(eval_clock_constraint(i, v, mode) for i in gamma.items)
    if isinstance(gamma, COr):
        if mode == "weak":
            msg = "weak satisfaction is only defined for literals and conjunctions"
            raise ValueError(msg)
        return any(eval_clock_constraint(i, v, mode) for i in gamma.items)
    msg = f"not a clock constraint: {gamma!r}"
    raise TypeError(msg)


def normalize_guard(gamma: Union[Guard, ClockExpr]) -> list[Guard]:
    """Split a clock constraint into an ordered list of disjoint convex guards.

    Negated conjunctions expand as a decision list (¬A, then A∧¬B), negated
    equalities case-split into the strictly-below and strictly-above cones, and
    disjunctions are disjointified in order.  The union of the returned guards
    is equivalent to the input, and no valuation satisfies two of them.
    """
    if isinstance(gamma, tuple):
        gamma = guard_expr(gamma)
    return _norm(gamma, positive=True)


def _cross(left: list[Guard], right: list[Guard]) -> list[Guard]:
    return [a + b for a in left for b in right]


def _norm(e: ClockExpr, positive: bool) -> list[Guard]:
    if isinstance(e, ClockAtom):
        if positive:
            return [(ClockLit(e),)]
        if e.op in ("<", "<="):
            return [(ClockLit(e, negated=True),)]
        # x != d splits into x < d and x > d (the latter as ¬< ∧ ¬=)
        below = ClockAtom(e.clock, "<", e.bound)
        return [
            (ClockLit(below),),
            (ClockLit(below, negated=True), ClockLit(e, negated=True)),
        ]
    if isinstance(e, CNot):
        return _norm(e.arg, not positive)
    if isinstance(e, CAnd) and positive or isinstance(e, COr) and not positive:
        items = e.items
        out: list[Guard] = [TRUE_GUARD]
        for item in items:
            out = _cross(out, _norm(item, positive))
        return out
    if isinstance(e, (CAnd, COr)):
        # negated conjunction / positive disjunction: ordered disjoint split
        items = e.items
        out = []
        prefix: list[Guard] = [TRUE_GUARD]
        for item in items:
            out.extend(_cross(prefix, _norm(item, positive)))
            prefix = _cross(prefix, _norm(item, not positive))
        return out
    msg = f"not a clock constraint: {e!r}"
    raise TypeError(msg)


# ---------------------------------------------------------------------------
# integer expressions and variable constraints
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class IntConst:
    value: int


@dataclass(frozen=True)
class IntVar:
    name: str


@dataclass(frozen=True)
class IntAdd:
    left: "IntExpr"
    right: "IntExpr"


@dataclass(frozen=True)
class IntSub:
    left: "IntExpr"
    right: "IntExpr"


IntExpr = Union[IntConst, IntVar, IntAdd, IntSub]


def eval_int_expr(e: IntExpr, v: Mapping[str, int]) -> int:
    if isinstance(e, IntConst):
        return e.value
    if isinstance(e, IntVar):
        return v[e.name]
    if isinstance(e, IntAdd):
        return eval_int_expr(e.left, v) + eval_int_expr(e.right, v)
    if isinstance(e, IntSub):
        return eval_int_expr(e.left, v) - eval_int_expr(e.right, v)
    msg = f"not an integer expression: {e!r}"
    raise TypeError(msg)


def int_expr_vars(e: IntExpr) -> set[str]:
    if isinstance(e, IntConst):
        return set()
    if isinstance(e, IntVar):
        return {e.name}
    if isinstance(e, (IntAdd, IntSub)):
        return int_expr_vars(e.left) | int_expr_vars(e.right)
    msg = f"not an integer expression: {e!r}"
    raise TypeError(msg)


@dataclass(frozen=True)
class VarAtom:
    """Comparison ``lhs op rhs`` over integer expressions, op in {'<', '='}."""

    lhs: IntExpr
    op: str
    rhs: IntExpr

    def __post_init__(self) -> None:
        if self.op not in ("<", "="):
            msg = f"variable atom operator must be '<' or '=', got {self.op!r}"
            raise ValueError(msg)


@dataclass(frozen=True)
class VNot:
    arg: "VarConstraint"


@dataclass(frozen=True)
class VAnd:
    items: tuple["VarConstraint", ...]


@dataclass(frozen=True)
class VOr:
    items: tuple["VarConstraint", ...]


VarConstraint = Union[VarAtom, VNot, VAnd, VOr]
VAR_TRUE: VarConstraint = VAnd(())


def eval_var_constraint(xi: VarConstraint, v: Mapping[str, int]) -> bool:
    if isinstance(xi, VarAtom):
        left = eval_int_expr(xi.lhs, v)
        right = eval_int_expr(xi.rhs, v)
        return left < right if xi.op == "<" else left == right
    if isinstance(xi, VNot):
        return not eval_var_constraint(xi.arg, v)
    if isinstance(xi, VAnd):
        return all(eval_var_constraint(i, v) for i in xi.items)
    if isinstance(xi, VOr):
        return any(eval_var_constraint(i, v) for i in xi.items)
    msg = f"not a variable constraint: {xi!r}"
    raise TypeError(msg)


def var_constraint_vars(xi: VarConstraint) -> set[str]:
    if isinstance(xi, VarAtom):
        return int_expr_vars(xi.lhs) | int_expr_vars(xi.rhs)
    if isinstance(xi, VNot):
        return var_constraint_vars(xi.arg)
    if isinstance(xi, (VAnd, VOr)):
        out: set[str] = set()
        for item in xi.items:
            out |= var_constraint_vars(item)
        return out
    msg = f"not a variable constraint: {xi!r}"
    raise TypeError(msg)


# ---------------------------------------------------------------------------
# assignments
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Assignment:
    target: str
    value: IntExpr


def apply_assignments(
    assignments: Iterable[Assignment], v: Mapping[str, int]
) -> Optional[dict[str, int]]:
    """Apply simultaneous assignments, evaluating right sides in the old
    valuation.  Returns None when one target receives two distinct values."""
    new = dict(v)
    written: dict[str, int] = {}
    for a in assignments:
        val = eval_int_expr(a.value, v)
        if a.target in written and written[a.target] != val:
            return None
        written[a.target] = val
        new[a.target] = val
    return new


# ---------------------------------------------------------------------------
# automata and networks
# ---------------------------------------------------------------------------

SYNC_ROLES = "!?#@&*"
# role pairs per family: channel (!, ?), broadcast (#, @), one-to-many (&, *)
FAMILY_OF_ROLE = {
    "!": "channel",
    "?": "channel",
    "#": "broadcast",
    "@": "broadcast",
    "&": "one-to-many",
    "*": "one-to-many",
}


@dataclass(frozen=True)
class Sync:
    channel: str
    role: str

    def __post_init__(self) -> None:
        if self.role not in SYNC_ROLES:
            msg = f"unknown synchronization role {self.role!r}"
            raise ValueError(msg)

    @property
    def family(self) -> str:
        return FAMILY_OF_ROLE[self.role]


@dataclass(frozen=True)
class Transition:
    src: str
    dst: str
    clock_guard: Guard = TRUE_GUARD
    var_guard: VarConstraint = VAR_TRUE
    sync: Optional[Sync] = None
    resets: tuple[str, ...] = ()
    updates: tuple[Assignment, ...] = ()

    @property
    def updated_vars(self) -> frozenset[str]:
        return frozenset(a.target for a in self.updates)


@dataclass(frozen=True)
class Location:
    name: str
    invariant: Guard = TRUE_GUARD
    labels: tuple[str, ...] = ()


@dataclass(frozen=True)
class VarDecl:
    name: str
    lo: int
    hi: int
    init: int

    def __post_init__(self) -> None:
        if self.lo > self.hi:
            msg = f"empty domain [{self.lo}, {self.hi}] for variable {self.name}"
            raise ValueError(msg)


@dataclass(frozen=True)
class TimedAutomaton:
    name: str
    locations: tuple[Location, ...]
    initial: str
    transitions: tuple[Transition, ...] = ()
    clocks: tuple[str, ...] = ()
    variables: tuple[VarDecl, ...] = ()

    def location(self, name: str) -> Location:
        for loc in self.locations:
            if loc.name == name:
                return loc
        msg = f"automaton {self.name} has no location {name!r}"
        raise KeyError(msg)

    def location_index(self, name: str) -> int:
        for i, loc in enumerate(self.locations):
            if loc.name == name:
                return i
        msg = f"automaton {self.name} has no location {name!r}"
        raise KeyError(msg)

    def transitions_from(self, src: str) -> list[Transition]:
        return [t for t in self.transitions if t.src == src]


@dataclass(frozen=True)
class Network:
    automata: tuple[TimedAutomaton, ...]
    clocks: tuple[str, ...] = ()
    variables: tuple[VarDecl, ...] = ()
    name: str = "net"

    @property
    def all_clocks(self) -> tuple[str, ...]:
        out = list(self.clocks)
        for a in self.automata:
            out.extend(a.clocks)
        return tuple(out)

    @property
    def all_variables(self) -> tuple[VarDecl, ...]:
        out = list(self.variables)
        for a in self.automata:
            out.extend(a.variables)
        return tuple(out)

    def var_decl(self, name: str) -> VarDecl:
        for d in self.all_variables:
            if d.name == name:
                return d
        msg = f"network has no variable {name!r}"
        raise KeyError(msg)

    def automaton(self, name: str) -> TimedAutomaton:
        for a in self.automata:
            if a.name == name:
                return a
        msg = f"network has no automaton {name!r}"
        raise KeyError(msg)

    def initial_var_valuation(self) -> dict[str, int]:
        return {d.name: d.init for d in self.all_variables}

    def channel_roles(self) -> dict[str, set[str]]:
        roles: dict[str, set[str]] = {}
        for a in self.automata:
            for t in a.transitions:
                if t.sync is not None:
                    roles.setdefault(t.sync.channel, set()).add(t.sync.role)
        return roles


# valuations are plain mappings; exported aliases for signature clarity
ClockValuation = Mapping[str, Fraction]
VarValuation = Mapping[str, int]


LIVENESS_MODES = (
    "weak-transition",
    "strong-transition",
    "weak-guard",
    "strong-guard",
)


@dataclass(frozen=True)
class SemanticsConfig:
    """Selection criterion plus encoder flavor.

    ``edges`` restricts which endpoint convention discrete steps may use,
    ``liveness`` selects the progress requirements enforced on infinite
    traces (any subset of :data:`LIVENESS_MODES`, possibly empty; a bare
    string is accepted and treated as a one-element set), and ``encoding``
    chooses between the general encoder and the specialized
    right-closed/left-open one (which requires closed-open edges).
    """

    edges: str = "closed-open"
    liveness: frozenset[str] | str = frozenset({"weak-transition"})
    encoding: str = "lorc"
    non_zeno: bool = False

    def __post_init__(self) -> None:
        if self.edges not in ("closed-open", "open-closed", "unrestricted"):
            msg = f"unknown edge restriction {self.edges!r}"
            raise ValueError(msg)
        modes = (
            frozenset({self.liveness})
            if isinstance(self.liveness, str)
            else frozenset(self.liveness)
        )
        for mode in modes:
            if mode not in LIVENESS_MODES:
                msg = f"unknown liveness requirement {mode!r}"
                raise ValueError(msg)
        object.__setattr__(self, "liveness", modes)
        if self.encoding not in ("lorc", "general"):
            msg = f"unknown encoding flavor {self.encoding!r}"
            raise ValueError(msg)
        if self.encoding == "lorc" and self.edges != "closed-open":
            msg = "the right-closed encoding requires closed-open edges"
            raise ValueError(msg)


def _guard_clocks(g: Guard) -> set[str]:
    return {lit.atom.clock for lit in g}


def validate_network(net: Network) -> list[str]:
    """Structural diagnostics; an empty list means the network is well-formed."""
    out: list[str] = []
    seen_auto: set[str] = set()
    known_clocks = set(net.all_clocks)
    known_vars = {d.name for d in net.all_variables}

    decls: dict[str, VarDecl] = {}
    for d in net.all_variables:
        if d.name in decls:
            out.append(f"variable {d.name} declared twice")
        decls[d.name] = d
        if not (d.lo <= d.init <= d.hi):
            out.append(f"initial value {d.init} of {d.name} outside [{d.lo}, {d.hi}]")
    clock_names = list(net.all_clocks)
    for c in clock_names:
        if clock_names.count(c) > 1:
            out.append(f"clock {c} declared twice")

    for a in net.automata:
        if a.name in seen_auto:
            out.append(f"automaton {a.name} declared twice")
        seen_auto.add(a.name)
        loc_names = [l.name for l in a.locations]
        for l in loc_names:
            if loc_names.count(l) > 1:
                out.append(f"{a.name}: location {l} declared twice")
        if a.initial not in loc_names:
            out.append(f"{a.name}: initial location {a.initial} undeclared")
        if not a.locations:
            out.append(f"{a.name}: no locations")
        for loc in a.locations:
            for c in _guard_clocks(loc.invariant):
                if c not in known_clocks:
                    out.append(f"{a.name}.{loc.name}: invariant uses unknown clock {c}")
        for t in a.transitions:
            where = f"{a.name}: {t.src}->{t.dst}"
            if t.src not in loc_names:
                out.append(f"{where}: unknown source")
            if t.dst not in loc_names:
                out.append(f"{where}: unknown target")
            for c in _guard_clocks(t.clock_guard):
                if c not in known_clocks:
                    out.append(f"{where}: guard uses unknown clock {c}")
            for c in t.resets:
                if c not in known_clocks:
                    out.append(f"{where}: resets unknown clock {c}")
            for nm in var_constraint_vars(t.var_guard):
                if nm not in known_vars:
                    out.append(f"{where}: guard uses unknown variable {nm}")
            for u in t.updates:
                if u.target not in known_vars:
                    out.append(f"{where}: assigns unknown variable {u.target}")
                for nm in int_expr_vars(u.value):
                    if nm not in known_vars:
                        out.append(f"{where}: assignment reads unknown variable {nm}")

    for chan, roles in sorted(net.channel_roles().items()):
        families = {FAMILY_OF_ROLE[r] for r in roles}
        if len(families) > 1:
            fams = ", ".join(sorted(families))
            out.append(f"channel {chan} used with mixed families: {fams}")
    return out
