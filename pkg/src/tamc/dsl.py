"""Textual format for timed-automata networks.

Grammar (EBNF; `//` starts a line comment):

    network    = "network" NAME "{" { vardecl | clockdecl | automaton } "}" ;
    vardecl    = "int" NAME "in" "[" INT "," INT "]" "=" INT ";" ;
    clockdecl  = "clock" NAME { "," NAME } ";" ;
    automaton  = "automaton" NAME "{" { vardecl | clockdecl | initdecl
                                      | location | transition } "}" ;
    initdecl   = "init" NAME ";" ;
    location   = "loc" NAME "{" { "inv" ":" clockexpr ";"
                                | "label" ":" NAME { "," NAME } ";" } "}" ;
    transition = "trans" NAME "->" NAME "{" { "guard" ":" clockexpr ";"
                                            | "when"  ":" varexpr ";"
                                            | "sync"  ":" NAME ROLE ";"
                                            | "do"    ":" assign { "," assign } ";"
                                            | "reset" ":" NAME { "," NAME } ";" } "}" ;
    assign     = NAME ":=" intexpr ;
    clockexpr  = clockand { "or" clockand } ;
    clockand   = clockneg { "and" clockneg } ;
    clockneg   = "not" clockneg | "(" clockexpr ")" | NAME CMP NAT ;
    varexpr    = varand { "or" varand } ;
    varand     = varneg { "and" varneg } ;
    varneg     = "not" varneg | "true" | intexpr CMP intexpr | "(" varexpr ")" ;
    intexpr    = term { ("+" | "-") term } ;
    term       = INT | "-" INT | NAME | "(" intexpr ")" ;
    CMP        = "<" | "<=" | "=" | "!=" | ">" | ">=" ;
    ROLE       = "!" | "?" | "#" | "@" | "&" | "*" ;

NAMEs may be dotted (``p1.wait``), which is the convention for location
labels.  Clock comparisons only ever mention a clock on the left and a
natural constant on the right; ``>`` and ``>=`` desugar to negated ``<=`` and
``<``.  A disjunctive transition guard is split into one transition per
disjoint disjunct (unsatisfiable disjuncts are dropped); invariants must be
conjunctions of possibly negated comparisons, since a location cannot hold a
choice.
"""

from __future__ import annotations

import re
from typing import Callable, Iterator, Optional, Union

from .model import (
    Assignment,
    CAnd,
    ClockAtom,
    ClockExpr,
    ClockLit,
    CNot,
    COr,
    Guard,
    IntAdd,
    IntConst,
    IntExpr,
    IntSub,
    IntVar,
    Location,
    Network,
    SYNC_ROLES,
    Sync,
    TimedAutomaton,
    Transition,
    VAnd,
    VAR_TRUE,
    VarAtom,
    VarConstraint,
    VarDecl,
    VNot,
    VOr,
    normalize_guard,
)


class DslParseError(ValueError):
    pass


# ---------------------------------------------------------------------------
# lexer

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<comment>//[^\n]*)
  | (?P<num>\d+)
  | (?P<name>[A-Za-z_][A-Za-z0-9_]*(\.[A-Za-z_][A-Za-z0-9_]*)*)
  | (?P<op><=|>=|!=|:=|->|[-<>={}\[\](),;:+!?#@&*])
    """,
    re.VERBOSE,
)

_KEYWORDS = {
    "network", "automaton", "int", "clock", "init", "loc", "trans",
    "inv", "label", "guard", "when", "sync", "do", "reset", "in",
    "and", "or", "not", "true",
}


def _tokenize(text: str) -> list[tuple[str, str, int, int]]:
    out = []
    pos = 0
    line = 1
    bol = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise DslParseError(
                f"line {line}: unexpected character {text[pos]!r}"
            )
        kind = m.lastgroup or ""
        if kind not in ("ws", "comment"):
            out.append((kind, m.group(), line, pos - bol + 1))
        line += m.group().count("\n")
        if "\n" in m.group():
            bol = pos + m.group().rindex("\n") + 1
        pos = m.end()
    out.append(("eof", "", line, pos - bol + 1))
    return out


# ---------------------------------------------------------------------------
# guard satisfiability (used to drop dead disjuncts after splitting)


def _guard_satisfiable(g: Guard) -> bool:
    by_clock: dict[str, list[ClockLit]] = {}
    for lit in g:
        by_clock.setdefault(lit.atom.clock, []).append(lit)
    for lits in by_clock.values():
        lo, lo_strict = 0, False  # clocks are nonnegative
        hi: Optional[int] = None
        hi_strict = False
        holes = set()
        for lit in lits:
            op, d = lit.atom.op, lit.atom.bound
            if not lit.negated:
                if op == "=":
                    # a closed bound at d never tightens an existing strict one
                    if d > lo:
                        lo, lo_strict = d, False
                    if hi is None or d < hi:
                        hi, hi_strict = d, False
                else:
                    strict = op == "<"
                    if hi is None or d < hi or (d == hi and strict and not hi_strict):
                        hi, hi_strict = d, strict
            else:
                if op == "=":
                    holes.add(d)
                else:
                    # not(x<d) means x>=d; not(x<=d) means x>d
                    strict = op == "<="
                    if d > lo or (d == lo and strict and not lo_strict):
                        lo, lo_strict = d, strict
        if hi is not None:
            if lo > hi or (lo == hi and (lo_strict or hi_strict)):
                return False
            if lo == hi and lo in holes:
                return False
        # over a dense domain, finitely many holes never empty an interval
        # of positive length
    return True


def _dedupe(g: Guard) -> Guard:
    seen = set()
    out = []
    for lit in g:
        if lit not in seen:
            seen.add(lit)
            out.append(lit)
    return tuple(out)


def split_guard(expr: ClockExpr) -> list[Guard]:
    """Disjoint satisfiable convex guards whose union is the expression."""
    return [g for g in map(_dedupe, normalize_guard(expr)) if _guard_satisfiable(g)]


def _as_conjunction(expr: ClockExpr, what: str) -> Guard:
    if isinstance(expr, ClockAtom):
        return (ClockLit(expr),)
    if isinstance(expr, CNot) and isinstance(expr.arg, ClockAtom):
        return (ClockLit(expr.arg, negated=True),)
    if isinstance(expr, CAnd):
        out: Guard = ()
        for item in expr.items:
            out += _as_conjunction(item, what)
        return out
    raise DslParseError(f"{what} must be a conjunction of (negated) comparisons")


# ---------------------------------------------------------------------------
# parser

_CMP_OPS = ("<", "<=", "=", "!=", ">", ">=")


class _Parser:
    def __init__(self, text: str) -> None:
        self.toks = _tokenize(text)
        self.i = 0

    # --- plumbing

    def peek(self) -> tuple[str, str, int, int]:
        return self.toks[self.i]

    def next(self) -> tuple[str, str, int, int]:
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def fail(self, msg: str) -> None:
        _, text, line, col = self.peek()
        shown = text or "end of input"
        raise DslParseError(f"line {line}:{col}: {msg}, got {shown!r}")

    def expect(self, value: str) -> None:
        if self.peek()[1] != value:
            self.fail(f"expected {value!r}")
        self.next()

    def accept(self, value: str) -> bool:
        if self.peek()[1] == value:
            self.next()
            return True
        return False

    def name(self, what: str = "name") -> str:
        kind, text, _, _ = self.peek()
        if kind != "name" or text in _KEYWORDS:
            self.fail(f"expected {what}")
        self.next()
        return text

    def nat(self) -> int:
        kind, text, _, _ = self.peek()
        if kind != "num":
            self.fail("expected a number")
        self.next()
        return int(text)

    def signed_int(self) -> int:
        if self.accept("-"):
            return -self.nat()
        return self.nat()

    # --- network structure

    def network(self) -> Network:
        self.expect("network")
        name = self.name("network name")
        self.expect("{")
        variables: list[VarDecl] = []
        clocks: list[str] = []
        automata: list[TimedAutomaton] = []
        while not self.accept("}"):
            head = self.peek()[1]
            if head == "int":
                variables.append(self.vardecl())
            elif head == "clock":
                clocks.extend(self.clockdecl())
            elif head == "automaton":
                automata.append(self.automaton())
            else:
                self.fail("expected 'int', 'clock', 'automaton' or '}'")
        if self.peek()[0] != "eof":
            self.fail("expected end of input")
        if not automata:
            raise DslParseError(f"network {name} declares no automaton")
        self._no_dupes([a.name for a in automata], "automaton")
        self._no_dupes([v.name for v in variables], "variable")
        self._no_dupes(clocks, "clock")
        return Network(tuple(automata), tuple(clocks), tuple(variables), name)

    def _no_dupes(self, names: list[str], what: str) -> None:
        seen = set()
        for n in names:
            if n in seen:
                raise DslParseError(f"duplicate {what} {n!r}")
            seen.add(n)

    def vardecl(self) -> VarDecl:
        self.expect("int")
        name = self.name("variable name")
        self.expect("in")
        self.expect("[")
        lo = self.signed_int()
        self.expect(",")
        hi = self.signed_int()
        self.expect("]")
        self.expect("=")
        init = self.signed_int()
        self.expect(";")
        try:
            return VarDecl(name, lo, hi, init)
        except ValueError as exc:
            raise DslParseError(str(exc)) from None

    def clockdecl(self) -> list[str]:
        self.expect("clock")
        names = [self.name("clock name")]
        while self.accept(","):
            names.append(self.name("clock name"))
        self.expect(";")
        return names

    def automaton(self) -> TimedAutomaton:
        self.expect("automaton")
        name = self.name("automaton name")
        self.expect("{")
        clocks: list[str] = []
        variables: list[VarDecl] = []
        locations: list[Location] = []
        raw_transitions: list[tuple[str, str, ClockExpr, VarConstraint,
                                    Optional[Sync], tuple, tuple]] = []
        initial: Optional[str] = None
        while not self.accept("}"):
            head = self.peek()[1]
            if head == "clock":
                clocks.extend(self.clockdecl())
            elif head == "int":
                variables.append(self.vardecl())
            elif head == "init":
                if initial is not None:
                    raise DslParseError(f"automaton {name} sets init twice")
                self.next()
                initial = self.name("location name")
                self.expect(";")
            elif head == "loc":
                locations.append(self.location())
            elif head == "trans":
                raw_transitions.append(self.transition())
            else:
                self.fail("expected 'clock', 'int', 'init', 'loc', 'trans' or '}'")
        if initial is None:
            raise DslParseError(f"automaton {name} has no init declaration")
        known = {l.name for l in locations}
        if initial not in known:
            raise DslParseError(f"automaton {name}: init location {initial!r} not declared")
        self._no_dupes([l.name for l in locations], "location")

        transitions: list[Transition] = []
        for src, dst, guard_expr_, when, sync, resets, updates in raw_transitions:
            for endpoint in (src, dst):
                if endpoint not in known:
                    raise DslParseError(
                        f"automaton {name}: transition endpoint {endpoint!r} not declared"
                    )
            for g in split_guard(guard_expr_):
                transitions.append(
                    Transition(src, dst, g, when, sync, resets, updates)
                )
        return TimedAutomaton(
            name=name,
            locations=tuple(locations),
            initial=initial,
            transitions=tuple(transitions),
            clocks=tuple(clocks),
            variables=tuple(variables),
        )

    def location(self) -> Location:
        self.expect("loc")
        name = self.name("location name")
        self.expect("{")
        invariant: Optional[Guard] = None
        labels: Optional[tuple[str, ...]] = None
        while not self.accept("}"):
            field = self.peek()[1]
            if field == "inv":
                if invariant is not None:
                    raise DslParseError(f"location {name} sets inv twice")
                self.next()
                self.expect(":")
                invariant = _as_conjunction(self.clock_expr(), f"invariant of {name}")
                self.expect(";")
            elif field == "label":
                if labels is not None:
                    raise DslParseError(f"location {name} sets label twice")
                self.next()
                self.expect(":")
                names = [self.name("label")]
                while self.accept(","):
                    names.append(self.name("label"))
                labels = tuple(names)
                self.expect(";")
            else:
                self.fail("expected 'inv', 'label' or '}'")
        return Location(name, invariant or (), labels or ())

    def transition(self):
        self.expect("trans")
        src = self.name("location name")
        self.expect("->")
        dst = self.name("location name")
        self.expect("{")
        guard: Optional[ClockExpr] = None
        when: Optional[VarConstraint] = None
        sync: Optional[Sync] = None
        resets: Optional[tuple[str, ...]] = None
        updates: Optional[tuple[Assignment, ...]] = None
        while not self.accept("}"):
            field = self.peek()[1]
            if field == "guard":
                if guard is not None:
                    raise DslParseError(f"transition {src}->{dst} sets guard twice")
                self.next()
                self.expect(":")
                guard = self.clock_expr()
                self.expect(";")
            elif field == "when":
                if when is not None:
                    raise DslParseError(f"transition {src}->{dst} sets when twice")
                self.next()
                self.expect(":")
                when = self.var_expr()
                self.expect(";")
            elif field == "sync":
                if sync is not None:
                    raise DslParseError(f"transition {src}->{dst} sets sync twice")
                self.next()
                self.expect(":")
                channel = self.name("channel name")
                role = self.peek()[1]
                if role not in SYNC_ROLES:
                    self.fail("expected a sync role (one of ! ? # @ & *)")
                self.next()
                sync = Sync(channel, role)
                self.expect(";")
            elif field == "do":
                if updates is not None:
                    raise DslParseError(f"transition {src}->{dst} sets do twice")
                self.next()
                self.expect(":")
                items = [self.assignment()]
                while self.accept(","):
                    items.append(self.assignment())
                updates = tuple(items)
                self.expect(";")
            elif field == "reset":
                if resets is not None:
                    raise DslParseError(f"transition {src}->{dst} sets reset twice")
                self.next()
                self.expect(":")
                names = [self.name("clock name")]
                while self.accept(","):
                    names.append(self.name("clock name"))
                resets = tuple(names)
                self.expect(";")
            else:
                self.fail("expected 'guard', 'when', 'sync', 'do', 'reset' or '}'")
        return (
            src, dst,
            guard if guard is not None else CAnd(()),
            when if when is not None else VAR_TRUE,
            sync,
            resets or (),
            updates or (),
        )

    def assignment(self) -> Assignment:
        target = self.name("variable name")
        self.expect(":=")
        return Assignment(target, self.int_expr())

    # --- clock expressions

    def clock_expr(self) -> ClockExpr:
        items = [self.clock_and()]
        while self.accept("or"):
            items.append(self.clock_and())
        return items[0] if len(items) == 1 else COr(tuple(items))

    def clock_and(self) -> ClockExpr:
        items = [self.clock_neg()]
        while self.accept("and"):
            items.append(self.clock_neg())
        return items[0] if len(items) == 1 else CAnd(tuple(items))

    def clock_neg(self) -> ClockExpr:
        if self.accept("not"):
            return CNot(self.clock_neg())
        if self.accept("("):
            inner = self.clock_expr()
            self.expect(")")
            return inner
        clock = self.name("clock name")
        op = self.peek()[1]
        if op not in _CMP_OPS:
            self.fail("expected a comparison operator")
        self.next()
        bound = self.nat()
        if op == ">":
            return CNot(ClockAtom(clock, "<=", bound))
        if op == ">=":
            return CNot(ClockAtom(clock, "<", bound))
        if op == "!=":
            return CNot(ClockAtom(clock, "=", bound))
        return ClockAtom(clock, op, bound)

    # --- variable expressions

    def var_expr(self) -> VarConstraint:
        items = [self.var_and()]
        while self.accept("or"):
            items.append(self.var_and())
        return items[0] if len(items) == 1 else VOr(tuple(items))

    def var_and(self) -> VarConstraint:
        items = [self.var_neg()]
        while self.accept("and"):
            items.append(self.var_neg())
        return items[0] if len(items) == 1 else VAnd(tuple(items))

    def var_neg(self) -> VarConstraint:
        if self.accept("not"):
            return VNot(self.var_neg())
        if self.accept("true"):
            return VAR_TRUE
        if self.peek()[1] == "(":
            # "(" may group an integer expression or a whole constraint; try
            # the comparison reading and fall back to the other
            mark = self.i
            try:
                return self.comparison()
            except DslParseError:
                self.i = mark
            self.expect("(")
            inner = self.var_expr()
            self.expect(")")
            return inner
        return self.comparison()

    def comparison(self) -> VarConstraint:
        lhs = self.int_expr()
        op = self.peek()[1]
        if op not in _CMP_OPS:
            self.fail("expected a comparison operator")
        self.next()
        rhs = self.int_expr()
        if op == "<":
            return VarAtom(lhs, "<", rhs)
        if op == "=":
            return VarAtom(lhs, "=", rhs)
        if op == "<=":
            return VNot(VarAtom(rhs, "<", lhs))
        if op == ">":
            return VarAtom(rhs, "<", lhs)
        if op == ">=":
            return VNot(VarAtom(lhs, "<", rhs))
        return VNot(VarAtom(lhs, "=", rhs))  # !=

    def int_expr(self) -> IntExpr:
        out = self.int_term()
        while True:
            if self.accept("+"):
                out = IntAdd(out, self.int_term())
            elif self.accept("-"):
                out = IntSub(out, self.int_term())
            else:
                return out

    def int_term(self) -> IntExpr:
        kind, text, _, _ = self.peek()
        if kind == "num":
            self.next()
            return IntConst(int(text))
        if text == "-":
            self.next()
            return IntConst(-self.nat())
        if text == "(":
            self.next()
            inner = self.int_expr()
            self.expect(")")
            return inner
        if kind == "name" and text not in _KEYWORDS:
            self.next()
            return IntVar(text)
        self.fail("expected a number or variable")
        raise AssertionError  # unreachable


def parse_network(text: str) -> Network:
    return _Parser(text).network()


# ---------------------------------------------------------------------------
# printer


def _print_clock_lit(lit: ClockLit) -> str:
    a = lit.atom
    if not lit.negated:
        return f"{a.clock} {a.op} {a.bound}"
    if a.op == "<":
        return f"{a.clock} >= {a.bound}"
    if a.op == "<=":
        return f"{a.clock} > {a.bound}"
    return f"{a.clock} != {a.bound}"


def _print_guard(g: Guard) -> str:
    return " and ".join(_print_clock_lit(lit) for lit in g)


def _print_int(e: IntExpr, nested: bool = False) -> str:
    if isinstance(e, IntConst):
        return str(e.value)
    if isinstance(e, IntVar):
        return e.name
    if isinstance(e, IntAdd):
        s = f"{_print_int(e.left)} + {_print_int(e.right, nested=True)}"
    else:
        s = f"{_print_int(e.left)} - {_print_int(e.right, nested=True)}"
    return f"({s})" if nested else s


def _print_var(c: VarConstraint, level: int = 0) -> str:
    # level: 0 = or, 1 = and, 2 = atom/not
    if isinstance(c, VarAtom):
        return f"{_print_int(c.lhs)} {c.op} {_print_int(c.rhs)}"
    if isinstance(c, VNot):
        if isinstance(c.arg, VarAtom):
            op = ">=" if c.arg.op == "<" else "!="
            return f"{_print_int(c.arg.lhs)} {op} {_print_int(c.arg.rhs)}"
        return f"not ({_print_var(c.arg)})"
    if isinstance(c, VAnd):
        if not c.items:
            return "true"
        # children print one level tighter so nested n-ary nodes keep their
        # grouping through a reparse instead of flattening
        s = " and ".join(_print_var(g, 2) for g in c.items)
        return f"({s})" if level > 1 else s
    if isinstance(c, VOr):
        s = " or ".join(_print_var(g, 1) for g in c.items)
        return f"({s})" if level > 0 else s
    raise TypeError(c)


def _print_transition(t: Transition) -> str:
    fields = []
    if t.clock_guard:
        fields.append(f"guard: {_print_guard(t.clock_guard)};")
    if t.var_guard != VAR_TRUE:
        fields.append(f"when: {_print_var(t.var_guard)};")
    if t.sync is not None:
        fields.append(f"sync: {t.sync.channel}{t.sync.role};")
    if t.updates:
        body = ", ".join(f"{a.target} := {_print_int(a.value)}" for a in t.updates)
        fields.append(f"do: {body};")
    if t.resets:
        fields.append(f"reset: {', '.join(t.resets)};")
    inner = (" " + " ".join(fields)) if fields else ""
    return f"trans {t.src} -> {t.dst} {{{inner} }}"


def _print_location(loc: Location) -> str:
    fields = []
    if loc.invariant:
        fields.append(f"inv: {_print_guard(loc.invariant)};")
    if loc.labels:
        fields.append(f"label: {', '.join(loc.labels)};")
    inner = (" " + " ".join(fields)) if fields else ""
    return f"loc {loc.name} {{{inner} }}"


def _print_vardecl(v: VarDecl) -> str:
    return f"int {v.name} in [{v.lo}, {v.hi}] = {v.init};"


def print_var_constraint(c: VarConstraint) -> str:
    """Render a variable constraint in the surface syntax.

    The output parses back to an equivalent constraint and is stable for a
    given tree, so it doubles as a canonical name for constraint atoms.
    """
    return _print_var(c)


def print_network(net: Network) -> str:
    lines = [f"network {net.name} {{"]
    for v in net.variables:
        lines.append(f"  {_print_vardecl(v)}")
    if net.clocks:
        lines.append(f"  clock {', '.join(net.clocks)};")
    for auto in net.automata:
        lines.append("")
        lines.append(f"  automaton {auto.name} {{")
        if auto.clocks:
            lines.append(f"    clock {', '.join(auto.clocks)};")
        for v in auto.variables:
            lines.append(f"    {_print_vardecl(v)}")
        lines.append(f"    init {auto.initial};")
        for loc in auto.locations:
            lines.append(f"    {_print_location(loc)}")
        for t in auto.transitions:
            lines.append(f"    {_print_transition(t)}")
        lines.append("  }")
    lines.append("}")
    return "\n".join(lines) + "\n"
