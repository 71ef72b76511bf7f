"""MITL abstract syntax, parser, printer, and positive normal form.

Formulas are interpreted over continuous-time signals with the strict-future
until: ``p U_I q`` holds at t when some t' > t with t' - t in I satisfies q
and p holds on the open interval (t, t').  Intervals have non-negative integer
endpoints and must be non-singular; a closed zero lower bound is equivalent to
an open one under the strict semantics and is normalized away at construction.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Optional, Union

from .model import IntAdd, IntConst, IntExpr, IntSub, IntVar, VarAtom


@dataclass(frozen=True)
class Interval:
    lo: int
    hi: Optional[int]  # None encodes an unbounded right end
    lo_closed: bool
    hi_closed: bool

    def __post_init__(self) -> None:
        if self.lo < 0:
            msg = f"negative interval endpoint {self.lo}"
            raise ValueError(msg)
        if self.hi is None:
            if self.hi_closed:
                msg = "an unbounded interval cannot be right-closed"
                raise ValueError(msg)
        else:
            if self.hi < self.lo or (self.hi == self.lo and not (self.lo_closed and self.hi_closed)):
                msg = f"empty interval {self.describe()}"
                raise ValueError(msg)
            if self.hi == self.lo:
                msg = f"singular interval {self.describe()} is not allowed"
                raise ValueError(msg)
        if self.lo == 0 and self.lo_closed:
            # strict-future semantics cannot observe the left endpoint at 0
            object.__setattr__(self, "lo_closed", False)

    def describe(self) -> str:
        left = "[" if self.lo_closed else "("
        right = "]" if self.hi_closed else ")"
        hi = "inf" if self.hi is None else str(self.hi)
        return f"{left}{self.lo},{hi}{right}"

    @property
    def unbounded(self) -> bool:
        return self.hi is None

    def is_plain_future(self) -> bool:
        """True for (0, inf): the interval that imposes no timing at all."""
        return self.lo == 0 and not self.lo_closed and self.hi is None


UNBOUNDED = Interval(0, None, False, False)


@dataclass(frozen=True)
class MTrue:
    pass


@dataclass(frozen=True)
class MFalse:
    pass


@dataclass(frozen=True)
class Prop:
    name: str


@dataclass(frozen=True)
class Comparison:
    """Arithmetic atom over integer variables, kept in the {<, =} kernel."""

    atom: VarAtom


@dataclass(frozen=True)
class Not:
    arg: "MitlFormula"


@dataclass(frozen=True)
class And:
    items: tuple["MitlFormula", ...]


@dataclass(frozen=True)
class Or:
    items: tuple["MitlFormula", ...]


@dataclass(frozen=True)
class Implies:
    left: "MitlFormula"
    right: "MitlFormula"


@dataclass(frozen=True)
class Until:
    left: "MitlFormula"
    right: "MitlFormula"
    interval: Interval = UNBOUNDED


@dataclass(frozen=True)
class Release:
    left: "MitlFormula"
    right: "MitlFormula"
    interval: Interval = UNBOUNDED


@dataclass(frozen=True)
class Eventually:
    arg: "MitlFormula"
    interval: Interval = UNBOUNDED


@dataclass(frozen=True)
class Globally:
    arg: "MitlFormula"
    interval: Interval = UNBOUNDED


MitlFormula = Union[
    MTrue, MFalse, Prop, Comparison, Not, And, Or, Implies, Until, Release, Eventually, Globally
]


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------


class MitlParseError(ValueError):
    pass


_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<num>\d+)
  | (?P<name>[A-Za-z_][A-Za-z0-9_]*(\.[A-Za-z_][A-Za-z0-9_]*)*)
  | (?P<op><=|>=|==|!=|->|\|\||&&|[!<>=()\[\],U+\-])
    """,
    re.VERBOSE,
)

_KEYWORDS = {"true", "false", "U", "R", "F", "G", "inf", "not", "and", "or"}


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    out = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            msg = f"unexpected character {text[pos]!r} at offset {pos}"
            raise MitlParseError(msg)
        kind = m.lastgroup or ""
        if kind != "ws":
            out.append((kind, m.group(), pos))
        pos = m.end()
    out.append(("eof", "", len(text)))
    return out


class _Parser:
    def __init__(self, text: str) -> None:
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self) -> tuple[str, str, int]:
        return self.toks[self.i]

    def next(self) -> tuple[str, str, int]:
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def expect(self, value: str) -> None:
        kind, text, pos = self.next()
        if text != value:
            msg = f"expected {value!r} at offset {pos}, got {text!r}"
            raise MitlParseError(msg)

    # precedence: unary > U/R > && > || > ->
    def formula(self) -> MitlFormula:
        return self.implication()

    def implication(self) -> MitlFormula:
        left = self.disjunction()
        if self.peek()[1] == "->":
            self.next()
            right = self.implication()
            return Implies(left, right)
        return left

    def disjunction(self) -> MitlFormula:
        items = [self.conjunction()]
        while self.peek()[1] in ("||", "or"):
            self.next()
            items.append(self.conjunction())
        return items[0] if len(items) == 1 else Or(tuple(items))

    def conjunction(self) -> MitlFormula:
        items = [self.until()]
        while self.peek()[1] in ("&&", "and"):
            self.next()
            items.append(self.until())
        return items[0] if len(items) == 1 else And(tuple(items))

    def until(self) -> MitlFormula:
        left = self.unary()
        if self.peek()[1] in ("U", "R"):
            op = self.next()[1]
            interval = self.maybe_interval()
            right = self.until()
            if op == "U":
                return Until(left, right, interval)
            return Release(left, right, interval)
        return left

    def maybe_interval(self) -> Interval:
        nxt = self.peek()[1]
        if nxt not in ("[", "("):
            return UNBOUNDED
        if nxt == "(":
            # disambiguate an interval from a parenthesized formula
            if self.i + 2 >= len(self.toks):
                return UNBOUNDED
            if self.toks[self.i + 1][0] != "num" or self.toks[self.i + 2][1] != ",":
                return UNBOUNDED
        lo_closed = self.next()[1] == "["
        kind, text, pos = self.next()
        if kind != "num":
            msg = f"expected interval bound at offset {pos}"
            raise MitlParseError(msg)
        lo = int(text)
        self.expect(",")
        kind, text, pos = self.next()
        hi: Optional[int]
        if text == "inf":
            hi = None
        elif kind == "num":
            hi = int(text)
        else:
            msg = f"expected interval bound or 'inf' at offset {pos}"
            raise MitlParseError(msg)
        kind, text, pos = self.next()
        if text not in ("]", ")"):
            msg = f"expected interval close at offset {pos}"
            raise MitlParseError(msg)
        try:
            return Interval(lo, hi, lo_closed, text == "]")
        except ValueError as e:
            raise MitlParseError(f"{e} at offset {pos}") from e

    def unary(self) -> MitlFormula:
        kind, text, pos = self.peek()
        if text in ("!", "not"):
            self.next()
            return Not(self.unary())
        if text == "F":
            self.next()
            interval = self.maybe_interval()
            return Eventually(self.unary(), interval)
        if text == "G":
            self.next()
            interval = self.maybe_interval()
            return Globally(self.unary(), interval)
        return self.atom()

    def atom(self) -> MitlFormula:
        kind, text, pos = self.next()
        if text == "(":
            f = self.formula()
            self.expect(")")
            return f
        if text == "true":
            return MTrue()
        if text == "false":
            return MFalse()
        if kind == "num" or (kind == "name" and text not in _KEYWORDS):
            return self.atom_or_comparison(kind, text, pos)
        msg = f"unexpected token {text!r} at offset {pos}"
        raise MitlParseError(msg)

    def atom_or_comparison(self, kind: str, text: str, pos: int) -> MitlFormula:
        lhs = self.int_operand(kind, text, pos)
        op = self.peek()[1]
        if op not in ("<", "<=", ">", ">=", "=", "==", "!="):
            if isinstance(lhs, IntVar):
                return Prop(lhs.name)
            msg = f"number at offset {pos} must be part of a comparison"
            raise MitlParseError(msg)
        self.next()
        k2, t2, p2 = self.next()
        rhs = self.int_operand(k2, t2, p2)
        return _comparison(lhs, op, rhs)

    def int_operand(self, kind: str, text: str, pos: int) -> IntExpr:
        if kind == "num":
            base: IntExpr = IntConst(int(text))
        elif kind == "name" and text not in _KEYWORDS:
            base = IntVar(text)
        else:
            msg = f"expected variable or number at offset {pos}, got {text!r}"
            raise MitlParseError(msg)
        while self.peek()[1] in ("+", "-"):
            op = self.next()[1]
            k2, t2, p2 = self.next()
            if k2 == "num":
                rhs: IntExpr = IntConst(int(t2))
            elif k2 == "name" and t2 not in _KEYWORDS:
                rhs = IntVar(t2)
            else:
                msg = f"expected variable or number at offset {p2}"
                raise MitlParseError(msg)
            base = IntAdd(base, rhs) if op == "+" else IntSub(base, rhs)
        return base


def _comparison(lhs: IntExpr, op: str, rhs: IntExpr) -> MitlFormula:
    if op == "<":
        return Comparison(VarAtom(lhs, "<", rhs))
    if op in ("=", "=="):
        return Comparison(VarAtom(lhs, "=", rhs))
    if op == "<=":
        return Not(Comparison(VarAtom(rhs, "<", lhs)))
    if op == ">":
        return Comparison(VarAtom(rhs, "<", lhs))
    if op == ">=":
        return Not(Comparison(VarAtom(lhs, "<", rhs)))
    # !=
    return Not(Comparison(VarAtom(lhs, "=", rhs)))


def parse_mitl(text: str) -> MitlFormula:
    parser = _Parser(text)
    f = parser.formula()
    kind, text_, pos = parser.peek()
    if kind != "eof":
        msg = f"trailing input at offset {pos}: {text_!r}"
        raise MitlParseError(msg)
    return f


# ---------------------------------------------------------------------------
# printer
# ---------------------------------------------------------------------------


def _print_int(e: IntExpr) -> str:
    if isinstance(e, IntConst):
        return str(e.value)
    if isinstance(e, IntVar):
        return e.name
    if isinstance(e, IntAdd):
        return f"{_print_int(e.left)} + {_print_int(e.right)}"
    if isinstance(e, IntSub):
        return f"{_print_int(e.left)} - {_print_int(e.right)}"
    msg = f"not an integer expression: {e!r}"
    raise TypeError(msg)


def _interval_suffix(i: Interval) -> str:
    if i.is_plain_future():
        return ""
    return i.describe()


_PREC = {"->": 0, "or": 1, "and": 2, "until": 3, "unary": 4}


def _fmt(f: MitlFormula, parent: int) -> str:
    if isinstance(f, MTrue):
        return "true"
    if isinstance(f, MFalse):
        return "false"
    if isinstance(f, Prop):
        return f.name
    if isinstance(f, Comparison):
        return f"{_print_int(f.atom.lhs)} {f.atom.op} {_print_int(f.atom.rhs)}"
    if isinstance(f, Not):
        return f"!{_fmt(f.arg, _PREC['unary'])}"
    if isinstance(f, And):
        s = " && ".join(_fmt(i, _PREC["and"]) for i in f.items)
        return f"({s})" if parent > _PREC["and"] else s
    if isinstance(f, Or):
        s = " || ".join(_fmt(i, _PREC["or"]) for i in f.items)
        return f"({s})" if parent > _PREC["or"] else s
    if isinstance(f, Implies):
        s = f"{_fmt(f.left, _PREC['->'] + 1)} -> {_fmt(f.right, _PREC['->'])}"
        return f"({s})" if parent > _PREC["->"] else s
    if isinstance(f, (Until, Release)):
        op = "U" if isinstance(f, Until) else "R"
        s = (
            f"{_fmt(f.left, _PREC['until'] + 1)} {op}{_interval_suffix(f.interval)} "
            f"{_fmt(f.right, _PREC['until'])}"
        )
        return f"({s})" if parent > _PREC["until"] else s
    if isinstance(f, (Eventually, Globally)):
        op = "F" if isinstance(f, Eventually) else "G"
        return f"{op}{_interval_suffix(f.interval)} {_fmt(f.arg, _PREC['unary'])}"
    msg = f"not a formula: {f!r}"
    raise TypeError(msg)


def print_mitl(f: MitlFormula) -> str:
    return _fmt(f, 0)


# ---------------------------------------------------------------------------
# normal form and atom collection
# ---------------------------------------------------------------------------


def negate(f: MitlFormula) -> MitlFormula:
    return to_positive_normal_form(Not(f))


def to_positive_normal_form(f: MitlFormula) -> MitlFormula:
    """Eliminate implication and push negations down to the atoms.

    The result uses only atoms, negated atoms, conjunction, disjunction and
    the four temporal operators, with until/release and eventually/globally
    exchanged under negation.
    """
    return _pnf(f, negated=False)


def _pnf(f: MitlFormula, negated: bool) -> MitlFormula:
    if isinstance(f, MTrue):
        return MFalse() if negated else f
    if isinstance(f, MFalse):
        return MTrue() if negated else f
    if isinstance(f, (Prop, Comparison)):
        return Not(f) if negated else f
    if isinstance(f, Not):
        return _pnf(f.arg, not negated)
    if isinstance(f, And):
        items = tuple(_pnf(i, negated) for i in f.items)
        return Or(items) if negated else And(items)
    if isinstance(f, Or):
        items = tuple(_pnf(i, negated) for i in f.items)
        return And(items) if negated else Or(items)
    if isinstance(f, Implies):
        return _pnf(Or((Not(f.left), f.right)), negated)
    if isinstance(f, Until):
        left, right = _pnf(f.left, negated), _pnf(f.right, negated)
        return Release(left, right, f.interval) if negated else Until(left, right, f.interval)
    if isinstance(f, Release):
        left, right = _pnf(f.left, negated), _pnf(f.right, negated)
        return Until(left, right, f.interval) if negated else Release(left, right, f.interval)
    if isinstance(f, Eventually):
        arg = _pnf(f.arg, negated)
        return Globally(arg, f.interval) if negated else Eventually(arg, f.interval)
    if isinstance(f, Globally):
        arg = _pnf(f.arg, negated)
        return Eventually(arg, f.interval) if negated else Globally(arg, f.interval)
    msg = f"not a formula: {f!r}"
    raise TypeError(msg)


def collect_atomic(f: MitlFormula) -> tuple[frozenset[str], frozenset[VarAtom]]:
    """Propositions and kernel arithmetic atoms occurring in the formula."""
    props: set[str] = set()
    atoms: set[VarAtom] = set()
    _collect(f, props, atoms)
    return frozenset(props), frozenset(atoms)


def _collect(f: MitlFormula, props: set[str], atoms: set[VarAtom]) -> None:
    if isinstance(f, (MTrue, MFalse)):
        return
    if isinstance(f, Prop):
        props.add(f.name)
        return
    if isinstance(f, Comparison):
        atoms.add(f.atom)
        return
    if isinstance(f, Not):
        _collect(f.arg, props, atoms)
        return
    if isinstance(f, (And, Or)):
        for i in f.items:
            _collect(i, props, atoms)
        return
    if isinstance(f, Implies):
        _collect(f.left, props, atoms)
        _collect(f.right, props, atoms)
        return
    if isinstance(f, (Until, Release)):
        _collect(f.left, props, atoms)
        _collect(f.right, props, atoms)
        return
    if isinstance(f, (Eventually, Globally)):
        _collect(f.arg, props, atoms)
        return
    msg = f"not a formula: {f!r}"
    raise TypeError(msg)


def max_finite_bound(f: MitlFormula) -> int:
    """Largest finite interval endpoint occurring in the formula."""
    best = 0
    if isinstance(f, (Until, Release)):
        if f.interval.hi is not None:
            best = f.interval.hi
        best = max(best, max_finite_bound(f.left), max_finite_bound(f.right))
    elif isinstance(f, (Eventually, Globally)):
        if f.interval.hi is not None:
            best = f.interval.hi
        best = max(best, max_finite_bound(f.arg))
    elif isinstance(f, Not):
        best = max_finite_bound(f.arg)
    elif isinstance(f, (And, Or)):
        best = max((max_finite_bound(i) for i in f.items), default=0)
    elif isinstance(f, Implies):
        best = max(max_finite_bound(f.left), max_finite_bound(f.right))
    return best
