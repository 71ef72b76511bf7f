"""Linear temporal formulas over clocks and integer counters, on lasso models.

The formula language pairs qualitative temporal operators (X, U, R, F, G)
with three kinds of atoms: named booleans, comparisons of a real-valued
clock against a constant, and comparisons between integer counter terms,
where a counter may be read at the current or at the next position.
Clocks grow by the delay between consecutive positions unless reset to
zero; counters change freely from one position to the next.

A :class:`LassoInterpretation` is a finite ultimately-periodic model:
positions ``0..bound`` with a positive delay leaving each position, and a
loop position so that the successor of the last position wraps back.
:func:`truth_vector` decides a formula on every position of such a model
with the usual two-sweep fixpoint evaluation; :func:`evaluate_at` projects
out a single position.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Mapping, Sequence, Union

Rational = Union[int, Fraction]

_CMP_OPS = ("<", "<=", "=", ">", ">=")


# ---------------------------------------------------------------------------
# atoms


@dataclass(frozen=True)
class BoolVar:
    name: str


@dataclass(frozen=True)
class ClockCmp:
    clock: str
    op: str
    bound: Rational

    def __post_init__(self) -> None:
        if self.op not in _CMP_OPS:
            raise ValueError(f"bad clock comparison operator {self.op!r}")


@dataclass(frozen=True)
class Cnt:
    """The value of an integer counter at the current position."""

    name: str


@dataclass(frozen=True)
class Nxt:
    """The value of an integer counter at the next position."""

    name: str


@dataclass(frozen=True)
class Num:
    value: int


@dataclass(frozen=True)
class CntAdd:
    left: "CntTerm"
    right: "CntTerm"


@dataclass(frozen=True)
class CntSub:
    left: "CntTerm"
    right: "CntTerm"


CntTerm = Union[Cnt, Nxt, Num, CntAdd, CntSub]


@dataclass(frozen=True)
class IntCmp:
    left: CntTerm
    op: str
    right: CntTerm

    def __post_init__(self) -> None:
        if self.op not in _CMP_OPS:
            raise ValueError(f"bad counter comparison operator {self.op!r}")


# ---------------------------------------------------------------------------
# connectives


@dataclass(frozen=True)
class Not:
    arg: "Formula"


@dataclass(frozen=True)
class And:
    items: tuple["Formula", ...]


@dataclass(frozen=True)
class Or:
    items: tuple["Formula", ...]


@dataclass(frozen=True)
class Implies:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Iff:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Next:
    arg: "Formula"


@dataclass(frozen=True)
class Until:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Release:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Eventually:
    arg: "Formula"


@dataclass(frozen=True)
class Globally:
    arg: "Formula"


Formula = Union[
    BoolVar, ClockCmp, IntCmp,
    Not, And, Or, Implies, Iff,
    Next, Until, Release, Eventually, Globally,
]

TRUE: Formula = And(())
FALSE: Formula = Or(())


# ---------------------------------------------------------------------------
# smart constructors (flatten and constant-fold; encoders build large
# conjunctions, so dead branches are worth pruning at construction time)


def conj(*items: Formula) -> Formula:
    flat: list[Formula] = []
    for f in items:
        if f == TRUE:
            continue
        if f == FALSE:
            return FALSE
        if isinstance(f, And):
            flat.extend(f.items)
        else:
            flat.append(f)
    if not flat:
        return TRUE
    if len(flat) == 1:
        return flat[0]
    return And(tuple(flat))


def disj(*items: Formula) -> Formula:
    flat: list[Formula] = []
    for f in items:
        if f == FALSE:
            continue
        if f == TRUE:
            return TRUE
        if isinstance(f, Or):
            flat.extend(f.items)
        else:
            flat.append(f)
    if not flat:
        return FALSE
    if len(flat) == 1:
        return flat[0]
    return Or(tuple(flat))


def neg(f: Formula) -> Formula:
    if f == TRUE:
        return FALSE
    if f == FALSE:
        return TRUE
    if isinstance(f, Not):
        return f.arg
    return Not(f)


def implies(left: Formula, right: Formula) -> Formula:
    if left == TRUE:
        return right
    if left == FALSE or right == TRUE:
        return TRUE
    if right == FALSE:
        return neg(left)
    return Implies(left, right)


def iff(left: Formula, right: Formula) -> Formula:
    if left == TRUE:
        return right
    if right == TRUE:
        return left
    if left == FALSE:
        return neg(right)
    if right == FALSE:
        return neg(left)
    return Iff(left, right)


# ---------------------------------------------------------------------------
# vocabulary


@dataclass(frozen=True)
class Vocabulary:
    booleans: tuple[str, ...]
    counters: tuple[str, ...]
    clocks: tuple[str, ...]


def _term_counters(t: CntTerm, out: dict) -> None:
    if isinstance(t, (Cnt, Nxt)):
        out.setdefault(t.name, None)
    elif isinstance(t, (CntAdd, CntSub)):
        _term_counters(t.left, out)
        _term_counters(t.right, out)


def atoms_of(phi: Formula) -> Iterator[Formula]:
    """Atomic subformulas in first-occurrence order (with repetitions)."""
    stack = [phi]
    while stack:
        f = stack.pop()
        if isinstance(f, (BoolVar, ClockCmp, IntCmp)):
            yield f
        elif isinstance(f, Not):
            stack.append(f.arg)
        elif isinstance(f, (And, Or)):
            stack.extend(reversed(f.items))
        elif isinstance(f, (Implies, Iff, Until, Release)):
            stack.append(f.right)
            stack.append(f.left)
        elif isinstance(f, (Next, Eventually, Globally)):
            stack.append(f.arg)


def vocabulary(phi: Formula) -> Vocabulary:
    """Every boolean, counter, and clock name, in first-occurrence order."""
    booleans: dict = {}
    counters: dict = {}
    clocks: dict = {}
    for atom in atoms_of(phi):
        if isinstance(atom, BoolVar):
            booleans.setdefault(atom.name, None)
        elif isinstance(atom, ClockCmp):
            clocks.setdefault(atom.clock, None)
        else:
            _term_counters(atom.left, counters)
            _term_counters(atom.right, counters)
    return Vocabulary(tuple(booleans), tuple(counters), tuple(clocks))


def clock_bounds(phi: Formula) -> dict[str, tuple[Rational, ...]]:
    """Per clock, the sorted distinct constants it is compared against."""
    out: dict[str, set] = {}
    for atom in atoms_of(phi):
        if isinstance(atom, ClockCmp):
            out.setdefault(atom.clock, set()).add(atom.bound)
    return {x: tuple(sorted(bounds)) for x, bounds in out.items()}


# ---------------------------------------------------------------------------
# lasso models


@dataclass
class LassoInterpretation:
    """Ultimately-periodic model: positions 0..bound, then back to loop.

    ``delays[i]`` is the time elapsed leaving position ``i``; the last one
    closes the seam back to ``loop``.  Clock values must follow the
    progression discipline on the linear steps (grow by the delay or reset
    to zero); the seam is on purpose not constrained here, since a clock
    left of the loop may diverge across laps.
    """

    bound: int
    loop: int
    delays: tuple[Rational, ...]
    booleans: Mapping[str, Sequence[bool]]
    counters: Mapping[str, Sequence[int]]
    clocks: Mapping[str, Sequence[Rational]]

    def __post_init__(self) -> None:
        problems = []
        if self.bound < 1:
            problems.append(f"bound must be at least 1, got {self.bound}")
        if not 1 <= self.loop <= self.bound:
            problems.append(f"loop {self.loop} outside [1, {self.bound}]")
        if len(self.delays) != self.bound + 1:
            problems.append(
                f"{len(self.delays)} delays for {self.bound + 1} positions"
            )
        for i, d in enumerate(self.delays):
            if d <= 0:
                problems.append(f"delay {d} at position {i} is not positive")
        for kind, vectors in (
            ("boolean", self.booleans),
            ("counter", self.counters),
            ("clock", self.clocks),
        ):
            for name, vec in vectors.items():
                if len(vec) != self.bound + 1:
                    problems.append(
                        f"{kind} {name} has {len(vec)} values for"
                        f" {self.bound + 1} positions"
                    )
        if not problems:
            for name, vec in self.clocks.items():
                if any(v < 0 for v in vec):
                    problems.append(f"clock {name} goes negative")
                    continue
                for i in range(self.bound):
                    if vec[i + 1] != vec[i] + self.delays[i] and vec[i + 1] != 0:
                        problems.append(
                            f"clock {name} jumps from {vec[i]} to {vec[i + 1]}"
                            f" over delay {self.delays[i]} at position {i}"
                        )
        if problems:
            raise ValueError("; ".join(problems))

    def succ(self, position: int) -> int:
        return position + 1 if position < self.bound else self.loop

    @property
    def positions(self) -> range:
        return range(self.bound + 1)


def _term_value(t: CntTerm, interp: LassoInterpretation, i: int) -> int:
    if isinstance(t, Cnt):
        return interp.counters[t.name][i]
    if isinstance(t, Nxt):
        return interp.counters[t.name][interp.succ(i)]
    if isinstance(t, Num):
        return t.value
    if isinstance(t, CntAdd):
        return _term_value(t.left, interp, i) + _term_value(t.right, interp, i)
    if isinstance(t, CntSub):
        return _term_value(t.left, interp, i) - _term_value(t.right, interp, i)
    raise TypeError(t)


def _compare(a, op: str, b) -> bool:
    if op == "<":
        return a < b
    if op == "<=":
        return a <= b
    if op == "=":
        return a == b
    if op == ">":
        return a > b
    return a >= b


def truth_vector(phi: Formula, interp: LassoInterpretation) -> tuple[bool, ...]:
    """The formula's truth value at every position of the lasso.

    Until/Eventually sweep backwards twice seeded with False (a least
    fixpoint: the seam assumes no witness until one full lap has been
    propagated); Release/Globally dually seed with True.  Two sweeps are
    enough because any witness, or any violation, lies within one lap of
    the position that sees it.
    """
    n = interp.bound + 1
    rng = range(n)
    succ = interp.succ
    # id-keyed: structurally equal but distinct nodes are just recomputed,
    # while shared subterms (common in generated encodings) evaluate once
    memo: dict[int, tuple[bool, ...]] = {}

    def sweep(out, left, right, seed, until: bool):
        nxt = seed
        for i in range(n - 1, -1, -1):
            if until:
                out[i] = right[i] or (left[i] and nxt)
            else:
                out[i] = right[i] and (left[i] or nxt)
            nxt = out[i]

    def vec(f: Formula) -> tuple[bool, ...]:
        key = id(f)
        got = memo.get(key)
        if got is not None:
            return got
        if isinstance(f, BoolVar):
            try:
                v = tuple(bool(b) for b in interp.booleans[f.name])
            except KeyError:
                raise ValueError(f"interpretation has no boolean {f.name!r}") from None
        elif isinstance(f, ClockCmp):
            try:
                vals = interp.clocks[f.clock]
            except KeyError:
                raise ValueError(f"interpretation has no clock {f.clock!r}") from None
            v = tuple(_compare(vals[i], f.op, f.bound) for i in rng)
        elif isinstance(f, IntCmp):
            try:
                v = tuple(
                    _compare(
                        _term_value(f.left, interp, i),
                        f.op,
                        _term_value(f.right, interp, i),
                    )
                    for i in rng
                )
            except KeyError as exc:
                raise ValueError(
                    f"interpretation has no counter {exc.args[0]!r}"
                ) from None
        elif isinstance(f, Not):
            v = tuple(not b for b in vec(f.arg))
        elif isinstance(f, And):
            parts = [vec(g) for g in f.items]
            v = tuple(all(p[i] for p in parts) for i in rng)
        elif isinstance(f, Or):
            parts = [vec(g) for g in f.items]
            v = tuple(any(p[i] for p in parts) for i in rng)
        elif isinstance(f, Implies):
            a, b = vec(f.left), vec(f.right)
            v = tuple((not a[i]) or b[i] for i in rng)
        elif isinstance(f, Iff):
            a, b = vec(f.left), vec(f.right)
            v = tuple(a[i] == b[i] for i in rng)
        elif isinstance(f, Next):
            a = vec(f.arg)
            v = tuple(a[succ(i)] for i in rng)
        elif isinstance(f, (Until, Eventually)):
            if isinstance(f, Until):
                left, right = vec(f.left), vec(f.right)
            else:
                left, right = (True,) * n, vec(f.arg)
            out = [False] * n
            sweep(out, left, right, False, until=True)
            sweep(out, left, right, out[interp.loop], until=True)
            v = tuple(out)
        elif isinstance(f, (Release, Globally)):
            if isinstance(f, Release):
                left, right = vec(f.left), vec(f.right)
            else:
                left, right = (False,) * n, vec(f.arg)
            out = [True] * n
            sweep(out, left, right, True, until=False)
            sweep(out, left, right, out[interp.loop], until=False)
            v = tuple(out)
        else:
            raise TypeError(f)
        memo[key] = v
        return v

    return vec(phi)


def evaluate_at(phi: Formula, interp: LassoInterpretation, position: int = 0) -> bool:
    return truth_vector(phi, interp)[position]


# ---------------------------------------------------------------------------
# printing


_LEVEL_IFF = 1
_LEVEL_IMPLIES = 2
_LEVEL_OR = 3
_LEVEL_AND = 4
_LEVEL_BINTEMP = 5
_LEVEL_ATOM = 6


def _print_term(t: CntTerm, nested: bool = False) -> str:
    if isinstance(t, Cnt):
        return t.name
    if isinstance(t, Nxt):
        return f"X({t.name})"
    if isinstance(t, Num):
        return str(t.value)
    if isinstance(t, CntAdd):
        s = f"{_print_term(t.left)} + {_print_term(t.right, nested=True)}"
    else:
        s = f"{_print_term(t.left)} - {_print_term(t.right, nested=True)}"
    return f"({s})" if nested else s


def _wrap(s: str, level: int, at: int) -> str:
    return f"({s})" if level < at else s


def _pp(f: Formula, at: int) -> str:
    if f == TRUE:
        return "true"
    if f == FALSE:
        return "false"
    if isinstance(f, BoolVar):
        return f.name
    if isinstance(f, ClockCmp):
        return _wrap(f"{f.clock} {f.op} {f.bound}", _LEVEL_ATOM - 1, at)
    if isinstance(f, IntCmp):
        s = f"{_print_term(f.left)} {f.op} {_print_term(f.right)}"
        return _wrap(s, _LEVEL_ATOM - 1, at)
    if isinstance(f, Not):
        return f"!{_pp(f.arg, _LEVEL_ATOM)}"
    if isinstance(f, And):
        return _wrap(" & ".join(_pp(g, _LEVEL_AND) for g in f.items), _LEVEL_AND, at)
    if isinstance(f, Or):
        return _wrap(" | ".join(_pp(g, _LEVEL_OR + 1) for g in f.items), _LEVEL_OR, at)
    if isinstance(f, Implies):
        s = f"{_pp(f.left, _LEVEL_IMPLIES + 1)} -> {_pp(f.right, _LEVEL_IMPLIES)}"
        return _wrap(s, _LEVEL_IMPLIES, at)
    if isinstance(f, Iff):
        s = f"{_pp(f.left, _LEVEL_IFF + 1)} <-> {_pp(f.right, _LEVEL_IFF + 1)}"
        return _wrap(s, _LEVEL_IFF, at)
    if isinstance(f, Next):
        return f"X({_pp(f.arg, 0)})"
    if isinstance(f, Eventually):
        return f"F({_pp(f.arg, 0)})"
    if isinstance(f, Globally):
        return f"G({_pp(f.arg, 0)})"
    if isinstance(f, Until):
        s = f"{_pp(f.left, _LEVEL_BINTEMP + 1)} U {_pp(f.right, _LEVEL_BINTEMP + 1)}"
        return _wrap(s, _LEVEL_BINTEMP, at)
    if isinstance(f, Release):
        s = f"{_pp(f.left, _LEVEL_BINTEMP + 1)} R {_pp(f.right, _LEVEL_BINTEMP + 1)}"
        return _wrap(s, _LEVEL_BINTEMP, at)
    raise TypeError(f)


def print_cltloc(phi: Formula) -> str:
    return _pp(phi, 0)
