"""Shared test fixtures: tiny networks, hand-built signals, hypothesis
strategies, and an independent grid-based MITL evaluator used to referee the
interval-set oracle."""

from __future__ import annotations

from fractions import Fraction
from math import lcm
from typing import Dict, Iterable, Mapping, Optional, Sequence, Tuple

from hypothesis import strategies as st

from tamc.mitl import (
    And,
    Comparison,
    Eventually,
    Globally,
    Implies,
    Interval,
    MFalse,
    MitlFormula,
    MTrue,
    Not,
    Or,
    Prop,
    Release,
    Until,
)
from tamc.model import (
    Assignment,
    ClockAtom,
    ClockLit,
    IntConst,
    Location,
    Network,
    Sync,
    TimedAutomaton,
    Transition,
    VarAtom,
    VarDecl,
    IntVar,
)
from tamc.oracle import Piece, Signal, State


# ---------------------------------------------------------------------------
# tiny networks


def toy_net() -> Network:
    """One automaton bouncing between idle and busy, resetting its clock."""
    a = TimedAutomaton(
        name="p1",
        locations=(
            Location("q0", labels=("p1.idle",)),
            Location("q1", labels=("p1.busy",)),
        ),
        initial="q0",
        transitions=(
            Transition("q0", "q1", clock_guard=(ClockLit(ClockAtom("x", "<", 5)),), resets=("x",)),
            Transition("q1", "q0", resets=("x",)),
        ),
        clocks=("x",),
    )
    return Network((a,), name="toy")


def label_example_net() -> Network:
    """Three locations in a cycle: labeled a, unlabeled (invariant x<=5),
    labeled c; an integer n tracks which edge fired last."""
    a = TimedAutomaton(
        name="m",
        locations=(
            Location("q0", labels=("a",)),
            Location("q1", invariant=(ClockLit(ClockAtom("x", "<=", 5)),)),
            Location("q2", labels=("c",)),
        ),
        initial="q0",
        transitions=(
            Transition(
                "q0", "q1",
                clock_guard=(ClockLit(ClockAtom("x", "<", 5)),),
                resets=("x",),
                updates=(Assignment("n", IntConst(2)),),
            ),
            Transition("q1", "q2", updates=(Assignment("n", IntConst(1)),)),
            Transition("q2", "q0", resets=("x",), updates=(Assignment("n", IntConst(0)),)),
        ),
        clocks=("x",),
    )
    return Network((a,), variables=(VarDecl("n", 0, 2, 0),), name="labels")


def pair_net() -> Network:
    """Sender/receiver pair over two channels sharing a variable."""
    s = TimedAutomaton(
        name="s", initial="a",
        locations=(Location("a", labels=("s.a",)), Location("b", labels=("s.b",))),
        transitions=(
            Transition("a", "b", sync=Sync("go", "!"),
                       updates=(Assignment("n", IntConst(1)),), resets=("y",)),
            Transition("b", "a", sync=Sync("back", "!"),
                       updates=(Assignment("n", IntConst(0)),)),
        ),
        clocks=("y",),
    )
    r = TimedAutomaton(
        name="r", initial="a",
        locations=(Location("a", labels=("r.a",)), Location("b", labels=("r.b",))),
        transitions=(
            Transition("a", "b", sync=Sync("go", "?")),
            Transition("b", "a", sync=Sync("back", "?")),
        ),
        clocks=("z",),
    )
    return Network((s, r), variables=(VarDecl("n", 0, 1, 0),), name="pair")


# ---------------------------------------------------------------------------
# hand-built signals


def mk_state(props: Iterable[str] = (), **variables: int) -> State:
    """Build a State; a bare string is shorthand for one prop per character
    ("ab" -> {a, b}), so multi-character prop names must come in a tuple."""
    return State.make(props, variables)


def mk_signal(
    prefix: Sequence[Tuple[Iterable[str], Iterable[str], int | Fraction]],
    loop: Sequence[Tuple[Iterable[str], Iterable[str], int | Fraction]],
    variables: Optional[Mapping[str, Sequence[int]]] = None,
) -> Signal:
    """Build a proposition-only signal from (at_props, interior_props, dur)
    triples or (props, dur) pairs where the instant matches the interior.
    Tests that need variables build State objects directly."""
    def conv(row):
        if len(row) == 2:
            at, dur = row
            inner = at
        else:
            at, inner, dur = row
        return Piece(mk_state(at), mk_state(inner), Fraction(dur))
    return Signal([conv(r) for r in prefix], [conv(r) for r in loop])


# ---------------------------------------------------------------------------
# independent grid-based evaluator (bounded intervals only)


def _denom_lcm(sig: Signal, f: MitlFormula, t: Fraction) -> int:
    d = t.denominator
    for piece in (*sig.prefix, *sig.loop):
        d = lcm(d, piece.duration.denominator)

    def walk(node: MitlFormula) -> None:
        nonlocal d
        if isinstance(node, Not):
            walk(node.arg)
        elif isinstance(node, (And, Or)):
            for g in node.items:
                walk(g)
        elif isinstance(node, Implies):
            walk(node.left)
            walk(node.right)
        elif isinstance(node, (Eventually, Globally)):
            d = lcm(d, Fraction(node.interval.lo).denominator)
            if node.interval.hi is not None:
                d = lcm(d, Fraction(node.interval.hi).denominator)
            walk(node.arg)
        elif isinstance(node, (Until, Release)):
            d = lcm(d, Fraction(node.interval.lo).denominator)
            if node.interval.hi is not None:
                d = lcm(d, Fraction(node.interval.hi).denominator)
            walk(node.left)
            walk(node.right)

    walk(f)
    return d


def _bound_sum(f: MitlFormula) -> int:
    if isinstance(f, (MTrue, MFalse, Prop, Comparison)):
        return 0
    if isinstance(f, Not):
        return _bound_sum(f.arg)
    if isinstance(f, (And, Or)):
        return max((_bound_sum(g) for g in f.items), default=0)
    if isinstance(f, Implies):
        return max(_bound_sum(f.left), _bound_sum(f.right))
    if isinstance(f, (Eventually, Globally)):
        assert f.interval.hi is not None, "grid referee needs bounded intervals"
        return _bound_sum(f.arg) + f.interval.hi
    if isinstance(f, (Until, Release)):
        assert f.interval.hi is not None, "grid referee needs bounded intervals"
        return max(_bound_sum(f.left), _bound_sum(f.right)) + f.interval.hi
    raise TypeError(f)


def grid_eval(f: MitlFormula, sig: Signal, t: Fraction | int = 0) -> bool:
    """Exact evaluation by brute force over a rational grid.

    Only supports formulas whose temporal intervals are all bounded.  Truth of
    every subformula is piecewise constant with breakpoints on multiples of
    1/D (D = lcm of all piece-duration, query-time, and interval-bound
    denominators).  The grid has step 1/(2D): even-index points sit on the
    potential breakpoints and stand for themselves, odd-index points are never
    breakpoints and stand for the whole open segment between their even
    neighbours (every subformula is constant there).  Temporal scans treat an
    odd point as a hit whenever its segment overlaps the window, which makes
    them exact even when a window clips a region to a sliver containing no
    grid point."""
    t = Fraction(t)
    d = _denom_lcm(sig, f, t)
    step = Fraction(1, 2 * d)
    def depth(node: MitlFormula) -> int:
        if isinstance(node, Not):
            return depth(node.arg)
        if isinstance(node, (And, Or)):
            return max((depth(g) for g in node.items), default=0)
        if isinstance(node, Implies):
            return max(depth(node.left), depth(node.right))
        if isinstance(node, (Eventually, Globally)):
            return 1 + depth(node.arg)
        if isinstance(node, (Until, Release)):
            return 1 + max(depth(node.left), depth(node.right))
        return 0

    # each nesting level can peek up to two grid steps past its window
    horizon = t + _bound_sum(f) + sig.prefix_end + 2 * sig.period + 1 + depth(f)
    n_points = int(horizon / step) + 1
    times = [k * step for k in range(n_points + 1)]
    index = {tt: i for i, tt in enumerate(times)}
    memo: Dict[Tuple[int, int], bool] = {}
    duals: Dict[int, MitlFormula] = {}

    def inside(delta: Fraction, iv: Interval) -> bool:
        if delta < iv.lo or (delta == iv.lo and not iv.lo_closed):
            return False
        if iv.hi is not None:
            if delta > iv.hi or (delta == iv.hi and not iv.hi_closed):
                return False
        return True

    def ev(node: MitlFormula, i: int) -> bool:
        key = (id(node), i)
        if key in memo:
            return memo[key]
        tt = times[i]
        if isinstance(node, MTrue):
            out = True
        elif isinstance(node, MFalse):
            out = False
        elif isinstance(node, Prop):
            out = sig.value_at(tt).has(node.name)
        elif isinstance(node, Comparison):
            env = sig.value_at(tt).variables
            from tamc.model import eval_int_expr
            lhs = eval_int_expr(node.atom.lhs, env)
            rhs = eval_int_expr(node.atom.rhs, env)
            out = lhs < rhs if node.atom.op == "<" else lhs == rhs
        elif isinstance(node, Not):
            out = not ev(node.arg, i)
        elif isinstance(node, And):
            out = all(ev(g, i) for g in node.items)
        elif isinstance(node, Or):
            out = any(ev(g, i) for g in node.items)
        elif isinstance(node, Implies):
            out = (not ev(node.left, i)) or ev(node.right, i)
        elif isinstance(node, (Eventually, Globally)):
            iv = node.interval
            assert iv.hi is not None, "grid referee needs bounded intervals"
            want = isinstance(node, Eventually)  # the witness value sought
            witness = False
            for j in range(i + 1, len(times)):
                delta = times[j] - tt
                if delta - step > iv.hi:
                    break
                if j % 2 == 0:
                    hit = inside(delta, iv)
                else:
                    # segment (times[j]-step, times[j]+step) overlaps window
                    hit = delta + step > iv.lo and delta - step < iv.hi
                if hit and ev(node.arg, j) == want:
                    witness = True
                    break
            out = witness if want else not witness
        elif isinstance(node, (Until, Release)):
            if isinstance(node, Release):
                # dual: not ((not l) U (not r)); built once so memoization works
                if id(node) not in duals:
                    duals[id(node)] = Until(Not(node.left), Not(node.right), node.interval)
                out = not ev(duals[id(node)], i)
            else:
                iv = node.interval
                assert iv.hi is not None, "grid referee needs bounded intervals"
                out = False
                # chain == left holds throughout the open interval (tt, times[j])
                chain = ev(node.left, i + 1 if i % 2 == 0 else i)
                for j in range(i + 1, len(times)):
                    delta = times[j] - tt
                    if delta - step > iv.hi or not chain:
                        break
                    if j % 2 == 0:
                        if inside(delta, iv) and ev(node.right, j):
                            out = True
                            break
                    else:
                        hit = delta + step > iv.lo and delta - step < iv.hi
                        if hit and ev(node.right, j) and ev(node.left, j):
                            out = True
                            break
                    chain = chain and ev(node.left, j)
                    if j + 1 < len(times):
                        chain = chain and ev(node.left, j if j % 2 == 1 else j + 1)
        else:
            raise TypeError(node)
        memo[key] = out
        return out

    return ev(f, index[t])


# ---------------------------------------------------------------------------
# hypothesis strategies

PROPS = ("a", "b", "c")


def intervals(max_bound: int = 4) -> st.SearchStrategy[Interval]:
    def build(lo, width, lo_closed, hi_closed, unbounded):
        if unbounded:
            return Interval(lo, None, lo_closed and lo > 0, False)
        return Interval(lo, lo + width, lo_closed and lo > 0, hi_closed)
    return st.builds(
        build,
        st.integers(0, max_bound - 1),
        st.integers(1, max_bound),
        st.booleans(),
        st.booleans(),
        st.booleans(),
    )


def bounded_intervals(max_bound: int = 4) -> st.SearchStrategy[Interval]:
    def build(lo, width, lo_closed, hi_closed):
        return Interval(lo, lo + width, lo_closed and lo > 0, hi_closed)
    return st.builds(
        build,
        st.integers(0, max_bound - 1),
        st.integers(1, max_bound),
        st.booleans(),
        st.booleans(),
    )


def formulas(
    depth: int = 3,
    props: Sequence[str] = PROPS,
    interval_strategy: Optional[st.SearchStrategy[Interval]] = None,
    variables: Sequence[str] = (),
) -> st.SearchStrategy[MitlFormula]:
    ivs = interval_strategy if interval_strategy is not None else intervals()
    atoms = [st.sampled_from([Prop(p) for p in props]), st.just(MTrue()), st.just(MFalse())]
    if variables:
        atoms.append(
            st.builds(
                lambda n, c, op: Comparison(VarAtom(IntVar(n), op, IntConst(c))),
                st.sampled_from(list(variables)),
                st.integers(0, 3),
                st.sampled_from(["<", "="]),
            )
        )
    base = st.one_of(*atoms)

    def extend(children):
        return st.one_of(
            st.builds(Not, children),
            st.builds(lambda l, r: And((l, r)), children, children),
            st.builds(lambda l, r: Or((l, r)), children, children),
            st.builds(Implies, children, children),
            st.builds(Eventually, children, ivs),
            st.builds(Globally, children, ivs),
            st.builds(Until, children, children, ivs),
            st.builds(Release, children, children, ivs),
        )

    return st.recursive(base, extend, max_leaves=2 ** depth)


def prop_signals(
    max_pieces: int = 4,
    props: Sequence[str] = PROPS,
    variables: Optional[Dict[str, Tuple[int, int]]] = None,
) -> st.SearchStrategy[Signal]:
    if variables:
        names = sorted(variables)
        values = st.tuples(*(st.integers(variables[n][0], variables[n][1]) for n in names))
        state = st.builds(
            lambda chosen, vals: mk_state(chosen, **dict(zip(names, vals))),
            st.sets(st.sampled_from(list(props)), max_size=len(props)),
            values,
        )
    else:
        state = st.builds(
            lambda chosen: mk_state(chosen),
            st.sets(st.sampled_from(list(props)), max_size=len(props)),
        )
    piece = st.builds(
        lambda at, inner, dur: Piece(at, inner, dur),
        state, state,
        st.sampled_from([Fraction(1, 2), Fraction(1), Fraction(3, 2), Fraction(2)]),
    )
    return st.builds(
        lambda pre, lp: Signal(pre, lp),
        st.lists(piece, min_size=0, max_size=max_pieces),
        st.lists(piece, min_size=1, max_size=max_pieces),
    )
