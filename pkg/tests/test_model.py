"""Core model: constraint evaluation, guard normalization, assignments,
network validation."""

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tamc.model import (
    Assignment,
    CAnd,
    ClockAtom,
    ClockLit,
    CNot,
    COr,
    IntAdd,
    IntConst,
    IntSub,
    IntVar,
    Location,
    Network,
    SemanticsConfig,
    Sync,
    TimedAutomaton,
    Transition,
    VAnd,
    VarAtom,
    VarDecl,
    VNot,
    VOr,
    apply_assignments,
    eval_clock_constraint,
    eval_int_expr,
    eval_var_constraint,
    normalize_guard,
    validate_network,
)


# ---------------------------------------------------------------------------
# strong vs weak satisfaction


def lit(clock, op, bound, neg=False):
    return ClockLit(ClockAtom(clock, op, bound), negated=neg)


def test_weak_satisfaction_interior_point():
    # x<1 and not(y<1) and not(y=1) at x=0.8, y=1.2: strongly satisfied,
    # hence also weakly
    g = (lit("x", "<", 1), lit("y", "<", 1, neg=True), lit("y", "=", 1, neg=True))
    v = {"x": Fraction(4, 5), "y": Fraction(6, 5)}
    assert eval_clock_constraint(g, v, "strong")
    assert eval_clock_constraint(g, v, "weak")


def test_weak_satisfaction_boundary_point():
    # same constraint at x=1, y=1: only weakly satisfied
    g = (lit("x", "<", 1), lit("y", "<", 1, neg=True), lit("y", "=", 1, neg=True))
    v = {"x": Fraction(1), "y": Fraction(1)}
    assert not eval_clock_constraint(g, v, "strong")
    assert eval_clock_constraint(g, v, "weak")


def test_weak_equality_never_holds():
    g = (lit("x", "=", 3),)
    assert eval_clock_constraint(g, {"x": Fraction(3)}, "strong")
    assert not eval_clock_constraint(g, {"x": Fraction(3)}, "weak")


def test_weak_negated_equality_always_holds():
    g = (lit("x", "=", 3, neg=True),)
    assert not eval_clock_constraint(g, {"x": Fraction(3)}, "strong")
    assert eval_clock_constraint(g, {"x": Fraction(3)}, "weak")


def test_weak_closures_of_upper_and_lower_bounds():
    le = (lit("x", "<=", 2),)
    lt = (lit("x", "<", 2),)
    gt = (lit("x", "<=", 2, neg=True),)
    ge = (lit("x", "<", 2, neg=True),)
    at2 = {"x": Fraction(2)}
    for g in (le, lt, gt, ge):
        assert eval_clock_constraint(g, at2, "weak")
    assert eval_clock_constraint(le, at2, "strong")
    assert not eval_clock_constraint(lt, at2, "strong")
    assert not eval_clock_constraint(gt, at2, "strong")
    assert eval_clock_constraint(ge, at2, "strong")


def test_weak_mode_rejects_disjunctions():
    g = COr((ClockAtom("x", "<", 1), ClockAtom("x", "=", 2)))
    with pytest.raises(ValueError):
        eval_clock_constraint(g, {"x": Fraction(0)}, "weak")


# ---------------------------------------------------------------------------
# guard normalization


def test_normalize_negated_equality_splits():
    out = normalize_guard(CNot(ClockAtom("x", "=", 2)))
    assert out == [
        (lit("x", "<", 2),),
        (lit("x", "<", 2, neg=True), lit("x", "=", 2, neg=True)),
    ]


def test_normalize_negated_conjunction_is_decision_list():
    e = CNot(CAnd((ClockAtom("x", "<", 1), ClockAtom("y", "<", 2))))
    out = normalize_guard(e)
    # not(A and B) -> [not A] u [A and not B], in order
    assert out == [
        (lit("x", "<", 1, neg=True),),
        (lit("x", "<", 1), lit("y", "<", 2, neg=True)),
    ]


def test_normalize_disjunction_disjointifies():
    e = COr((ClockAtom("x", "<", 3), ClockAtom("y", "<", 1)))
    out = normalize_guard(e)
    assert out == [
        (lit("x", "<", 3),),
        (lit("x", "<", 3, neg=True), lit("y", "<", 1)),
    ]


clock_exprs = st.recursive(
    st.builds(
        ClockAtom,
        st.sampled_from(["x", "y"]),
        st.sampled_from(["<", "<=", "="]),
        st.integers(0, 4),
    ),
    lambda ch: st.one_of(
        st.builds(CNot, ch),
        st.builds(lambda a, b: CAnd((a, b)), ch, ch),
        st.builds(lambda a, b: COr((a, b)), ch, ch),
    ),
    max_leaves=6,
)

valuations = st.fixed_dictionaries(
    {
        "x": st.fractions(min_value=0, max_value=5, max_denominator=4),
        "y": st.fractions(min_value=0, max_value=5, max_denominator=4),
    }
)


@settings(max_examples=300, deadline=None)
@given(clock_exprs, valuations)
def test_normalized_guards_cover_and_are_disjoint(e, v):
    disjuncts = normalize_guard(e)
    truths = [eval_clock_constraint(g, v, "strong") for g in disjuncts]
    assert sum(truths) <= 1, "normalized guards must be pairwise disjoint"
    assert any(truths) == eval_clock_constraint(e, v, "strong")


# ---------------------------------------------------------------------------
# integer side


def test_int_expr_evaluation():
    e = IntSub(IntAdd(IntVar("n"), IntConst(3)), IntVar("m"))
    assert eval_int_expr(e, {"n": 2, "m": 4}) == 1


def test_var_constraint_evaluation():
    xi = VAnd((VarAtom(IntVar("n"), "<", IntConst(3)), VNot(VarAtom(IntVar("m"), "=", IntConst(0)))))
    assert eval_var_constraint(xi, {"n": 2, "m": 1})
    assert not eval_var_constraint(xi, {"n": 2, "m": 0})
    assert not eval_var_constraint(xi, {"n": 3, "m": 1})
    assert eval_var_constraint(VOr(()), {"n": 0, "m": 0}) is False
    assert eval_var_constraint(VAnd(()), {}) is True


def test_assignments_read_the_old_valuation():
    # n and m swap: right-hand sides see pre-update values
    out = apply_assignments(
        (Assignment("n", IntVar("m")), Assignment("m", IntVar("n"))),
        {"n": 1, "m": 7},
    )
    assert out == {"n": 7, "m": 1}


def test_conflicting_assignments_are_rejected():
    assert apply_assignments(
        (Assignment("n", IntConst(1)), Assignment("n", IntConst(2))), {"n": 0}
    ) is None
    # two writers agreeing on the value is fine
    assert apply_assignments(
        (Assignment("n", IntConst(1)), Assignment("n", IntConst(1))), {"n": 0}
    ) == {"n": 1}


# ---------------------------------------------------------------------------
# network plumbing


def _net(**kw):
    a = TimedAutomaton(
        name="p",
        locations=(Location("q0"), Location("q1")),
        initial="q0",
        transitions=(Transition("q0", "q1"),),
        clocks=("x",),
    )
    return Network((a,), **kw)


def test_validate_network_accepts_simple_net():
    assert validate_network(_net()) == []


def test_validate_network_flags_unknown_references():
    a = TimedAutomaton(
        name="p",
        locations=(Location("q0"),),
        initial="q0",
        transitions=(Transition("q0", "nowhere"),),
    )
    msgs = validate_network(Network((a,)))
    assert any("nowhere" in m for m in msgs)


def test_validate_network_flags_mixed_channel_families():
    a = TimedAutomaton(
        name="p", initial="q0",
        locations=(Location("q0"), Location("q1")),
        transitions=(Transition("q0", "q1", sync=Sync("c", "!")),),
    )
    b = TimedAutomaton(
        name="q", initial="q0",
        locations=(Location("q0"), Location("q1")),
        transitions=(Transition("q0", "q1", sync=Sync("c", "@")),),
    )
    msgs = validate_network(Network((a, b)))
    assert any("c" in m and "famil" in m for m in msgs)


def test_validate_network_flags_bad_initial_value():
    assert validate_network(_net(variables=(VarDecl("n", 0, 3, 0),))) == []
    msgs = validate_network(_net(variables=(VarDecl("n", 0, 3, 7),)))
    assert any("n" in m and "7" in m for m in msgs)
    with pytest.raises(ValueError):
        VarDecl("n", 3, 0, 0)  # empty domain


def test_semantics_config_validation():
    SemanticsConfig()
    SemanticsConfig(edges="unrestricted", encoding="general")
    with pytest.raises(ValueError):
        SemanticsConfig(edges="open-closed")  # lorc needs closed-open
    with pytest.raises(ValueError):
        SemanticsConfig(liveness="nonsense")
    with pytest.raises(ValueError):
        SemanticsConfig(liveness={"weak-guard", "nonsense"})


def test_semantics_config_liveness_is_a_set():
    # a bare string is convenience for a one-element selection
    assert SemanticsConfig(liveness="strong-guard").liveness == {"strong-guard"}
    both = SemanticsConfig(liveness={"weak-transition", "strong-guard"})
    assert both.liveness == frozenset({"weak-transition", "strong-guard"})
    # no progress requirement at all is a legal configuration
    assert SemanticsConfig(liveness=()).liveness == frozenset()
