"""Network traces and their validation against the step semantics.

A trace alternates positive delays with discrete super-steps.  Each discrete
super-step is a vector with one entry per automaton: either ``None`` (the
automaton stays put) or a :class:`Move` naming a transition index plus the
edge kind of the induced signal discontinuity:

* ``"]("``  closed-open: at the switching instant the automaton still shows
  its old location/values (strong source invariant, weak target invariant);
* ``")["``  open-closed: at the instant the new location/values already hold
  (weak source invariant, strong target invariant).

``validate_trace`` re-checks every rule the solver pipeline is supposed to
enforce -- guards, invariants (weak at delay endpoints), resets, conflicting
updates, synchronization discipline, edge restrictions, update/edge
consistency across automata, loop well-formedness and the selected liveness
condition -- and returns a list of human-readable violations (empty = valid).
It is written directly from the step relation, independent of the encoder.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from ..model import (
    ClockAtom,
    ClockLit,
    Network,
    SemanticsConfig,
    Transition,
    apply_assignments,
    eval_clock_constraint,
    eval_var_constraint,
    eval_int_expr,
)
from .signals import Piece, Signal, State

EDGE_CLOSED_OPEN = "]("
EDGE_OPEN_CLOSED = ")["
EDGES = (EDGE_CLOSED_OPEN, EDGE_OPEN_CLOSED)


@dataclass(frozen=True)
class Move:
    transition: int
    edge: str

    def __post_init__(self) -> None:
        if self.edge not in EDGES:
            raise ValueError(f"bad edge kind {self.edge!r}")


@dataclass(frozen=True)
class TracePosition:
    """One delay followed by one discrete super-step."""

    delay: Fraction
    moves: Tuple[Optional[Move], ...]


@dataclass(frozen=True)
class Trace:
    """Delay/step alternation; `loop` is the position index the run revisits
    after the last position (a lasso).  Without a loop the final configuration
    simply persists forever."""

    positions: Tuple[TracePosition, ...]
    loop: Optional[int] = None

    def __post_init__(self) -> None:
        if not self.positions:
            raise ValueError("a trace needs at least one position")
        if self.loop is not None and not (0 <= self.loop < len(self.positions)):
            raise ValueError("loop index out of range")


@dataclass
class Config:
    locs: Tuple[str, ...]
    clocks: Dict[str, Fraction]
    vars: Dict[str, int]

    def copy(self) -> "Config":
        return Config(self.locs, dict(self.clocks), dict(self.vars))


def initial_config(net: Network) -> Config:
    locs = tuple(a.initial for a in net.automata)
    clocks = {x: Fraction(0) for x in net.all_clocks}
    return Config(locs, clocks, net.initial_var_valuation())


def _labels(net: Network, locs: Sequence[str]) -> frozenset[str]:
    out: set[str] = set()
    for auto, name in zip(net.automata, locs):
        out.update(auto.location(name).labels)
    return frozenset(out)


def observation(net: Network, cfg: Config) -> State:
    return State.make(_labels(net, cfg.locs), cfg.vars)


def max_clock_constant(net: Network) -> int:
    """Largest constant compared against any clock anywhere in the network."""
    best = 0

    def scan_guard(g) -> None:
        nonlocal best
        for lit in g:
            best = max(best, lit.atom.bound)

    for auto in net.automata:
        for loc in auto.locations:
            scan_guard(loc.invariant)
        for t in auto.transitions:
            scan_guard(t.clock_guard)
    return best


# ---------------------------------------------------------------------------
# simulation


def apply_position(
    net: Network, cfg: Config, pos: TracePosition
) -> Tuple[Config, Config]:
    """Apply delay+step without validation.  Returns (at_instant, after):
    `at_instant` holds post-delay clocks with the old locations/vars, `after`
    is the successor configuration."""
    at = Config(cfg.locs, {x: v + pos.delay for x, v in cfg.clocks.items()}, dict(cfg.vars))
    new_locs = list(at.locs)
    new_clocks = dict(at.clocks)
    assignments = []
    for k, mv in enumerate(pos.moves):
        if mv is None:
            continue
        if not (0 <= mv.transition < len(net.automata[k].transitions)):
            continue  # unknown index; validation reports it
        t = net.automata[k].transitions[mv.transition]
        new_locs[k] = t.dst
        for x in t.resets:
            new_clocks[x] = Fraction(0)
        assignments.extend(t.updates)
    new_vars = apply_assignments(assignments, at.vars)
    if new_vars is None:
        new_vars = dict(at.vars)  # conflicting updates; validation reports it
    return at, Config(tuple(new_locs), new_clocks, new_vars)


def trace_configs(net: Network, trace: Trace) -> List[Config]:
    """Configurations c_0 .. c_m (before each position, plus the final one)."""
    cfgs = [initial_config(net)]
    for pos in trace.positions:
        _, after = apply_position(net, cfgs[-1], pos)
        cfgs.append(after)
    return cfgs


# ---------------------------------------------------------------------------
# validation


def _check_invariants_weak(net: Network, cfg: Config, where: str, errs: List[str]) -> None:
    for k, auto in enumerate(net.automata):
        inv = auto.location(cfg.locs[k]).invariant
        if not eval_clock_constraint(inv, cfg.clocks, mode="weak"):
            errs.append(f"{where}: invariant of {auto.name}.{cfg.locs[k]} weakly violated")


def _check_invariants_strong(net: Network, cfg: Config, where: str, errs: List[str]) -> None:
    for k, auto in enumerate(net.automata):
        inv = auto.location(cfg.locs[k]).invariant
        if not eval_clock_constraint(inv, cfg.clocks, mode="strong"):
            errs.append(f"{where}: invariant of {auto.name}.{cfg.locs[k]} violated")


def _enabled(t: Transition, at: Config) -> bool:
    """Guard enabledness at an instant: clocks post-delay, variables pre-update."""
    return eval_clock_constraint(t.clock_guard, at.clocks, mode="strong") and eval_var_constraint(
        t.var_guard, at.vars
    )


def _check_step(
    net: Network,
    cfg: Config,
    at: Config,
    after: Config,
    pos: TracePosition,
    where: str,
    config: SemanticsConfig,
    errs: List[str],
) -> None:
    moves = pos.moves
    if len(moves) != len(net.automata):
        errs.append(f"{where}: move vector has wrong arity")
        return

    fired: List[Tuple[int, Move, Transition]] = []
    for k, mv in enumerate(moves):
        auto = net.automata[k]
        if mv is None:
            # stationary automaton: strong invariant at the instant, before
            # and after everyone else's resets/updates
            inv = auto.location(cfg.locs[k]).invariant
            if not eval_clock_constraint(inv, at.clocks, mode="strong"):
                errs.append(f"{where}: {auto.name} idles but invariant fails at instant")
            if not eval_clock_constraint(inv, after.clocks, mode="strong"):
                errs.append(f"{where}: {auto.name} idles but invariant fails after step")
            continue
        if not (0 <= mv.transition < len(auto.transitions)):
            errs.append(f"{where}: {auto.name} fires unknown transition {mv.transition}")
            continue
        t = auto.transitions[mv.transition]
        fired.append((k, mv, t))
        if t.src != cfg.locs[k]:
            errs.append(
                f"{where}: {auto.name} fires {t.src}->{t.dst} from {cfg.locs[k]}"
            )
        if config.edges == "closed-open" and mv.edge != EDGE_CLOSED_OPEN:
            errs.append(f"{where}: {auto.name} uses edge {mv.edge} but only ]( is allowed")
        if config.edges == "open-closed" and mv.edge != EDGE_OPEN_CLOSED:
            errs.append(f"{where}: {auto.name} uses edge {mv.edge} but only )[ is allowed")
        if not eval_clock_constraint(t.clock_guard, at.clocks, mode="strong"):
            errs.append(f"{where}: {auto.name} clock guard fails for {t.src}->{t.dst}")
        if not eval_var_constraint(t.var_guard, at.vars):
            errs.append(f"{where}: {auto.name} variable guard fails for {t.src}->{t.dst}")
        src_inv = auto.location(t.src).invariant
        dst_inv = auto.location(t.dst).invariant
        if mv.edge == EDGE_CLOSED_OPEN:
            if not eval_clock_constraint(src_inv, at.clocks, mode="strong"):
                errs.append(f"{where}: {auto.name} source invariant fails (]( edge)")
            if not eval_clock_constraint(dst_inv, after.clocks, mode="weak"):
                errs.append(f"{where}: {auto.name} target invariant weakly fails (]( edge)")
        else:
            if not eval_clock_constraint(src_inv, at.clocks, mode="weak"):
                errs.append(f"{where}: {auto.name} source invariant weakly fails ()[ edge)")
            if not eval_clock_constraint(dst_inv, after.clocks, mode="strong"):
                errs.append(f"{where}: {auto.name} target invariant fails ()[ edge)")

    # conflicting simultaneous updates
    assignments = []
    for _, _, t in fired:
        assignments.extend(t.updates)
    if apply_assignments(assignments, at.vars) is None:
        errs.append(f"{where}: simultaneous updates assign conflicting values")

    # domain discipline
    for name, val in after.vars.items():
        decl = net.var_decl(name)
        if not (decl.lo <= val <= decl.hi):
            errs.append(f"{where}: {name}={val} leaves its domain [{decl.lo},{decl.hi}]")

    # update/edge consistency: distinct automata touching the same variable
    # at the same instant must agree on the edge kind
    touched: Dict[str, str] = {}
    for k, mv, t in fired:
        for n in t.updated_vars:
            if n in touched and touched[n] != mv.edge:
                errs.append(f"{where}: variable {n} updated with both edge kinds")
            touched.setdefault(n, mv.edge)

    _check_sync(net, fired, at, where, errs)


def _check_sync(
    net: Network,
    fired: List[Tuple[int, Move, Transition]],
    at: Config,
    where: str,
    errs: List[str],
) -> None:
    by_channel: Dict[str, Dict[str, List[Tuple[int, Move, Transition]]]] = {}
    for k, mv, t in fired:
        if t.sync is not None:
            by_channel.setdefault(t.sync.channel, {}).setdefault(t.sync.role, []).append(
                (k, mv, t)
            )
    firing_automata = {k for k, _, _ in fired}

    for alpha, roles in sorted(by_channel.items()):
        sends = roles.get("!", [])
        recvs = roles.get("?", [])
        if sends or recvs:
            if len(sends) != 1 or len(recvs) != 1:
                errs.append(
                    f"{where}: channel {alpha} needs exactly one !/? pair "
                    f"(got {len(sends)} senders, {len(recvs)} receivers)"
                )
            elif sends[0][1].edge != recvs[0][1].edge:
                errs.append(f"{where}: channel {alpha} pair uses mismatched edge kinds")

        bsends = roles.get("#", [])
        brecvs = roles.get("@", [])
        if len(bsends) > 1:
            errs.append(f"{where}: broadcast {alpha} has {len(bsends)} simultaneous senders")
        if brecvs and not bsends:
            errs.append(f"{where}: broadcast receivers on {alpha} without a sender")
        if len(bsends) == 1:
            ks, mvs, _ = bsends[0]
            receiving = {k for k, _, _ in brecvs}
            for k2, mv2, _ in brecvs:
                if mv2.edge != mvs.edge:
                    errs.append(
                        f"{where}: broadcast {alpha} receiver {net.automata[k2].name} "
                        f"uses a different edge kind than the sender"
                    )
            for k2, auto in enumerate(net.automata):
                if k2 == ks or k2 in receiving:
                    continue
                # must not have any enabled receiving transition it ignored
                loc = at.locs[k2]
                for ti, t2 in enumerate(auto.transitions):
                    if (
                        t2.sync is not None
                        and t2.sync.channel == alpha
                        and t2.sync.role == "@"
                        and t2.src == loc
                        and _enabled(t2, at)
                    ):
                        errs.append(
                            f"{where}: broadcast {alpha} sent but {auto.name} ignores "
                            f"its enabled receive {t2.src}->{t2.dst}"
                        )
                        break

        osends = roles.get("&", [])
        orecvs = roles.get("*", [])
        if osends and not orecvs:
            errs.append(f"{where}: one-to-many send on {alpha} with no receiver")
        if orecvs and not osends:
            errs.append(f"{where}: one-to-many receivers on {alpha} without a sender")


def _clock_signature(cfg: Config, cap: int) -> Tuple:
    items = []
    for x in sorted(cfg.clocks):
        v = cfg.clocks[x]
        items.append((x, v if v <= cap else None))
    return tuple(items)


def validate_trace(
    net: Network, trace: Trace, config: Optional[SemanticsConfig] = None
) -> List[str]:
    """All rule violations of the trace, as readable strings (empty = valid)."""
    config = config or SemanticsConfig()
    errs: List[str] = []
    cfg = initial_config(net)
    _check_invariants_strong(net, cfg, "position 0 (initial)", errs)

    def run_position(cfg: Config, pos: TracePosition, where: str) -> Config:
        if pos.delay <= 0:
            errs.append(f"{where}: delay must be positive")
            return cfg
        at, after = apply_position(net, cfg, pos)
        _check_invariants_weak(net, at, f"{where} (after delay)", errs)
        _check_step(net, cfg, at, after, pos, where, config, errs)
        return after

    configs = [cfg.copy()]
    for i, pos in enumerate(trace.positions):
        cfg = run_position(cfg, pos, f"position {i}")
        configs.append(cfg.copy())

    if trace.loop is None:
        # final configuration persists forever.  Delays check invariants
        # weakly at their endpoints only, so a negated atom (a lower bound)
        # can always be jumped past in a single delay; only a positive atom,
        # which bounds the clock from above, makes divergence impossible.
        for k, auto in enumerate(net.automata):
            inv = auto.location(cfg.locs[k]).invariant
            for lit in inv:
                if not lit.negated:
                    errs.append(
                        f"final configuration cannot idle forever: invariant of "
                        f"{auto.name}.{cfg.locs[k]} bounds clock {lit.atom.clock}"
                    )
        return errs

    # lasso: the loop target must be revisited exactly (locations+variables)
    start = configs[trace.loop]
    if cfg.locs != start.locs or cfg.vars != start.vars:
        errs.append(
            f"loop mismatch: configuration after position {len(trace.positions)-1} "
            f"differs from position {trace.loop}"
        )
        return errs

    # unroll laps until the clock signature at the loop head repeats, so every
    # guard/invariant is checked with every clock valuation it will ever see
    cap = max_clock_constant(net)
    loop_positions = trace.positions[trace.loop :]
    seen = {_clock_signature(cfg, cap)}
    lap = 0
    lap_checks: List[Tuple[Config, Config]] = []  # (cfg before, at instant)
    while True:
        lap += 1
        lap_checks = []
        for j, pos in enumerate(loop_positions):
            where = f"lap {lap} position {trace.loop + j}"
            if pos.delay <= 0:
                errs.append(f"{where}: delay must be positive")
                return errs
            at, after = apply_position(net, cfg, pos)
            _check_invariants_weak(net, at, f"{where} (after delay)", errs)
            _check_step(net, cfg, at, after, pos, where, config, errs)
            lap_checks.append((cfg.copy(), at))
            cfg = after
        if cfg.locs != start.locs or cfg.vars != start.vars:
            errs.append(f"lap {lap}: loop no longer closes")
            return errs
        sig = _clock_signature(cfg, cap)
        if sig in seen or lap > 10000:
            break
        seen.add(sig)

    _check_liveness(net, lap_checks, trace, config, errs)
    return errs


def _check_liveness(
    net: Network,
    lap_checks: List[Tuple[Config, Config]],
    trace: Trace,
    config: SemanticsConfig,
    errs: List[str],
) -> None:
    """Table-style liveness over one stabilized lap of the loop."""
    loop_positions = trace.positions[trace.loop :]
    moved = [False] * len(net.automata)
    for pos in loop_positions:
        for k, mv in enumerate(pos.moves):
            if mv is not None:
                moved[k] = True

    guard_live = [False] * len(net.automata)
    for cfg, at in lap_checks:
        for k, auto in enumerate(net.automata):
            if guard_live[k]:
                continue
            for t in auto.transitions_from(cfg.locs[k]):
                if _enabled(t, at):
                    guard_live[k] = True
                    break

    modes = config.liveness
    if "strong-transition" in modes:
        for k, ok in enumerate(moved):
            if not ok:
                errs.append(f"liveness: {net.automata[k].name} never moves in the loop")
    if "weak-transition" in modes:
        if not any(moved):
            errs.append("liveness: no automaton ever moves in the loop")
    if "strong-guard" in modes:
        for k, ok in enumerate(guard_live):
            if not ok:
                errs.append(
                    f"liveness: {net.automata[k].name} never has an enabled "
                    f"transition in the loop"
                )
    if "weak-guard" in modes:
        if not any(guard_live):
            errs.append("liveness: no automaton ever has an enabled transition in the loop")


# ---------------------------------------------------------------------------
# signal extraction


def instant_observation(
    net: Network, before: Config, after: Config, pos: TracePosition
) -> State:
    """Observation at a switching instant: closed-open movers and idlers show
    their old location, open-closed movers already show the new one; variables
    follow the edge kind of whoever updates them."""
    props: set[str] = set()
    for k, auto in enumerate(net.automata):
        mv = pos.moves[k]
        if mv is None or mv.edge == EDGE_CLOSED_OPEN:
            props.update(auto.location(before.locs[k]).labels)
        else:
            props.update(auto.location(after.locs[k]).labels)
    values: Dict[str, int] = {}
    edge_of: Dict[str, str] = {}
    for k, mv in enumerate(pos.moves):
        if mv is None:
            continue
        t = net.automata[k].transitions[mv.transition]
        for n in t.updated_vars:
            edge_of.setdefault(n, mv.edge)
    for n in before.vars:
        if edge_of.get(n) == EDGE_OPEN_CLOSED:
            values[n] = after.vars[n]
        else:
            values[n] = before.vars[n]
    return State.make(props, values)


def trace_to_signal(net: Network, trace: Trace) -> Signal:
    """Continuous observation of the trace as an ultimately periodic signal."""
    configs = trace_configs(net, trace)
    m = len(trace.positions)

    def piece(idx: int, at_state: State) -> Piece:
        return Piece(at_state, observation(net, configs[idx]), trace.positions[idx].delay)

    def blend(idx: int) -> State:
        return instant_observation(net, configs[idx], configs[idx + 1], trace.positions[idx])

    first = observation(net, configs[0])
    if trace.loop is None:
        prefix = [piece(0, first)]
        prefix += [piece(i, blend(i - 1)) for i in range(1, m)]
        tail_state = observation(net, configs[m])
        prefix.append(Piece(blend(m - 1), tail_state, Fraction(1)))
        return Signal(prefix, (Piece(tail_state, tail_state, Fraction(1)),))

    l = trace.loop
    prefix = [piece(0, first)]
    prefix += [piece(i, blend(i - 1)) for i in range(1, l + 1)]
    loop = [piece(i, blend(i - 1)) for i in range(l + 1, m)]
    loop.append(piece(l, blend(m - 1)))
    return Signal(prefix, loop)
