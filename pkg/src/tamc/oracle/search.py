"""Brute-force counterexample search and random trace generation.

Both walk the step semantics directly (via the validation helpers), so they
are slow but trustworthy.  Tests use them on deliberately tiny networks to
referee the solver pipeline from the other side.
"""

from __future__ import annotations

import itertools
import random
from fractions import Fraction
from typing import Iterable, List, Optional, Sequence, Tuple

from ..mitl import MitlFormula
from ..model import Network, SemanticsConfig
from .mitleval import eval_mitl_signal
from .traces import (
    EDGE_CLOSED_OPEN,
    EDGE_OPEN_CLOSED,
    Config,
    Move,
    Trace,
    TracePosition,
    apply_position,
    initial_config,
    trace_to_signal,
    validate_trace,
)


def _allowed_edges(config: SemanticsConfig) -> Tuple[str, ...]:
    if config.edges == "closed-open":
        return (EDGE_CLOSED_OPEN,)
    if config.edges == "open-closed":
        return (EDGE_OPEN_CLOSED,)
    return (EDGE_CLOSED_OPEN, EDGE_OPEN_CLOSED)


def _candidate_vectors(
    net: Network, at: Config, config: SemanticsConfig, cap: int = 4096
) -> List[Tuple[Optional[Move], ...]]:
    """All move vectors whose individual guards pass at the instant (the full
    step/sync checks are applied by the caller)."""
    from .traces import _enabled  # shared enabledness convention

    options: List[List[Optional[Move]]] = []
    for k, auto in enumerate(net.automata):
        opts: List[Optional[Move]] = [None]
        for ti, t in enumerate(auto.transitions):
            if t.src == at.locs[k] and _enabled(t, at):
                for edge in _allowed_edges(config):
                    opts.append(Move(ti, edge))
        options.append(opts)
    vectors = []
    for combo in itertools.product(*options):
        vectors.append(tuple(combo))
        if len(vectors) >= cap:
            break
    return vectors


def _position_ok(
    net: Network, cfg: Config, pos: TracePosition, config: SemanticsConfig
) -> Optional[Config]:
    """Apply one position and run the per-step checks; None if anything fails."""
    from .traces import _check_invariants_weak, _check_step

    errs: List[str] = []
    at, after = apply_position(net, cfg, pos)
    _check_invariants_weak(net, at, "", errs)
    _check_step(net, cfg, at, after, pos, "", config, errs)
    return None if errs else after


def search_counterexample(
    net: Network,
    formula: MitlFormula,
    config: Optional[SemanticsConfig] = None,
    max_positions: int = 6,
    delays: Sequence[Fraction | int] = (1,),
    max_nodes: int = 20000,
) -> Optional[Trace]:
    """Depth-first search for a valid lasso trace whose signal falsifies the
    formula at time zero.  Returns the trace, or None if the bounded search
    space contains no counterexample."""
    config = config or SemanticsConfig()
    grid = [Fraction(d) for d in delays]
    budget = [max_nodes]

    def dfs(cfg: Config, positions: List[TracePosition], seen: List[Config]) -> Optional[Trace]:
        if budget[0] <= 0:
            return None
        budget[0] -= 1
        # try to close a lasso at every matching earlier configuration
        for j, old in enumerate(seen):
            if positions and old.locs == cfg.locs and old.vars == cfg.vars:
                cand = Trace(tuple(positions), loop=j)
                if not validate_trace(net, cand, config):
                    sig = trace_to_signal(net, cand)
                    if not eval_mitl_signal(formula, sig, 0):
                        return cand
        if len(positions) >= max_positions:
            return None
        for delay in grid:
            probe = Config(cfg.locs, {x: v + delay for x, v in cfg.clocks.items()}, dict(cfg.vars))
            for vec in _candidate_vectors(net, probe, config):
                pos = TracePosition(delay, vec)
                after = _position_ok(net, cfg, pos, config)
                if after is None:
                    continue
                found = dfs(after, positions + [pos], seen + [cfg])
                if found is not None:
                    return found
        return None

    return dfs(initial_config(net), [], [])


def random_trace(
    net: Network,
    rng: random.Random,
    config: Optional[SemanticsConfig] = None,
    positions: int = 6,
    delays: Sequence[Fraction | int] = (1, 2),
    attempts: int = 200,
) -> Optional[Trace]:
    """Random valid lasso trace (random walk + loop closure), or None."""
    config = config or SemanticsConfig()
    grid = [Fraction(d) for d in delays]

    for _ in range(attempts):
        cfg = initial_config(net)
        walk: List[TracePosition] = []
        seen: List[Config] = []
        ok = True
        for _step in range(positions):
            seen.append(cfg.copy())
            delay = rng.choice(grid)
            probe = Config(
                cfg.locs, {x: v + delay for x, v in cfg.clocks.items()}, dict(cfg.vars)
            )
            vectors = _candidate_vectors(net, probe, config)
            rng.shuffle(vectors)
            placed = False
            for vec in vectors:
                pos = TracePosition(delay, vec)
                after = _position_ok(net, cfg, pos, config)
                if after is not None:
                    walk.append(pos)
                    cfg = after
                    placed = True
                    break
            if not placed:
                ok = False
                break
        if not ok or not walk:
            continue
        # close the lasso wherever possible, preferring long loops
        for j in range(len(seen)):
            if seen[j].locs == cfg.locs and seen[j].vars == cfg.vars:
                cand = Trace(tuple(walk), loop=j)
                if not validate_trace(net, cand, config):
                    return cand
    return None
