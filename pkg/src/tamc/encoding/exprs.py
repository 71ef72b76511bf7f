"""Translation of integer expressions and variable constraints.

Variables keep their model names in the formula, so no vocabulary is
needed here.  A ``primed`` set selects which variables are read at the
next position instead of the current one; update right-hand sides read
old values, so they translate with ``primed`` empty, while the assignment
target itself is primed by the caller.
"""

from __future__ import annotations

from typing import AbstractSet

from tamc.cltloc import (
    Cnt,
    CntAdd,
    CntSub,
    CntTerm,
    Formula,
    IntCmp,
    Num,
    Nxt,
    conj,
    disj,
    neg,
)
from tamc.model import (
    IntAdd,
    IntConst,
    IntExpr,
    IntSub,
    IntVar,
    VAnd,
    VarAtom,
    VarConstraint,
    VNot,
    VOr,
)

_EMPTY: frozenset[str] = frozenset()


def cnt_term(e: IntExpr, primed: AbstractSet[str] = _EMPTY) -> CntTerm:
    if isinstance(e, IntConst):
        return Num(e.value)
    if isinstance(e, IntVar):
        return Nxt(e.name) if e.name in primed else Cnt(e.name)
    if isinstance(e, IntAdd):
        return CntAdd(cnt_term(e.left, primed), cnt_term(e.right, primed))
    if isinstance(e, IntSub):
        return CntSub(cnt_term(e.left, primed), cnt_term(e.right, primed))
    msg = f"unknown integer expression node {e!r}"
    raise TypeError(msg)


def encode_var_constraint(
    c: VarConstraint, primed: AbstractSet[str] = _EMPTY
) -> Formula:
    if isinstance(c, VarAtom):
        return IntCmp(cnt_term(c.lhs, primed), c.op, cnt_term(c.rhs, primed))
    if isinstance(c, VNot):
        return neg(encode_var_constraint(c.arg, primed))
    if isinstance(c, VAnd):
        return conj(*(encode_var_constraint(i, primed) for i in c.items))
    if isinstance(c, VOr):
        return disj(*(encode_var_constraint(i, primed) for i in c.items))
    msg = f"unknown variable constraint node {c!r}"
    raise TypeError(msg)
