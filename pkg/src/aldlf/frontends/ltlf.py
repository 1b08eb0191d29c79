"""LTL_f abstract syntax, its direct semantics, and translation into ALDL_f."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from aldlf import syntax as S
from aldlf.semantics import Trace


class LtlfFormula:
    __slots__ = ()


@dataclass(frozen=True)
class Atom(LtlfFormula):
    name: str

    def __post_init__(self):
        if not self.name:
            raise ValueError("atom names must be nonempty")


@dataclass(frozen=True)
class Const(LtlfFormula):
    value: bool


@dataclass(frozen=True)
class Not(LtlfFormula):
    arg: LtlfFormula


@dataclass(frozen=True)
class And(LtlfFormula):
    left: LtlfFormula
    right: LtlfFormula


@dataclass(frozen=True)
class Or(LtlfFormula):
    left: LtlfFormula
    right: LtlfFormula


@dataclass(frozen=True)
class Next(LtlfFormula):
    """Strong next: false at the last instant."""

    arg: LtlfFormula


@dataclass(frozen=True)
class Until(LtlfFormula):
    left: LtlfFormula
    right: LtlfFormula


def ltlf_size(f: LtlfFormula) -> int:
    if isinstance(f, (Atom, Const)):
        return 1
    if isinstance(f, (Not, Next)):
        return 3 + ltlf_size(f.arg)
    return 3 + ltlf_size(f.left) + ltlf_size(f.right)


def ltlf_atoms(f: LtlfFormula) -> set[str]:
    if isinstance(f, Atom):
        return {f.name}
    if isinstance(f, Const):
        return set()
    if isinstance(f, (Not, Next)):
        return ltlf_atoms(f.arg)
    return ltlf_atoms(f.left) | ltlf_atoms(f.right)


def eval_ltlf(f: LtlfFormula, t: Trace, i: int = 0) -> bool:
    if not isinstance(t, Trace):
        t = Trace(t)
    t.check_position(i)
    n = len(t)

    @lru_cache(maxsize=None)
    def holds(g: LtlfFormula, k: int) -> bool:
        if isinstance(g, Atom):
            return g.name in t[k]
        if isinstance(g, Const):
            return g.value
        if isinstance(g, Not):
            return not holds(g.arg, k)
        if isinstance(g, And):
            return holds(g.left, k) and holds(g.right, k)
        if isinstance(g, Or):
            return holds(g.left, k) or holds(g.right, k)
        if isinstance(g, Next):
            return k + 1 < n and holds(g.arg, k + 1)
        if isinstance(g, Until):
            for j in range(k, n):
                if holds(g.right, j):
                    return True
                if not holds(g.left, j):
                    return False
            return False
        raise TypeError(f"not an LTL_f formula: {g!r}")

    return holds(f, i)


NEXT_AUTOMATON = S.make_automaton(
    ("r0", "r1"), [S.Transition("r0", S.Future(S.TRUE), "r1")], "r0", {"r1"}, name="N"
)


def until_automaton(guard: S.Formula) -> S.PathAutomaton:
    """Loop ``guard?; true`` any number of times, accepting at the loop head."""
    return S.make_automaton(
        ("r0", "r1"),
        [S.Transition("r0", S.Test(guard), "r1"), S.Transition("r1", S.Future(S.TRUE), "r0")],
        "r0",
        {"r0"},
    )


def ltlf_to_aldlf(f: LtlfFormula) -> S.Formula:
    if isinstance(f, Atom):
        return S.Prop(S.Atom(f.name))
    if isinstance(f, Const):
        return S.Prop(S.TRUE if f.value else S.FALSE)
    if isinstance(f, Not):
        return S.Not(ltlf_to_aldlf(f.arg))
    if isinstance(f, And):
        return S.And(ltlf_to_aldlf(f.left), ltlf_to_aldlf(f.right))
    if isinstance(f, Or):
        return S.Or(ltlf_to_aldlf(f.left), ltlf_to_aldlf(f.right))
    if isinstance(f, Next):
        return S.Diamond(NEXT_AUTOMATON, ltlf_to_aldlf(f.arg))
    if isinstance(f, Until):
        return S.Diamond(until_automaton(ltlf_to_aldlf(f.left)), ltlf_to_aldlf(f.right))
    raise TypeError(f"not an LTL_f formula: {f!r}")
