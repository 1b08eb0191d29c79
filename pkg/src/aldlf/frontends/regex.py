"""Path expressions and their Thompson-style compilation to path automata."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import count
from typing import Callable

from aldlf.syntax import (
    TRUE, FALSE, Formula, Future, Past, PathAutomaton, Prop, Test, Transition,
    TransitionLabel,
)


class PathExpression:
    __slots__ = ()


@dataclass(frozen=True)
class Concat(PathExpression):
    left: object
    right: object


@dataclass(frozen=True)
class Union(PathExpression):
    left: object
    right: object


@dataclass(frozen=True)
class Star(PathExpression):
    arg: object


@dataclass(frozen=True)
class Epsilon(PathExpression):
    pass


EPS = Epsilon()
# Leaves of a path expression are the transition labels themselves.
LEAVES = (Future, Past, Test)
_SKIP = Test(Prop(TRUE))


def map_leaves(e, fn: Callable[[TransitionLabel], TransitionLabel]):
    """Apply ``fn`` to every Future/Past/Test leaf of ``e``."""
    if isinstance(e, LEAVES):
        return fn(e)
    if isinstance(e, (Concat, Union)):
        return type(e)(map_leaves(e.left, fn), map_leaves(e.right, fn))
    if isinstance(e, Star):
        return Star(map_leaves(e.arg, fn))
    if isinstance(e, Epsilon):
        return e
    raise TypeError(f"not a path expression: {e!r}")


def map_tests(e, fn: Callable[[Formula], Formula]):
    return map_leaves(e, lambda lab: Test(fn(lab.formula)) if isinstance(lab, Test) else lab)


def regex_depth(e) -> int:
    if isinstance(e, (Concat, Union)):
        return 1 + max(regex_depth(e.left), regex_depth(e.right))
    if isinstance(e, Star):
        return 1 + regex_depth(e.arg)
    return 0


def regex_to_automaton(e) -> PathAutomaton:
    """Thompson construction; every epsilon edge is a ``true?`` test.

    States are consecutive integers, the start is the first and the single
    accepting state the last one created for the outermost expression.
    """
    fresh = count()
    edges: list[Transition] = []

    def build(x) -> tuple[int, int]:
        if isinstance(x, LEAVES):
            s, t = next(fresh), next(fresh)
            edges.append(Transition(s, x, t))
            return s, t
        if isinstance(x, Epsilon):
            s, t = next(fresh), next(fresh)
            edges.append(Transition(s, _SKIP, t))
            return s, t
        if isinstance(x, Concat):
            s1, t1 = build(x.left)
            s2, t2 = build(x.right)
            edges.append(Transition(t1, _SKIP, s2))
            return s1, t2
        if isinstance(x, Union):
            s = next(fresh)
            s1, t1 = build(x.left)
            s2, t2 = build(x.right)
            t = next(fresh)
            edges.extend([Transition(s, _SKIP, s1), Transition(s, _SKIP, s2),
                          Transition(t1, _SKIP, t), Transition(t2, _SKIP, t)])
            return s, t
        if isinstance(x, Star):
            s = next(fresh)
            s1, t1 = build(x.arg)
            t = next(fresh)
            edges.extend([Transition(s, _SKIP, s1), Transition(t1, _SKIP, s1),
                          Transition(t1, _SKIP, t), Transition(s, _SKIP, t)])
            return s, t
        raise TypeError(f"not a path expression: {x!r}")

    start, accept = build(e)
    states = sorted({q for tr in edges for q in (tr.source, tr.target)})
    touched = set(states)
    for q in range(max(start, accept) + 1):
        if q not in touched:
            edges.append(Transition(q, Test(Prop(FALSE)), q))
            states.append(q)
    return PathAutomaton(tuple(sorted(states)), frozenset(edges), start,
                         frozenset({accept}), source=e)
