"""Direct satisfaction relations over finite traces.

This is the reference oracle: every automaton construction in the package is
checked against it.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable, Sequence

from aldlf.syntax import (
    And, Atom, Box, Diamond, FalseProp, Formula, Future, Not, Or, PathAutomaton,
    Past, Prop, PropAnd, PropFormula, PropNot, PropOr, Test, TransitionLabel, TrueProp,
)

Interpretation = frozenset


@dataclass(frozen=True)
class Trace:
    """A nonempty finite sequence of interpretations (sets of atom names)."""

    instants: tuple

    def __init__(self, instants: Iterable[Iterable[str]]):
        inst = tuple(frozenset(x) for x in instants)
        if not inst:
            raise ValueError("a trace must have at least one instant")
        object.__setattr__(self, "instants", inst)

    def __len__(self):
        return len(self.instants)

    def __getitem__(self, i):
        return self.instants[i]

    def __iter__(self):
        return iter(self.instants)

    def check_position(self, i: int) -> None:
        if not isinstance(i, int) or not 0 <= i < len(self.instants):
            raise IndexError(f"position {i!r} outside trace of length {len(self.instants)}")


@dataclass(frozen=True)
class Walk:
    """A path-automaton walk: steps are (position, label) pairs taken in order."""

    start: int
    steps: tuple
    end: int

    def positions(self) -> list[int]:
        out = [self.start]
        for pos, label in self.steps:
            out.append(pos + _delta(label))
        return out


def _delta(label: TransitionLabel) -> int:
    if isinstance(label, Future):
        return 1
    if isinstance(label, Past):
        return -1
    return 0


def eval_prop(z: PropFormula, interp) -> bool:
    if isinstance(z, Atom):
        return z.name in interp
    if isinstance(z, TrueProp):
        return True
    if isinstance(z, FalseProp):
        return False
    if isinstance(z, PropNot):
        return not eval_prop(z.arg, interp)
    if isinstance(z, PropAnd):
        return eval_prop(z.left, interp) and eval_prop(z.right, interp)
    if isinstance(z, PropOr):
        return eval_prop(z.left, interp) or eval_prop(z.right, interp)
    raise TypeError(f"not a propositional formula: {z!r}")


class Evaluator:
    """Memoized evaluation of formulas and automata over one trace."""

    def __init__(self, trace: Trace):
        self.trace = trace
        self._memo: dict[tuple[Formula, int], bool] = {}
        self._reach: dict[tuple[PathAutomaton, int], frozenset] = {}

    def holds(self, f: Formula, i: int) -> bool:
        key = (f, i)
        hit = self._memo.get(key)
        if hit is None:
            hit = self._compute(f, i)
            self._memo[key] = hit
        return hit

    def _compute(self, f: Formula, i: int) -> bool:
        if isinstance(f, Prop):
            return eval_prop(f.prop, self.trace[i])
        if isinstance(f, Not):
            return not self.holds(f.arg, i)
        if isinstance(f, And):
            return self.holds(f.left, i) and self.holds(f.right, i)
        if isinstance(f, Or):
            return self.holds(f.left, i) or self.holds(f.right, i)
        if isinstance(f, Diamond):
            return any(self.holds(f.arg, j) for j in self.reachable(f.automaton, i))
        if isinstance(f, Box):
            return all(self.holds(f.arg, j) for j in self.reachable(f.automaton, i))
        raise TypeError(f"not a formula: {f!r}")

    def step(self, label: TransitionLabel, k: int) -> int | None:
        """Position after taking ``label`` at ``k``, or None if unavailable."""
        n = len(self.trace)
        if isinstance(label, Future):
            if k + 1 < n and eval_prop(label.prop, self.trace[k]):
                return k + 1
            return None
        if isinstance(label, Past):
            if k > 0 and eval_prop(label.prop, self.trace[k]):
                return k - 1
            return None
        return k if self.holds(label.formula, k) else None

    def search(self, a: PathAutomaton, i: int):
        """Breadth-first search over (state, position); returns parent map."""
        parent = {(a.start, i): None}
        queue = deque(parent)
        while queue:
            node = queue.popleft()
            r, k = node
            for t in a.outgoing(r):
                k2 = self.step(t.label, k)
                if k2 is None:
                    continue
                nxt = (t.target, k2)
                if nxt not in parent:
                    parent[nxt] = (node, t.label)
                    queue.append(nxt)
        return parent

    def reachable(self, a: PathAutomaton, i: int) -> frozenset:
        """All j with ``trace, i, j |= a``."""
        key = (a, i)
        hit = self._reach.get(key)
        if hit is None:
            hit = frozenset(k for (r, k) in self.search(a, i) if r in a.accepting)
            self._reach[key] = hit
        return hit


def _as_trace(t) -> Trace:
    return t if isinstance(t, Trace) else Trace(t)


def eval_formula(f: Formula, t: Trace | Sequence, i: int = 0) -> bool:
    t = _as_trace(t)
    t.check_position(i)
    return Evaluator(t).holds(f, i)


def eval_all(f: Formula, t: Trace | Sequence) -> list[bool]:
    """Truth value of ``f`` at every position of ``t``."""
    t = _as_trace(t)
    ev = Evaluator(t)
    return [ev.holds(f, i) for i in range(len(t))]


def sat_automaton(a: PathAutomaton, t: Trace | Sequence, i: int, j: int) -> bool:
    t = _as_trace(t)
    t.check_position(i)
    t.check_position(j)
    return j in Evaluator(t).reachable(a, i)


def find_walk(a: PathAutomaton, t: Trace | Sequence, i: int, j: int) -> Walk | None:
    """A shortest walk from ``(start, i)`` to an accepting state at ``j``."""
    t = _as_trace(t)
    t.check_position(i)
    t.check_position(j)
    parent = Evaluator(t).search(a, i)
    goals = [node for node in parent if node[1] == j and node[0] in a.accepting]
    if not goals:
        return None
    # BFS insertion order is by distance, so the first goal is a nearest one.
    node = goals[0]
    steps = []
    while parent[node] is not None:
        prev, label = parent[node]
        steps.append((prev[1], label))
        node = prev
    return Walk(i, tuple(reversed(steps)), j)


def replay_walk(a: PathAutomaton, t: Trace | Sequence, walk: Walk) -> bool:
    """Check that ``walk`` is a legal accepting walk of ``a`` on ``t``."""
    t = _as_trace(t)
    ev = Evaluator(t)
    states = {a.start}
    pos = walk.start
    for at, label in walk.steps:
        if at != pos:
            return False
        nxt = ev.step(label, pos)
        if nxt is None:
            return False
        states = {tr.target for s in states for tr in a.outgoing(s) if tr.label == label}
        if not states:
            return False
        pos = nxt
    return pos == walk.end and bool(states & a.accepting)
