"""Acceptance of a 2AFW on a word via a Büchi game.

The Protagonist owns configurations ``(q, u)`` and picks a minimal model of
``delta(q, w[u])``; the Antagonist owns ``(q, u, model)`` and picks one move
of the model.  The Protagonist wins plays that reach the accepting sink or
visit accepting configurations infinitely often.
"""

from __future__ import annotations

from collections import defaultdict, deque
from dataclasses import dataclass, field
from typing import Hashable

from aldlf.afw import Afw
from aldlf.semantics import Trace

PROTAGONIST, ANTAGONIST = 0, 1
ACCEPT_SINK = "ACCEPT"
REJECT_SINK = "REJECT"


@dataclass
class GameGraph:
    owner: dict = field(default_factory=dict)
    succ: dict = field(default_factory=dict)
    targets: set = field(default_factory=set)

    def add(self, node: Hashable, owner: int, successors, target: bool = False):
        self.owner[node] = owner
        self.succ[node] = list(successors)
        if target:
            self.targets.add(node)

    def predecessors(self) -> dict:
        pred = defaultdict(list)
        for v, ws in self.succ.items():
            for w in ws:
                pred[w].append(v)
        return pred


def attractor(g: GameGraph, arena: set, goal: set, player: int, pred=None) -> set:
    """Nodes of ``arena`` from which ``player`` can force a visit to ``goal``."""
    pred = pred if pred is not None else g.predecessors()
    attr = set(goal & arena)
    remaining = {v: sum(1 for w in g.succ[v] if w in arena)
                 for v in arena if g.owner[v] != player}
    queue = deque(attr)
    while queue:
        w = queue.popleft()
        for v in pred.get(w, ()):
            if v not in arena or v in attr:
                continue
            if g.owner[v] == player:
                attr.add(v)
                queue.append(v)
            else:
                remaining[v] -= 1
                if remaining[v] == 0:
                    attr.add(v)
                    queue.append(v)
    return attr


def solve_buchi_game(g: GameGraph) -> set:
    """The Protagonist's winning region (classical iterated attractors)."""
    pred = g.predecessors()
    arena = set(g.owner)
    while True:
        reach = attractor(g, arena, g.targets, PROTAGONIST, pred)
        escape = arena - reach
        if not escape:
            return arena
        arena -= attractor(g, arena, escape, ANTAGONIST, pred)


def build_game(a: Afw, w: Trace, start_pos: int = 0) -> GameGraph:
    """The part of the acceptance game reachable from ``(q0, start_pos)``."""
    n = len(w)
    g = GameGraph()
    g.add(ACCEPT_SINK, PROTAGONIST, [ACCEPT_SINK], target=True)
    g.add(REJECT_SINK, PROTAGONIST, [REJECT_SINK])
    start = (a.start, start_pos)
    seen = {start}
    queue = deque([start])
    while queue:
        node = queue.popleft()
        q, u = node
        models = a.models(q, w[u])
        if models == ((),):
            succ = [ACCEPT_SINK]
        elif not models:
            succ = [REJECT_SINK]
        else:
            succ = []
            for m in models:
                choice = (q, u, m)
                moves = []
                for q2, d in m:
                    v = u + d
                    if 0 <= v < n:
                        moves.append((q2, v))
                    else:
                        # leaving the word: vacuous for accepting (box) states
                        moves.append(ACCEPT_SINK if q2 in a.accepting else REJECT_SINK)
                g.add(choice, ANTAGONIST, moves)
                succ.append(choice)
                for x in moves:
                    if x not in seen and isinstance(x, tuple):
                        seen.add(x)
                        queue.append(x)
        g.add(node, PROTAGONIST, succ, target=q in a.accepting)
    return g


def accepts_game(a: Afw, w: Trace, start_pos: int = 0) -> bool:
    if not isinstance(w, Trace):
        w = Trace(w)
    w.check_position(start_pos)
    g = build_game(a, w, start_pos)
    return (a.start, start_pos) in solve_buchi_game(g)
