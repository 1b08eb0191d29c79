"""Strategy words, annotations, certificates and the on-the-fly NFW.

A strategy word ``gamma`` assigns to every position a set of triples
``(q, d, q2)``: at that position state ``q`` moves to ``q2`` with head shift
``d``.  An annotation ``eta`` records, per position, triples ``(q, f, q2)``
meaning that from ``q`` the strategy can return to the same position in
``q2``; ``f`` is 1 iff an accepting state is entered on the way.
"""

from __future__ import annotations

from collections import defaultdict, deque
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Sequence

import networkx as nx

from aldlf.afw import Afw, satisfies
from aldlf.semantics import Trace

Triple = tuple  # (state, direction or flag, state)

INITIAL = "initial"
READY = "ready"
PENDING = "pending"
REJECTED = "rejected"


def origins(letter: Iterable[Triple]) -> frozenset:
    return frozenset(q for q, _, _ in letter)


def moves_of(letter: Iterable[Triple], q) -> frozenset:
    return frozenset((q2, d) for p, d, q2 in letter if p == q)


# --------------------------------------------------------------- annotations


def _compose(eta: set) -> set:
    """Transitive closure of flagged pairs, flags combined by max."""
    out = set(eta)
    changed = True
    while changed:
        changed = False
        succ = defaultdict(set)
        for q, f, q2 in out:
            succ[q].add((f, q2))
        for q, f1, q2 in list(out):
            for f2, q3 in succ.get(q2, ()):
                t = (q, max(f1, f2), q3)
                if t not in out:
                    out.add(t)
                    changed = True
    return out


def _returns(eta: set, a) -> set:
    """Pairs (f, c): ``a`` reaches ``c`` at this position, reflexively."""
    return {(0, a)} | {(f, c) for p, f, c in eta if p == a}


def annotation_closure(gamma: Sequence[Iterable[Triple]], accepting: Iterable,
                       excursions: bool = True) -> list[frozenset]:
    """The least annotation of ``gamma``.

    With ``excursions`` (the default) a visit to a neighbouring position may
    itself loop there before coming back; with ``excursions=False`` only a
    direct step out and straight back is recorded.
    """
    acc = frozenset(accepting)
    fin = lambda q: 1 if q in acc else 0  # noqa: E731
    gamma = [frozenset(g) for g in gamma]
    n = len(gamma)
    eta = [{(q, fin(q2), q2) for q, d, q2 in gamma[u] if d == 0} for u in range(n)]
    changed = True
    while changed:
        changed = False
        for u in range(n):
            new = set(eta[u])
            for q, d, a in gamma[u]:
                v = u + d
                if d == 0 or not 0 <= v < n:
                    continue
                via = _returns(eta[v], a) if excursions else {(0, a)}
                for f, c in via:
                    for c2, d2, b in gamma[v]:
                        if c2 == c and d2 == -d:
                            new.add((q, max(fin(a), f, fin(b)), b))
            new = _compose(new)
            if new != eta[u]:
                eta[u] = new
                changed = True
    return [frozenset(e) for e in eta]


def is_accepting_annotation(eta: Sequence[Iterable[Triple]]) -> bool:
    return not any(f == 0 and q == q2 for e in eta for q, f, q2 in e)


# --------------------------------------------------------------- certificates


def verify_certificate(a: Afw, w: Trace, gamma: Sequence, eta: Sequence) -> tuple[bool, str | None]:
    """Check a (strategy word, annotation) pair against ``a`` on ``w``.

    Returns ``(True, None)`` or ``(False, name)`` for the first violated
    condition: initial, last, moves, destination, eta-moves, eta-transitive,
    eta-accepting, eta-right, eta-left.
    """
    if not isinstance(w, Trace):
        w = Trace(w)
    n = len(w)
    if len(gamma) != n or len(eta) != n:
        raise ValueError("certificate length differs from the word length")
    gamma = [frozenset(g) for g in gamma]
    eta = [frozenset(e) for e in eta]
    fin = a.final

    def exit_ok(q2, d, u):
        return not 0 <= u + d < n and q2 in a.accepting

    if not (a.start in origins(gamma[0]) or a.is_true(a.start, w[0])):
        return False, "initial"
    if any(d == -1 and not exit_ok(q2, d, 0) for _, d, q2 in gamma[0]):
        return False, "initial"
    if any(d == 1 and not exit_ok(q2, d, n - 1) for _, d, q2 in gamma[n - 1]):
        return False, "last"
    for u in range(n):
        for q in origins(gamma[u]):
            if not satisfies(moves_of(gamma[u], q), a.delta(q, w[u])):
                return False, "moves"
    for u in range(n):
        for q, d, q2 in gamma[u]:
            v = u + d
            if 0 <= v < n:
                if q2 not in origins(gamma[v]) and not a.is_true(q2, w[v]):
                    return False, "destination"
            elif q2 not in a.accepting:
                return False, "destination"
    for u in range(n):
        if any((q, fin(q2), q2) not in eta[u] for q, d, q2 in gamma[u] if d == 0):
            return False, "eta-moves"
    for u in range(n):
        if _compose(set(eta[u])) != set(eta[u]):
            return False, "eta-transitive"
    if not is_accepting_annotation(eta):
        return False, "eta-accepting"
    for name, sign in (("eta-right", 1), ("eta-left", -1)):
        for u in range(n):
            v = u + sign
            if not 0 <= v < n:
                continue
            for q, d, x in gamma[u]:
                if d != sign:
                    continue
                for f, c in _returns(set(eta[v]), x):
                    for c2, d2, b in gamma[v]:
                        if c2 == c and d2 == -sign and (q, max(fin(x), f, fin(b)), b) not in eta[u]:
                            return False, name
    return True, None


def reachable_configurations(a: Afw, w: Trace, gamma: Sequence) -> set:
    """Configurations reachable from ``(q0, 0)`` by following ``gamma``."""
    n = len(w)
    start = (a.start, 0)
    seen = {start}
    queue = deque([start])
    while queue:
        q, u = queue.popleft()
        for p, d, q2 in gamma[u]:
            if p == q and 0 <= u + d < n and (q2, u + d) not in seen:
                seen.add((q2, u + d))
                queue.append((q2, u + d))
    return seen


def dead_ends(a: Afw, w: Trace, gamma: Sequence) -> list:
    """Reachable configurations where a path following ``gamma`` stops
    without ``delta`` being True there."""
    return sorted(
        (q, u) for q, u in reachable_configurations(a, w, gamma)
        if q not in origins(gamma[u]) and not a.is_true(q, w[u])
    )


# ------------------------------------------------------------------------ NFW


@dataclass(frozen=True)
class NfwState:
    """Control plus the remembered previous input letter, strategy letter and
    (flag-0, left-only) annotation letter."""

    control: str
    letter: frozenset | None = None
    gamma: frozenset = frozenset()
    eta: frozenset = frozenset()

    def __post_init__(self):
        if (self.control == INITIAL) != (self.letter is None):
            raise ValueError("only the initial state has no memory")

    def size(self) -> int:
        return len(self.gamma) + len(self.eta)


class NfwContext:
    """Static data derived once from a 2AFW for the on-the-fly NFW."""

    def __init__(self, a: Afw):
        self.afw = a
        n = len(a)
        nonf = [q for q in range(n) if q not in a.accepting]
        g = nx.DiGraph()
        g.add_nodes_from(nonf)
        for q in nonf:
            for q2, _ in a.static_moves[q]:
                if q2 not in a.accepting:
                    g.add_edge(q, q2)
        self.scc = {}
        for k, comp in enumerate(nx.strongly_connected_components(g)):
            if len(comp) > 1 or any(g.has_edge(q, q) for q in comp):
                for q in comp:
                    self.scc[q] = k
        self.back_targets = frozenset(
            q2 for q in range(n) for q2, d in a.static_moves[q] if d == -1)
        # states a -1 move can enter from anything statically reachable from q
        moves = nx.DiGraph()
        moves.add_nodes_from(range(n))
        moves.add_edges_from((q, q2) for q in range(n) for q2, _ in a.static_moves[q])
        self.back_of = {}
        for q in range(n):
            reach = nx.descendants(moves, q) | {q}
            self.back_of[q] = frozenset(
                q2 for s in reach for q2, d in a.static_moves[s] if d == -1)
        self._cache: dict = {}

    def same(self, q, q2) -> bool:
        k = self.scc.get(q)
        return k is not None and k == self.scc.get(q2)

    def key(self, s: NfwState):
        """The part of a state that later steps depend on."""
        if s.control == INITIAL:
            return (INITIAL,)
        a = self.afw
        plus = frozenset((q, q2) for q, d, q2 in s.gamma if d == 1)
        covered = frozenset(
            q for q in self.back_targets
            if q in origins(s.gamma) or a.is_true(q, s.letter))
        return (s.control, plus, covered, s.eta)

    # -- successor enumeration

    def _assignments(self, pending: list, letter, first: bool, at_last: bool, covered,
                     base: dict | None = None):
        """All ways to give each origin (and every origin it forces) one
        minimal model, extending ``base``.  Yields dicts origin -> model."""
        a = self.afw

        def ok(q2, d):
            if d == 0:
                return not a.is_false(q2, letter)
            if d == -1:
                return q2 in a.accepting if first else q2 in covered
            return q2 in a.accepting or not at_last

        def go(todo: tuple, chosen: dict):
            if not todo:
                yield dict(chosen)
                return
            q, rest = todo[0], todo[1:]
            for m in a.models(q, letter):
                if not all(ok(q2, d) for q2, d in m):
                    continue
                extra = sorted({q2 for q2, d in m if d == 0 and q2 not in chosen
                                and q2 not in todo and not a.is_true(q2, letter)})
                chosen[q] = m
                yield from go(rest + tuple(extra), chosen)
                del chosen[q]

        yield from go(tuple(q for q in pending if q not in (base or {})), dict(base or {}))

    def _left_eta(self, gamma: frozenset, prev: NfwState | None) -> frozenset | None:
        """Flag-0 left-only returns at this position, or None on a bad cycle."""
        a = self.afw
        nonf = lambda q: q not in a.accepting  # noqa: E731
        edges = set()
        for q, d, q2 in gamma:
            if d == 0 and nonf(q) and self.same(q, q2):
                edges.add((q, q2))
        if prev is not None:
            prev_reach = defaultdict(set)
            for x, _, y in prev.eta:
                prev_reach[x].add(y)
            prev_plus = [(c, b) for c, d, b in prev.gamma if d == 1]
            for q, d, x in gamma:
                if d != -1 or not nonf(q) or not nonf(x):
                    continue
                ends = {x} | prev_reach[x]
                for c, b in prev_plus:
                    if c in ends and self.same(q, b):
                        edges.add((q, b))
        reach = defaultdict(set)
        for x, y in edges:
            reach[x].add(y)
        changed = True
        while changed:
            changed = False
            for x in list(reach):
                more = set().union(*(reach.get(y, set()) for y in reach[x])) - reach[x]
                if more:
                    reach[x] |= more
                    changed = True
        if any(x in ys for x, ys in reach.items()):
            return None
        return frozenset((x, 0, y) for x, ys in reach.items() for y in ys)

    def successors(self, s: NfwState, interp, at_last: bool = False) -> list[NfwState]:
        a = self.afw
        letter = a.letter(interp)
        if s.control == REJECTED or (s.control == INITIAL and s.letter is not None):
            return []
        cache_key = (self.key(s), letter, at_last)
        hit = self._cache.get(cache_key)
        if hit is not None:
            return hit
        first = s.control == INITIAL
        forced = [a.start] if first else sorted({q2 for _, d, q2 in s.gamma if d == 1})
        if any(a.is_false(q, letter) for q in forced):
            self._cache[cache_key] = []
            return []
        base = [q for q in forced if not a.is_true(q, letter)]
        covered = frozenset() if first else self.key(s)[2]
        optional = frozenset(q for q in self.back_targets
                             if not a.is_true(q, letter) and not a.is_false(q, letter))
        prev = None if first else s
        out: dict = {}

        def emit(choice):
            gamma = frozenset((q, d, q2) for q, m in choice.items() for q2, d in m)
            if gamma in out:
                return
            eta = self._left_eta(gamma, prev)
            ready = all(q2 in a.accepting for _, d, q2 in gamma if d == 1)
            if eta is None or (at_last and not ready):
                out[gamma] = None
            else:
                out[gamma] = NfwState(READY if ready else PENDING, letter, gamma, eta)

        for choice in self._assignments(base, letter, first, at_last, covered):
            emit(choice)
            if at_last:
                continue
            # an extra origin only matters if a later -1 move can enter it,
            # and everything right of here is reached through these +1 targets
            plus = {q2 for m in choice.values() for q2, d in m if d == 1}
            useful = sorted(set().union(*(self.back_of[q] for q in plus)) & optional - set(choice))
            for k in range(1, len(useful) + 1):
                for extra in combinations(useful, k):
                    for more in self._assignments(list(extra), letter, first, at_last, covered, choice):
                        emit(more)
        result = [x for x in out.values() if x is not None]
        self._cache[cache_key] = result
        return result


def nfw_successors(a: Afw | NfwContext, s: NfwState, letter, at_last: bool = False) -> list[NfwState]:
    ctx = a if isinstance(a, NfwContext) else NfwContext(a)
    return ctx.successors(s, letter, at_last)


def _context(a) -> NfwContext:
    return a if isinstance(a, NfwContext) else NfwContext(a)


def nfw_run(a: Afw | NfwContext, w: Trace) -> list[frozenset] | None:
    """An accepting run's strategy word, or None if the NFW rejects ``w``."""
    ctx = _context(a)
    if not isinstance(w, Trace):
        w = Trace(w)
    n = len(w)
    layer = {ctx.key(NfwState(INITIAL)): (NfwState(INITIAL), None)}
    history = []
    for u in range(n):
        nxt = {}
        for k, (s, _) in layer.items():
            for s2 in ctx.successors(s, w[u], at_last=(u == n - 1)):
                k2 = ctx.key(s2)
                if k2 not in nxt:
                    nxt[k2] = (s2, k)
        history.append(nxt)
        layer = nxt
        if not layer:
            return None
    finals = [k for k, (s, _) in layer.items() if s.control == READY]
    if not finals:
        return None
    gamma = []
    k = finals[0]
    for u in range(n - 1, -1, -1):
        s, k = history[u][k]
        gamma.append(s.gamma)
    return gamma[::-1]


def nfw_accepts(a: Afw | NfwContext, w: Trace) -> bool:
    return nfw_run(a, w) is not None


def certificate(a: Afw | NfwContext, w: Trace):
    """A (gamma, eta) certificate for ``w``, or None if ``w`` is rejected."""
    ctx = _context(a)
    gamma = nfw_run(ctx, w)
    if gamma is None:
        return None
    return gamma, annotation_closure(gamma, ctx.afw.accepting)
