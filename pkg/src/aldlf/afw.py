"""Positive Boolean formulas, two-way alternating automata on finite words,
and the compilation of NNF formulas into such automata."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import chain, combinations
from typing import Callable, Hashable, Iterable, Mapping

from aldlf import syntax as S
from aldlf.semantics import eval_prop

# ---------------------------------------------------------- positive Boolean


class PosBool:
    __slots__ = ()


@dataclass(frozen=True)
class PosTrue(PosBool):
    pass


@dataclass(frozen=True)
class PosFalse(PosBool):
    pass


@dataclass(frozen=True, order=True)
class Move(PosBool):
    """Go to ``state`` and shift the head by ``direction``."""

    state: Hashable
    direction: int


@dataclass(frozen=True)
class PosAnd(PosBool):
    left: PosBool
    right: PosBool


@dataclass(frozen=True)
class PosOr(PosBool):
    left: PosBool
    right: PosBool


PTRUE = PosTrue()
PFALSE = PosFalse()


def conj(parts: Iterable[PosBool]) -> PosBool:
    """Conjunction of ``parts``; the empty conjunction is True."""
    out = PTRUE
    for p in parts:
        if isinstance(p, PosFalse):
            return PFALSE
        if isinstance(p, PosTrue):
            continue
        out = p if isinstance(out, PosTrue) else PosAnd(out, p)
    return out


def disj(parts: Iterable[PosBool]) -> PosBool:
    """Disjunction of ``parts``; the empty disjunction is False."""
    out = PFALSE
    for p in parts:
        if isinstance(p, PosTrue):
            return PTRUE
        if isinstance(p, PosFalse):
            continue
        out = p if isinstance(out, PosFalse) else PosOr(out, p)
    return out


def satisfies(model: Iterable, b: PosBool) -> bool:
    """Does the set of (state, direction) pairs ``model`` satisfy ``b``?"""
    model = model if isinstance(model, (set, frozenset)) else set(model)

    def go(x):
        if isinstance(x, PosTrue):
            return True
        if isinstance(x, PosFalse):
            return False
        if isinstance(x, Move):
            return (x.state, x.direction) in model
        if isinstance(x, PosAnd):
            return go(x.left) and go(x.right)
        return go(x.left) or go(x.right)

    return go(b)


def _absorb(sets: Iterable[frozenset]) -> frozenset:
    uniq = sorted(set(sets), key=len)
    kept: list[frozenset] = []
    for s in uniq:
        if not any(k <= s for k in kept):
            kept.append(s)
    return frozenset(kept)


def minimal_models(b: PosBool) -> frozenset:
    """The subset-minimal sets of (state, direction) pairs satisfying ``b``."""
    if isinstance(b, PosTrue):
        return frozenset({frozenset()})
    if isinstance(b, PosFalse):
        return frozenset()
    if isinstance(b, Move):
        return frozenset({frozenset({(b.state, b.direction)})})
    left, right = minimal_models(b.left), minimal_models(b.right)
    if isinstance(b, PosOr):
        return _absorb(left | right)
    return _absorb(x | y for x in left for y in right)


def posbool_atoms(b: PosBool) -> set:
    if isinstance(b, Move):
        return {(b.state, b.direction)}
    if isinstance(b, (PosAnd, PosOr)):
        return posbool_atoms(b.left) | posbool_atoms(b.right)
    return set()


def format_posbool(b: PosBool, name=str, ctx: int = 0) -> str:
    if isinstance(b, PosTrue):
        return "true"
    if isinstance(b, PosFalse):
        return "false"
    if isinstance(b, Move):
        return f"({name(b.state)}, {b.direction:+d})" if b.direction else f"({name(b.state)}, 0)"
    prec, op = (1, " | ") if isinstance(b, PosOr) else (2, " & ")
    text = format_posbool(b.left, name, prec) + op + format_posbool(b.right, name, prec)
    return f"({text})" if prec < ctx else text


def all_letters(atoms: Iterable[str]) -> list[frozenset]:
    """Every interpretation over ``atoms`` in a fixed subset order."""
    atoms = sorted(atoms)
    return [frozenset(c) for k in range(len(atoms) + 1) for c in combinations(atoms, k)]


# ---------------------------------------------------------------------- 2AFW


@dataclass(eq=False)
class Afw:
    """A 2AFW whose states are referred to by index.

    ``delta(q, letter)`` returns a PosBool over ``Move(index, direction)``;
    results, minimal models and static move sets are memoized.
    """

    states: tuple
    start: int
    accepting: frozenset
    atoms: frozenset
    transition: Callable[[int, frozenset], PosBool] = field(repr=False)
    static_moves: tuple = field(repr=False, default=None)
    _delta: dict = field(default_factory=dict, repr=False)
    _models: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        self.index = {q: i for i, q in enumerate(self.states)}
        # anonymous path automata named while printing states
        self.automata: dict = {}
        if self.static_moves is None:
            moves = [set() for _ in self.states]
            for q in range(len(self.states)):
                for letter in all_letters(self.atoms):
                    moves[q] |= posbool_atoms(self.delta(q, letter))
            self.static_moves = tuple(frozenset(m) for m in moves)

    def __len__(self):
        return len(self.states)

    def letter(self, interp) -> frozenset:
        return frozenset(interp) & self.atoms

    def delta(self, q: int, interp) -> PosBool:
        key = (q, self.letter(interp))
        hit = self._delta.get(key)
        if hit is None:
            hit = self._delta[key] = self.transition(*key)
        return hit

    def models(self, q: int, interp) -> tuple:
        """Minimal models of ``delta(q, interp)`` as sorted tuples, in a fixed order."""
        key = (q, self.letter(interp))
        hit = self._models.get(key)
        if hit is None:
            ms = [tuple(sorted(m)) for m in minimal_models(self.delta(*key))]
            hit = self._models[key] = tuple(sorted(ms, key=lambda m: (len(m), m)))
        return hit

    def is_true(self, q: int, interp) -> bool:
        return isinstance(self.delta(q, interp), PosTrue)

    def is_false(self, q: int, interp) -> bool:
        return isinstance(self.delta(q, interp), PosFalse)

    def final(self, q: int) -> int:
        return 1 if q in self.accepting else 0

    def name(self, q: int) -> str:
        from aldlf.frontends.parser import format_formula

        s = self.states[q]
        if isinstance(s, S.Formula):
            return format_formula(s, self.automata)
        return str(s)

    @classmethod
    def from_table(cls, states: Iterable, start, accepting: Iterable,
                   table, atoms: Iterable[str] = ()) -> Afw:
        """Build an automaton from explicit transition entries.

        ``table`` is a mapping ``(state, letter) -> PosBool`` or an iterable of
        ``(state, letter, PosBool)`` triples.  Moves name states directly;
        missing entries are False.
        """
        states = tuple(states)
        index = {q: i for i, q in enumerate(states)}
        if isinstance(table, Mapping):
            table = [(q, l, b) for (q, l), b in table.items()]
        table = [(q, frozenset(l), b) for q, l, b in table]
        atoms = frozenset(atoms) | frozenset(chain.from_iterable(l for _, l, _ in table))

        def reindex(b):
            if isinstance(b, Move):
                return Move(index[b.state], b.direction)
            if isinstance(b, (PosAnd, PosOr)):
                return type(b)(reindex(b.left), reindex(b.right))
            return b

        fixed = {(index[q], l): reindex(b) for q, l, b in table}
        return cls(states, index[start], frozenset(index[q] for q in accepting), atoms,
                   lambda q, letter: fixed.get((q, letter), PFALSE))


# ---------------------------------------------------------------- compilation


def _modal_parts(f: S.Formula, label_ok: Callable[[S.TransitionLabel], bool]):
    """The atoms and tests of the delta clause of a modal state.

    Yields ("arg", None), ("move", (target_formula, d)) and
    ("test", (test_formula, target_formula)) items.
    """
    a = f.automaton
    make = type(f)
    if a.start in a.accepting:
        yield "arg", f.arg
    for t in a.outgoing(a.start):
        nxt = make(a.rerooted(t.target), f.arg)
        lab = t.label
        if isinstance(lab, S.Test):
            psi = lab.formula if make is S.Diamond else S.to_nnf(S.Not(lab.formula))
            yield "test", (psi, nxt)
        elif label_ok(lab):
            yield "move", (nxt, 1 if isinstance(lab, S.Future) else -1)


def compile_formula(f: S.Formula) -> Afw:
    """The 2AFW accepting exactly the traces (and start positions) where ``f`` holds."""
    if not S.is_nnf(f):
        raise ValueError("compile_formula needs a formula in negation normal form")
    closure = S.fischer_ladner_closure(f, extended=True)
    index = {g: i for i, g in enumerate(closure)}
    atoms = frozenset(S.formula_atoms(f))
    accepting = frozenset(i for i, g in enumerate(closure) if isinstance(g, S.Box))

    def mv(g, d=0):
        return Move(index[g], d)

    def delta(q: int, letter: frozenset) -> PosBool:
        g = closure[q]
        if isinstance(g, S.Prop):
            return PTRUE if eval_prop(g.prop, letter) else PFALSE
        if isinstance(g, S.Not):
            return PFALSE if eval_prop(g.arg.prop, letter) else PTRUE
        if isinstance(g, S.And):
            return conj([mv(g.left), mv(g.right)])
        if isinstance(g, S.Or):
            return disj([mv(g.left), mv(g.right)])
        guard = lambda lab: eval_prop(lab.prop, letter)  # noqa: E731
        parts = []
        for kind, x in _modal_parts(g, guard):
            if kind == "arg":
                parts.append(mv(x))
            elif kind == "move":
                parts.append(mv(*x))
            elif isinstance(g, S.Diamond):
                parts.append(conj([mv(x[0]), mv(x[1])]))
            else:
                parts.append(disj([mv(x[0]), mv(x[1])]))
        return disj(parts) if isinstance(g, S.Diamond) else conj(parts)

    def static(q: int) -> frozenset:
        g = closure[q]
        if isinstance(g, (S.Prop, S.Not)):
            return frozenset()
        if isinstance(g, (S.And, S.Or)):
            return frozenset({(index[g.left], 0), (index[g.right], 0)})
        out = set()
        for kind, x in _modal_parts(g, lambda lab: True):
            if kind == "arg":
                out.add((index[x], 0))
            elif kind == "move":
                out.add((index[x[0]], x[1]))
            else:
                out |= {(index[x[0]], 0), (index[x[1]], 0)}
        return frozenset(out)

    return Afw(tuple(closure), 0, accepting, atoms, delta,
               static_moves=tuple(static(q) for q in range(len(closure))))
