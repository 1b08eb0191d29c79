"""Abstract syntax for ALDL_f formulas and path automata.

Formulas and path automata are defined by mutual recursion: a path automaton
may carry whole formulas on its test edges.  Every node is an immutable value
with structural equality and a cached hash, so formulas can be used freely as
set members and dictionary keys (the 2AFW uses them as states).
"""

from __future__ import annotations

import re

from dataclasses import dataclass, field, fields
from typing import Hashable, Iterable, NamedTuple, Union


def _node(cls):
    """Make ``cls`` a frozen dataclass whose hash is computed once."""
    cls = dataclass(frozen=True, eq=False)(cls)
    names = tuple(f.name for f in fields(cls) if f.compare)

    def key(self):
        return tuple(getattr(self, n) for n in names)

    def __hash__(self):
        h = self.__dict__.get("_hash")
        if h is None:
            h = hash((cls.__name__,) + key(self))
            object.__setattr__(self, "_hash", h)
        return h

    def __eq__(self, other):
        if self is other:
            return True
        if type(other) is not type(self) or hash(self) != hash(other):
            return False
        return key(self) == key(other)

    cls.__hash__ = __hash__
    cls.__eq__ = __eq__
    return cls


# ---------------------------------------------------------------- propositional


class PropFormula:
    """Base class of propositional formulas (labels of future/past edges)."""

    __slots__ = ()


@_node
class Atom(PropFormula):
    name: str

    def __post_init__(self):
        if not self.name or not isinstance(self.name, str):
            raise ValueError(f"atom names must be nonempty strings, got {self.name!r}")


@_node
class TrueProp(PropFormula):
    pass


@_node
class FalseProp(PropFormula):
    pass


@_node
class PropNot(PropFormula):
    arg: PropFormula


@_node
class PropAnd(PropFormula):
    left: PropFormula
    right: PropFormula


@_node
class PropOr(PropFormula):
    left: PropFormula
    right: PropFormula


TRUE = TrueProp()
FALSE = FalseProp()


def prop_atoms(z: PropFormula) -> set[str]:
    if isinstance(z, Atom):
        return {z.name}
    if isinstance(z, PropNot):
        return prop_atoms(z.arg)
    if isinstance(z, (PropAnd, PropOr)):
        return prop_atoms(z.left) | prop_atoms(z.right)
    return set()


def prop_nnf(z: PropFormula, negate: bool = False) -> PropFormula:
    if isinstance(z, Atom):
        return PropNot(z) if negate else z
    if isinstance(z, TrueProp):
        return FALSE if negate else TRUE
    if isinstance(z, FalseProp):
        return TRUE if negate else FALSE
    if isinstance(z, PropNot):
        return prop_nnf(z.arg, not negate)
    if isinstance(z, PropAnd):
        make = PropOr if negate else PropAnd
        return make(prop_nnf(z.left, negate), prop_nnf(z.right, negate))
    if isinstance(z, PropOr):
        make = PropAnd if negate else PropOr
        return make(prop_nnf(z.left, negate), prop_nnf(z.right, negate))
    raise TypeError(f"not a propositional formula: {z!r}")


def prop_is_nnf(z: PropFormula) -> bool:
    if isinstance(z, PropNot):
        return isinstance(z.arg, Atom)
    if isinstance(z, (PropAnd, PropOr)):
        return prop_is_nnf(z.left) and prop_is_nnf(z.right)
    return True


def prop_size(z: PropFormula) -> int:
    if isinstance(z, PropNot):
        return 3 + prop_size(z.arg)
    if isinstance(z, (PropAnd, PropOr)):
        return 3 + prop_size(z.left) + prop_size(z.right)
    return 1


# ------------------------------------------------------------ transition labels


class TransitionLabel:
    __slots__ = ()


@_node
class Future(TransitionLabel):
    """Read a letter satisfying ``prop`` and move right."""

    prop: PropFormula


@_node
class Past(TransitionLabel):
    """Read a letter satisfying ``prop`` and move left."""

    prop: PropFormula


@_node
class Test(TransitionLabel):
    """Stay in place provided ``formula`` holds here."""

    formula: Formula


StateId = Hashable


class Transition(NamedTuple):
    source: StateId
    label: TransitionLabel
    target: StateId


# -------------------------------------------------------------- path automata


@_node
class PathAutomaton:
    """An NFA over future, past and test labels.

    ``states`` is ordered; equality compares all five components as given, so
    two automata differing only by a renaming of their states are different
    values.  ``source`` optionally remembers the path expression the automaton
    was compiled from (used for printing, ignored by equality).
    """

    states: tuple
    transitions: frozenset
    start: StateId
    accepting: frozenset
    source: object = field(default=None, compare=False, repr=False)
    name: str | None = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "states", tuple(self.states))
        object.__setattr__(
            self, "transitions", frozenset(Transition(*t) for t in self.transitions)
        )
        object.__setattr__(self, "accepting", frozenset(self.accepting))

    def rerooted(self, start: StateId) -> PathAutomaton:
        """The same automaton with ``start`` as its start state."""
        if start == self.start:
            return self
        name = None
        if self.name is not None:
            tag = str(start) if re.fullmatch(r"\w+", str(start)) else str(self.states.index(start))
            name = f"{self.name}_{tag}"
        return PathAutomaton(self.states, self.transitions, start, self.accepting, name=name)

    def outgoing(self, state: StateId) -> list[Transition]:
        cache = self.__dict__.get("_outgoing")
        if cache is None:
            cache = {s: [] for s in self.states}
            for t in sorted(self.transitions, key=self._transition_order):
                cache.setdefault(t.source, []).append(t)
            object.__setattr__(self, "_outgoing", cache)
        return cache.get(state, [])

    def _transition_order(self, t: Transition):
        pos = {s: i for i, s in enumerate(self.states)}
        kind = {Future: 0, Past: 1, Test: 2}[type(t.label)]
        return (pos.get(t.source, -1), pos.get(t.target, -1), kind, repr(t.label))

    def tests(self) -> list[Formula]:
        """Formulas occurring as tests, in a deterministic order."""
        seen = {}
        for s in self.states:
            for t in self.outgoing(s):
                if isinstance(t.label, Test):
                    seen.setdefault(t.label.formula, None)
        return list(seen)

    def map_labels(self, fn) -> PathAutomaton:
        return PathAutomaton(
            self.states,
            [Transition(t.source, fn(t.label), t.target) for t in self.transitions],
            self.start,
            self.accepting,
            name=self.name,
        )


# ------------------------------------------------------------------- formulas


class Formula:
    __slots__ = ()

    def __invert__(self):
        return Not(self)

    def __and__(self, other):
        return And(self, other)

    def __or__(self, other):
        return Or(self, other)


@_node
class Prop(Formula):
    prop: PropFormula


@_node
class Not(Formula):
    arg: Formula


@_node
class And(Formula):
    left: Formula
    right: Formula


@_node
class Or(Formula):
    left: Formula
    right: Formula


@_node
class Diamond(Formula):
    automaton: PathAutomaton
    arg: Formula


@_node
class Box(Formula):
    automaton: PathAutomaton
    arg: Formula


Modal = Union[Diamond, Box]


def atom(name: str) -> Prop:
    return Prop(Atom(name))


def implies(a: Formula, b: Formula) -> Formula:
    return Or(Not(a), b)


def iff(a: Formula, b: Formula) -> Formula:
    return And(implies(a, b), implies(b, a))


# ------------------------------------------------------------------- measures


def automaton_size(a: PathAutomaton) -> int:
    return len(a.transitions)


def formula_size(f: Formula) -> int:
    """Symbol count of ``f``.

    Connectives cost 3 plus their operands, modalities 4 plus the number of
    states plus the operand.  Each distinct test ``psi?`` on a modality's
    automaton adds ``|psi| + 1``.
    """
    if isinstance(f, Prop):
        return prop_size(f.prop)
    if isinstance(f, Not):
        return 3 + formula_size(f.arg)
    if isinstance(f, (And, Or)):
        return 3 + formula_size(f.left) + formula_size(f.right)
    if isinstance(f, (Diamond, Box)):
        a = f.automaton
        tests = sum(formula_size(psi) + 1 for psi in a.tests())
        return 4 + len(a.states) + formula_size(f.arg) + tests
    raise TypeError(f"not a formula: {f!r}")


def formula_atoms(f: Formula) -> set[str]:
    if isinstance(f, Prop):
        return prop_atoms(f.prop)
    if isinstance(f, Not):
        return formula_atoms(f.arg)
    if isinstance(f, (And, Or)):
        return formula_atoms(f.left) | formula_atoms(f.right)
    if isinstance(f, (Diamond, Box)):
        out = formula_atoms(f.arg)
        for t in f.automaton.transitions:
            label = t.label
            if isinstance(label, Test):
                out |= formula_atoms(label.formula)
            else:
                out |= prop_atoms(label.prop)
        return out
    raise TypeError(f"not a formula: {f!r}")


# ------------------------------------------------------------------------ NNF


def _nnf_label(label: TransitionLabel) -> TransitionLabel:
    if isinstance(label, Test):
        return Test(to_nnf(label.formula))
    return type(label)(prop_nnf(label.prop))


def _nnf_automaton(a: PathAutomaton) -> PathAutomaton:
    out = a.map_labels(_nnf_label)
    if out.transitions != a.transitions:
        # the name would now refer to a different automaton
        object.__setattr__(out, "name", None)
    if a.source is not None:
        from aldlf.frontends.regex import map_leaves

        object.__setattr__(out, "source", map_leaves(a.source, _nnf_label))
    return out


def _prop_leaf(z: PropFormula) -> Formula:
    z = prop_nnf(z)
    if isinstance(z, PropNot):
        return Not(Prop(z.arg))
    return Prop(z)


def to_nnf(f: Formula, negate: bool = False) -> Formula:
    """Push negations down to atoms, through modalities and into tests."""
    if isinstance(f, Prop):
        z = f.prop
        if negate:
            return Not(Prop(z)) if isinstance(z, Atom) else _prop_leaf(PropNot(z))
        return _prop_leaf(z)
    if isinstance(f, Not):
        return to_nnf(f.arg, not negate)
    if isinstance(f, And):
        make = Or if negate else And
        return make(to_nnf(f.left, negate), to_nnf(f.right, negate))
    if isinstance(f, Or):
        make = And if negate else Or
        return make(to_nnf(f.left, negate), to_nnf(f.right, negate))
    if isinstance(f, Diamond):
        make = Box if negate else Diamond
        return make(_nnf_automaton(f.automaton), to_nnf(f.arg, negate))
    if isinstance(f, Box):
        make = Diamond if negate else Box
        return make(_nnf_automaton(f.automaton), to_nnf(f.arg, negate))
    raise TypeError(f"not a formula: {f!r}")


def is_nnf(f: Formula) -> bool:
    if isinstance(f, Prop):
        return prop_is_nnf(f.prop)
    if isinstance(f, Not):
        return isinstance(f.arg, Prop) and isinstance(f.arg.prop, Atom)
    if isinstance(f, (And, Or)):
        return is_nnf(f.left) and is_nnf(f.right)
    if isinstance(f, (Diamond, Box)):
        for t in f.automaton.transitions:
            if isinstance(t.label, Test):
                if not is_nnf(t.label.formula):
                    return False
            elif not prop_is_nnf(t.label.prop):
                return False
        return is_nnf(f.arg)
    raise TypeError(f"not a formula: {f!r}")


# -------------------------------------------------------------------- closure


def fischer_ladner_closure(f: Formula, extended: bool = True) -> list[Formula]:
    """Fischer-Ladner closure of ``f`` as an ordered, duplicate-free list.

    With ``extended`` (the default) the closure also contains ``nnf(!psi)``
    and its closure for every test ``psi?`` under a box, since the box
    transitions of the 2AFW move to those states.
    """
    seen: dict[Formula, None] = {}
    work = [f]
    while work:
        g = work.pop(0)
        if g in seen:
            continue
        seen[g] = None
        if isinstance(g, Not):
            if not isinstance(g.arg, Not):
                work.append(g.arg)
        elif isinstance(g, (And, Or)):
            work += [g.left, g.right]
        elif isinstance(g, (Diamond, Box)):
            a = g.automaton
            work.append(g.arg)
            work += [type(g)(a.rerooted(r), g.arg) for r in a.states]
            for psi in a.tests():
                work.append(psi)
                if extended and isinstance(g, Box):
                    work.append(to_nnf(Not(psi)))
    return list(seen)


# ----------------------------------------------------------------- validation


def validate_automaton(a: PathAutomaton) -> list[str]:
    """List every violation of the path-automaton well-formedness rules."""
    problems = []
    states = set(a.states)
    if len(states) != len(a.states):
        problems.append("duplicate state ids")
    if a.start not in states:
        problems.append(f"start state {a.start!r} is not a state")
    for g in sorted(a.accepting - states, key=repr):
        problems.append(f"accepting state {g!r} is not a state")
    touched = set()
    for t in sorted(a.transitions, key=repr):
        for end in (t.source, t.target):
            if end not in states:
                problems.append(f"transition {t.source!r} -> {t.target!r} uses unknown state {end!r}")
        touched.update((t.source, t.target))
    for s in a.states:
        if s not in touched:
            problems.append(f"isolated state {s}")
    return problems


def make_automaton(states: Iterable, transitions: Iterable, start, accepting: Iterable,
                   **kw) -> PathAutomaton:
    return PathAutomaton(tuple(states), frozenset(transitions), start, frozenset(accepting), **kw)
