"""Satisfiability and equivalence by reachability in the on-the-fly NFW."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from aldlf import syntax as S
from aldlf.afw import all_letters, compile_formula
from aldlf.nfw import INITIAL, READY, NfwContext, NfwState
from aldlf.semantics import Trace, eval_formula


class SearchLimitExceeded(RuntimeError):
    """The search hit its state or length bound before reaching a verdict."""


@dataclass(frozen=True)
class SatResult:
    witness: Trace | None
    explored: int

    @property
    def satisfiable(self) -> bool:
        return self.witness is not None


def search(f: S.Formula, max_states: int | None = None, max_len: int | None = None) -> SatResult:
    """Breadth-first search for a shortest trace satisfying ``f``."""
    g = S.to_nnf(f)
    ctx = NfwContext(compile_formula(g))
    letters = all_letters(S.formula_atoms(g))
    start = NfwState(INITIAL)
    parent = {ctx.key(start): None}
    queue = deque([(start, 0)])
    truncated = False
    while queue:
        s, depth = queue.popleft()
        if max_len is not None and depth >= max_len:
            truncated = True
            continue
        for letter in letters:
            for s2 in ctx.successors(s, letter):
                k2 = ctx.key(s2)
                if k2 in parent:
                    continue
                parent[k2] = (ctx.key(s), letter)
                if s2.control == READY:
                    witness = _unwind(parent, k2)
                    if not eval_formula(f, witness, 0):
                        raise AssertionError("witness failed replay against the direct semantics")
                    return SatResult(witness, len(parent))
                if max_states is not None and len(parent) > max_states:
                    raise SearchLimitExceeded(f"explored more than {max_states} states")
                queue.append((s2, depth + 1))
    if truncated:
        raise SearchLimitExceeded(f"no witness of length <= {max_len}; search incomplete")
    return SatResult(None, len(parent))


def _unwind(parent, k) -> Trace:
    letters = []
    while parent[k] is not None:
        k, letter = parent[k]
        letters.append(letter)
    return Trace(reversed(letters))


def is_satisfiable(f: S.Formula, max_states: int | None = None,
                   max_len: int | None = None) -> Trace | None:
    """A shortest witness trace for ``f``, or None when ``f`` is unsatisfiable."""
    return search(f, max_states, max_len).witness


@dataclass(frozen=True)
class Equivalence:
    equivalent: bool
    counterexample: Trace | None = None
    # which side holds on the counterexample: "left" or "right"
    holds: str | None = None


def equivalence(f: S.Formula, g: S.Formula, max_states: int | None = None,
                max_len: int | None = None) -> Equivalence:
    for side, diff in (("left", S.And(f, S.Not(g))), ("right", S.And(S.Not(f), g))):
        w = is_satisfiable(S.to_nnf(diff), max_states, max_len)
        if w is not None:
            if eval_formula(f, w) == eval_formula(g, w):
                raise AssertionError("counterexample failed replay against the direct semantics")
            return Equivalence(False, w, side)
    return Equivalence(True)
