"""Semi-paths over a strategy word and its annotation, and their shortening.

Elements are ``(j, q)`` (a configuration) or ``(j, q1, f, q2)`` (a cycle: an
annotated return from ``q1`` to ``q2`` at position ``j``).
"""

from __future__ import annotations

from functools import lru_cache
from typing import Iterable, Sequence

Element = tuple


def is_cycle(c: Element) -> bool:
    return len(c) == 4


def index(c: Element) -> int:
    return c[0]


def first_state(c: Element):
    return c[1]


def last_state(c: Element):
    return c[3] if is_cycle(c) else c[1]


def _linked(gamma, c: Element, c2: Element) -> bool:
    j, q = index(c), last_state(c)
    d = index(c2) - j
    return d in (-1, 0, 1) and (q, d, first_state(c2)) in gamma[j]


def is_valid(gamma: Sequence, eta: Sequence, p: Sequence[Element]) -> bool:
    """Every cycle is annotated and consecutive elements are joined by a move."""
    n = len(gamma)
    for c in p:
        if not 0 <= index(c) < n:
            return False
        if is_cycle(c) and (c[1], c[2], c[3]) not in eta[c[0]]:
            return False
    return all(_linked(gamma, c, c2) for c, c2 in zip(p, p[1:]))


def element_accepting(c: Element, i: int, accepting) -> bool:
    """Is the ``i``-th element (0-based) accepting?

    The first element's entry state is where the semi-path starts and is not
    counted; any later element is entered, so its entry state counts too.
    """
    if is_cycle(c):
        _, q1, f, q2 = c
        return f == 1 or q2 in accepting or (i > 0 and q1 in accepting)
    return i > 0 and c[1] in accepting


def is_accepting(p: Sequence[Element], accepting) -> bool:
    return any(element_accepting(c, i, accepting) for i, c in enumerate(p))


def is_jq(p: Sequence[Element], j: int, q) -> bool:
    if len(p) == 1:
        c = p[0]
        return is_cycle(c) and c[0] == j and c[1] == q and c[3] == q
    return (len(p) > 1 and index(p[0]) == j and first_state(p[0]) == q
            and index(p[-1]) == j and last_state(p[-1]) == q)


def _merge_adjacent(eta, p):
    for i in range(len(p) - 1):
        c, c2 = p[i], p[i + 1]
        if index(c) != index(c2):
            continue
        j = index(c)
        merged = (j, first_state(c), 0, last_state(c2))
        if merged[1:] in eta[j]:
            return list(p[:i]) + [merged] + list(p[i + 2:])
    return None


def _merge_extremum(eta, p):
    """Fold the excursion around the last maximal (or, failing an interior
    one, minimal) index element into one cycle at the neighbouring index."""
    n = len(p)
    interior = range(1, n - 1)
    top = max(index(c) for c in p)
    target = top if top > index(p[0]) else min(index(c) for c in p)
    ks = [k for k in interior if index(p[k]) == target]
    if not ks:
        return None
    i = ks[-1]
    before, after = p[i - 1], p[i + 1]
    j = index(before)
    if index(after) != j:
        return None
    merged = (j, first_state(before), 0, last_state(after))
    if merged[1:] not in eta[j]:
        return None
    return list(p[: i - 1]) + [merged] + list(p[i + 2:])


def find_semipath(gamma, eta, j: int, q, length: int, accepting) -> list | None:
    """Some non-accepting (j, q)-semi-path of exactly ``length`` elements."""
    n = len(gamma)
    acc = frozenset(accepting)
    eta = [frozenset(e) for e in eta]

    def candidates(u, start, pos):
        if start in acc and pos > 0:
            return
        if pos > 0 or length > 1:
            yield (u, start)
        for q1, f, q2 in sorted(eta[u], key=repr):
            if q1 == start and f == 0 and q2 not in acc:
                yield (u, q1, f, q2)

    @lru_cache(maxsize=None)
    def rest(c: Element, remaining: int):
        """Completion after element ``c`` with ``remaining`` more elements."""
        if remaining == 0:
            return () if index(c) == j and last_state(c) == q else None
        u, s = index(c), last_state(c)
        for s2, d, t in sorted(gamma[u], key=repr):
            if s2 != s or not 0 <= u + d < n:
                continue
            for c2 in candidates(u + d, t, length - remaining):
                tail = rest(c2, remaining - 1)
                if tail is not None:
                    return (c2,) + tail
        return None

    gamma = [frozenset(g) for g in gamma]
    for c0 in candidates(j, q, 0):
        tail = rest(c0, length - 1)
        if tail is not None:
            return [c0, *tail]
    return None


def shorten_semipath(gamma: Sequence, eta: Sequence, p: Sequence[Element],
                     accepting: Iterable) -> list:
    """Shorten a non-accepting (j, q)-semi-path of length n > 1.

    Adjacent elements at the same index are merged first (length n - 1).
    Otherwise a semi-path of length n - 1 is searched for; when none exists
    the excursion at the extreme index is folded away, giving length n - 2.
    """
    acc = frozenset(accepting)
    gamma = [frozenset(g) for g in gamma]
    eta = [frozenset(e) for e in eta]
    p = [tuple(c) for c in p]
    if len(p) < 2:
        raise ValueError("semi-path must have at least two elements")
    j, q = index(p[0]), first_state(p[0])
    if not is_jq(p, j, q):
        raise ValueError("not a (j, q)-semi-path")
    if not is_valid(gamma, eta, p):
        raise ValueError("not a semi-path on the given strategy and annotation")
    if is_accepting(p, acc):
        raise ValueError("semi-path is accepting")
    merged = _merge_adjacent(eta, p)
    if merged is not None:
        return merged
    found = find_semipath(gamma, eta, j, q, len(p) - 1, acc)
    if found is not None:
        return found
    folded = _merge_extremum(eta, p)
    if folded is None:
        raise ValueError("annotation is not closed; cannot shorten")
    return folded
