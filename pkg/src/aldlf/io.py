"""File formats: automaton definitions, 2AFW dumps and certificates."""

from __future__ import annotations

import json
from typing import Mapping

from aldlf import syntax as S
from aldlf.afw import Afw, all_letters, format_posbool, minimal_models
from aldlf.frontends.parser import ParseError, format_formula, format_prop, parse_formula, parse_prop

MAX_TABULATED_ATOMS = 6
KINDS = {"future": S.Future, "past": S.Past, "test": S.Test}


class DefinitionError(ValueError):
    pass


def load_definitions(doc: Mapping | str) -> dict[str, S.PathAutomaton]:
    """Named path automata from a JSON document (or its text).

    Each entry has ``states``, ``start``, ``accepting`` and ``transitions``
    given as ``[from, kind, text, to]`` with kind future, past or test.
    Earlier entries may be referenced by later test formulas.
    """
    if isinstance(doc, str):
        doc = json.loads(doc)
    defs: dict[str, S.PathAutomaton] = {}
    for name, entry in doc.items():
        try:
            states = tuple(entry["states"])
            edges = []
            for src, kind, text, dst in entry["transitions"]:
                if kind not in KINDS:
                    raise DefinitionError(f"{name}: unknown transition kind {kind!r}")
                payload = parse_formula(text, defs) if kind == "test" else parse_prop(text)
                edges.append(S.Transition(src, KINDS[kind](payload), dst))
            a = S.make_automaton(states, edges, entry["start"], entry["accepting"], name=name)
        except (KeyError, TypeError) as exc:
            raise DefinitionError(f"{name}: malformed entry ({exc})") from exc
        except ParseError as exc:
            raise DefinitionError(f"{name}: {exc}") from exc
        problems = S.validate_automaton(a)
        if problems:
            raise DefinitionError(f"{name}: " + "; ".join(problems))
        defs[name] = a
    return defs


def dump_definitions(defs: Mapping[str, S.PathAutomaton]) -> dict:
    out = {}
    for name, a in defs.items():
        rows = []
        for t in sorted(a.transitions, key=a._transition_order):
            lab = t.label
            if isinstance(lab, S.Test):
                rows.append([t.source, "test", format_formula(lab.formula, dict(defs)), t.target])
            else:
                kind = "future" if isinstance(lab, S.Future) else "past"
                rows.append([t.source, kind, format_prop(lab.prop), t.target])
        out[name] = {
            "states": list(a.states),
            "start": a.start,
            "accepting": [s for s in a.states if s in a.accepting],
            "transitions": rows,
        }
    return out


def _letter_name(letter) -> str:
    return "{" + ",".join(sorted(letter)) + "}"


def afw_table(a: Afw) -> dict:
    """States, accepting set and delta tabulated over every letter."""
    if len(a.atoms) > MAX_TABULATED_ATOMS:
        raise ValueError(f"refusing to tabulate {2 ** len(a.atoms)} letters "
                         f"(more than {2 ** MAX_TABULATED_ATOMS})")
    names = [a.name(q) for q in range(len(a))]
    delta = []
    for q in range(len(a)):
        for letter in all_letters(a.atoms):
            b = a.delta(q, letter)
            delta.append({
                "state": q,
                "letter": sorted(letter),
                "formula": format_posbool(b),
                "models": [sorted([q2, d] for q2, d in m) for m in
                           sorted(minimal_models(b), key=lambda m: sorted(m))],
            })
    return {
        "automata": dump_definitions(a.automata),
        "atoms": sorted(a.atoms),
        "states": names,
        "start": a.start,
        "accepting": sorted(a.accepting),
        "delta": delta,
    }


def afw_text(a: Afw) -> str:
    table = afw_table(a)
    lines = [f"atoms: {' '.join(table['atoms']) or '(none)'}", "states:"]
    for i, name in enumerate(table["states"]):
        marks = ("start " if i == a.start else "") + ("accepting" if i in a.accepting else "")
        lines.append(f"  {i}: {name}" + (f"  [{marks.strip()}]" if marks else ""))
    lines.append("delta:")
    for row in table["delta"]:
        lines.append(f"  {row['state']} {_letter_name(row['letter'])} -> {row['formula']}")
    return "\n".join(lines) + "\n"


def _dot_quote(text: str) -> str:
    return '"' + text.replace("\\", "\\\\").replace('"', '\\"') + '"'


def afw_dot(a: Afw) -> str:
    table = afw_table(a)
    lines = ["digraph afw {", "  rankdir=LR;", '  init [shape=point];']
    for i, name in enumerate(table["states"]):
        shape = "doublecircle" if i in a.accepting else "circle"
        lines.append(f"  s{i} [shape={shape}, label={_dot_quote(f'{i}: {name}')}];")
    lines.append(f"  init -> s{a.start};")
    for row in table["delta"]:
        q = row["state"]
        targets = sorted({q2 for m in row["models"] for q2, _ in m})
        label = f"{_letter_name(row['letter'])}: {row['formula']}"
        if not targets:
            lines.append(f"  s{q} -> s{q} [style=dotted, label={_dot_quote(label)}];")
        for q2 in targets:
            lines.append(f"  s{q} -> s{q2} [label={_dot_quote(label)}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def dump_certificate(gamma, eta) -> dict:
    return {
        "gamma": [sorted([list(t) for t in g]) for g in gamma],
        "eta": [sorted([list(t) for t in e]) for e in eta],
    }


def load_certificate(doc: Mapping | str):
    if isinstance(doc, str):
        doc = json.loads(doc)
    gamma = [frozenset(tuple(t) for t in g) for g in doc["gamma"]]
    eta = [frozenset(tuple(t) for t in e) for e in doc["eta"]]
    return gamma, eta
