"""Command-line interface: ``aldlf eval|compile|sat|equiv|closure|nnf``."""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from pathlib import Path

from aldlf import syntax as S
from aldlf.afw import compile_formula
from aldlf.frontends.ltlf import ltlf_to_aldlf
from aldlf.frontends.parser import ParseError, format_formula, format_trace, parse_formula, parse_ltlf, parse_trace
from aldlf.io import DefinitionError, afw_dot, afw_table, afw_text, dump_definitions, load_definitions
from aldlf.sat import SearchLimitExceeded, equivalence, search
from aldlf.semantics import eval_formula

EXIT_TRUE, EXIT_FALSE, EXIT_USAGE, EXIT_LIMIT = 0, 1, 2, 3


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    formulas: list = field(default_factory=list)  # (kind, text) pairs
    formula_files: list = field(default_factory=list)
    defs: str | None = None
    trace: str | None = None
    pos: int = 0
    ltlf: bool = False
    fmt: str = "text"
    max_states: int | None = None
    max_len: int | None = None
    verbose: int = 0


class _Append(argparse.Action):
    def __call__(self, parser, ns, value, option_string=None):
        kind = "ltlf" if self.const == "ltlf" else "formula"
        ns.formulas = (ns.formulas or []) + [(kind, value)]


def _positive(text: str) -> int:
    n = int(text)
    if n <= 0:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return n


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-f", "--formula", action=_Append, dest="formulas", const="formula",
                        nargs=None, metavar="TEXT", help="formula text (repeatable)")
    common.add_argument("-l", "--ltlf-formula", action=_Append, dest="formulas", const="ltlf",
                        metavar="TEXT", help="LTL_f formula text, translated (repeatable)")
    common.add_argument("--formula-file", action="append", default=[], metavar="FILE")
    common.add_argument("--defs", metavar="FILE", help="JSON file of named path automata")
    common.add_argument("--ltlf", action="store_true", help="read -f formulas as LTL_f (X, U)")
    common.add_argument("--format", dest="fmt", default="text",
                        choices=["text", "json", "structured", "dot"])
    common.add_argument("-v", "--verbose", action="count", default=0)

    p = argparse.ArgumentParser(prog="aldlf", description="ALDL_f formulas over finite traces.")
    sub = p.add_subparsers(dest="command", required=True)
    ev = sub.add_parser("eval", parents=[common], help="evaluate a formula on a trace")
    ev.add_argument("--trace", required=True, metavar="FILE")
    ev.add_argument("--pos", type=int, default=0)
    sub.add_parser("compile", parents=[common], help="dump the 2AFW of a formula")
    for name, text in (("sat", "satisfiability with a witness trace"),
                       ("equiv", "equivalence of two formulas")):
        sp = sub.add_parser(name, parents=[common], help=text)
        sp.add_argument("--max-states", type=_positive, metavar="N")
        sp.add_argument("--max-len", type=_positive, metavar="N")
    sub.add_parser("closure", parents=[common], help="list the closure of a formula")
    sub.add_parser("nnf", parents=[common], help="print the negation normal form")
    return p


def _config(ns: argparse.Namespace) -> RunConfig:
    return RunConfig(
        command=ns.command,
        formulas=list(ns.formulas or []),
        formula_files=list(ns.formula_file),
        defs=ns.defs,
        trace=getattr(ns, "trace", None),
        pos=getattr(ns, "pos", 0),
        ltlf=ns.ltlf,
        fmt="json" if ns.fmt == "structured" else ns.fmt,
        max_states=getattr(ns, "max_states", None),
        max_len=getattr(ns, "max_len", None),
        verbose=ns.verbose,
    )


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror or exc}") from exc


def load_formulas(cfg: RunConfig) -> tuple[list[S.Formula], dict]:
    defs = load_definitions(_read(cfg.defs)) if cfg.defs else {}
    sources = list(cfg.formulas) + [("formula", _read(p)) for p in cfg.formula_files]
    out = []
    for kind, text in sources:
        if kind == "ltlf" or cfg.ltlf:
            out.append(ltlf_to_aldlf(parse_ltlf(text)))
        else:
            out.append(parse_formula(text, defs))
    return out, defs


def _one(formulas: list, command: str) -> S.Formula:
    if len(formulas) != 1:
        raise UsageError(f"{command} needs exactly one formula, got {len(formulas)}")
    return formulas[0]


def _emit(cfg: RunConfig, text: str, data: dict):
    if cfg.fmt == "json":
        print(json.dumps(data, indent=2, sort_keys=True))
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _show(f: S.Formula, names: dict) -> str:
    return format_formula(f, names)


def _where(names: dict) -> str:
    if not names:
        return ""
    return "\nwhere " + json.dumps(dump_definitions(names), sort_keys=True)


def cmd_eval(cfg: RunConfig) -> int:
    formulas, _ = load_formulas(cfg)
    f = _one(formulas, "eval")
    if cfg.trace is None:
        raise UsageError("eval needs --trace")
    t = parse_trace(_read(cfg.trace))
    if not 0 <= cfg.pos < len(t):
        raise UsageError(f"--pos {cfg.pos} outside trace of length {len(t)}")
    value = eval_formula(f, t, cfg.pos)
    _emit(cfg, "true" if value else "false", {"position": cfg.pos, "value": value})
    return EXIT_TRUE if value else EXIT_FALSE


def cmd_compile(cfg: RunConfig) -> int:
    formulas, _ = load_formulas(cfg)
    a = compile_formula(S.to_nnf(_one(formulas, "compile")))
    try:
        if cfg.fmt == "dot":
            sys.stdout.write(afw_dot(a))
        elif cfg.fmt == "json":
            print(json.dumps(afw_table(a), indent=2, sort_keys=True))
        else:
            sys.stdout.write(afw_text(a))
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    return 0


def cmd_sat(cfg: RunConfig) -> int:
    formulas, _ = load_formulas(cfg)
    f = _one(formulas, "sat")
    res = search(f, cfg.max_states, cfg.max_len)
    if cfg.verbose:
        print(f"explored {res.explored} states", file=sys.stderr)
    if res.witness is None:
        _emit(cfg, "UNSAT", {"satisfiable": False})
        return EXIT_FALSE
    # the search already replays the witness against the direct semantics
    _emit(cfg, format_trace(res.witness),
          {"satisfiable": True, "witness": [sorted(x) for x in res.witness]})
    return EXIT_TRUE


def cmd_equiv(cfg: RunConfig) -> int:
    formulas, _ = load_formulas(cfg)
    if len(formulas) != 2:
        raise UsageError(f"equiv needs exactly two formulas, got {len(formulas)}")
    res = equivalence(*formulas, max_states=cfg.max_states, max_len=cfg.max_len)
    if res.equivalent:
        _emit(cfg, "equivalent", {"equivalent": True})
        return EXIT_TRUE
    w = res.counterexample
    _emit(cfg, f"not equivalent ({res.holds} formula holds on)\n" + format_trace(w),
          {"equivalent": False, "holds": res.holds, "counterexample": [sorted(x) for x in w]})
    return EXIT_FALSE


def cmd_closure(cfg: RunConfig) -> int:
    formulas, _ = load_formulas(cfg)
    f = S.to_nnf(_one(formulas, "closure"))
    names: dict = {}
    shown = [_show(g, names) for g in S.fischer_ladner_closure(f)]
    _emit(cfg, "\n".join(shown) + _where(names),
          {"closure": shown, "automata": dump_definitions(names)})
    return 0


def cmd_nnf(cfg: RunConfig) -> int:
    formulas, _ = load_formulas(cfg)
    names: dict = {}
    text = _show(S.to_nnf(_one(formulas, "nnf")), names)
    _emit(cfg, text + _where(names), {"nnf": text, "automata": dump_definitions(names)})
    return 0


COMMANDS = {"eval": cmd_eval, "compile": cmd_compile, "sat": cmd_sat,
            "equiv": cmd_equiv, "closure": cmd_closure, "nnf": cmd_nnf}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else 0
    cfg = _config(ns)
    try:
        return COMMANDS[cfg.command](cfg)
    except ParseError as exc:
        print(f"parse error at {exc}", file=sys.stderr)
    except (UsageError, DefinitionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
    except json.JSONDecodeError as exc:
        print(f"error: bad JSON in definitions: {exc}", file=sys.stderr)
    except SearchLimitExceeded as exc:
        print(f"search limit exceeded: {exc}", file=sys.stderr)
        return EXIT_LIMIT
    return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
