import json
import random

import pytest

from aldlf import syntax as S
from aldlf.afw import PTRUE, Afw, Move, PosOr, all_letters, compile_formula
from aldlf.game import accepts_game
from aldlf.io import dump_certificate, load_certificate
from aldlf.nfw import (INITIAL, PENDING, READY, REJECTED, NfwContext, NfwState, annotation_closure, certificate,
                       dead_ends, is_accepting_annotation, nfw_accepts, nfw_successors, verify_certificate)
from aldlf.semantics import Trace, eval_formula

from _gen import ATOMS, all_traces, formulas

A = {"a"}
TRACES3 = list(all_traces(ATOMS, 3))


def example_automaton(with_q2=True):
    if with_q2:
        table = [("q0", A, PosOr(Move("q1", 0), Move("q2", 0))),
                 ("q1", A, Move("q0", 0)),
                 ("q2", A, PTRUE)]
        return Afw.from_table(["q0", "q1", "q2"], "q0", [], table)
    table = [("q0", A, Move("q1", 0)), ("q1", A, Move("q0", 0))]
    return Afw.from_table(["q0", "q1"], "q0", [], table)


# ---- annotations


def test_annotation_zero_move():
    eta = annotation_closure([{("q", 0, "r")}], accepting={"r"})
    assert ("q", 1, "r") in eta[0]
    eta = annotation_closure([{("q", 0, "r")}], accepting=set())
    assert ("q", 0, "r") in eta[0]


def test_annotation_transitive_cycle():
    eta = annotation_closure([{("q", 0, "r"), ("r", 0, "q")}], accepting=set())
    assert ("q", 0, "q") in eta[0]
    assert not is_accepting_annotation(eta)


def test_annotation_right_excursion():
    eta = annotation_closure([{("q", 1, "r")}, {("r", -1, "s")}], accepting={"r"})
    assert ("q", 1, "s") in eta[0]
    assert eta[1] == frozenset()


def test_annotation_left_excursion():
    eta = annotation_closure([{("r", 1, "q")}, {("q", -1, "s")}], accepting=set())
    assert ("q", 0, "r") not in eta[1]
    eta = annotation_closure([{("s", 1, "t")}, {("q", -1, "s")}], accepting=set())
    assert ("q", 0, "t") in eta[1]


def literal_counterexample():
    true = S.Test(S.Prop(S.TRUE))
    u = S.make_automaton(("r0", "r1", "r2", "r3"),
                         [("r0", S.Future(S.TRUE), "r1"), ("r1", true, "r2"),
                          ("r2", S.Past(S.TRUE), "r3"), ("r3", true, "r0")], "r0", [])
    f = S.Diamond(u, S.atom("p"))
    a = compile_formula(f)
    d = {r: a.index[S.Diamond(u.rerooted(r), S.atom("p"))] for r in u.states}
    tr = a.index[S.Prop(S.TRUE)]
    gamma = [{(d["r0"], 1, d["r1"]), (d["r3"], 0, tr), (d["r3"], 0, d["r0"])},
             {(d["r1"], 0, tr), (d["r1"], 0, d["r2"]), (d["r2"], -1, d["r3"])}]
    return f, a, gamma


def test_excursion_through_neighbour_loop_is_a_cycle():
    f, a, gamma = literal_counterexample()
    w = Trace([set(), set()])
    literal = annotation_closure(gamma, a.accepting, excursions=False)
    full = annotation_closure(gamma, a.accepting)
    assert is_accepting_annotation(literal)
    assert not is_accepting_annotation(full)
    assert verify_certificate(a, w, gamma, full) == (False, "eta-accepting")
    assert verify_certificate(a, w, gamma, literal) == (False, "eta-right")
    assert not eval_formula(f, w) and not accepts_game(a, w) and not nfw_accepts(a, w)


# ---- certificates


def test_example_certificate_valid():
    a = example_automaton()
    gamma = [{(0, 0, 2)}]
    eta = annotation_closure(gamma, a.accepting)
    assert eta == [frozenset({(0, 0, 2)})]
    assert verify_certificate(a, Trace([A]), gamma, eta) == (True, None)


def test_example_certificate_bad_moves():
    a = example_automaton()
    gamma = [{(0, 0, 0)}]
    eta = annotation_closure(gamma, a.accepting)
    assert verify_certificate(a, Trace([A]), gamma, eta) == (False, "moves")


def test_example_certificate_cycle():
    a = example_automaton()
    gamma = [{(0, 0, 1), (1, 0, 0)}]
    eta = annotation_closure(gamma, a.accepting)
    assert (0, 0, 0) in eta[0]
    assert verify_certificate(a, Trace([A]), gamma, eta) == (False, "eta-accepting")


def test_certificate_initial_and_destination():
    a = example_automaton()
    assert verify_certificate(a, Trace([A]), [set()], [set()]) == (False, "initial")
    gamma = [{(0, 0, 1)}]
    assert verify_certificate(a, Trace([A]), gamma, annotation_closure(gamma, a.accepting)) == \
        (False, "destination")


def test_certificate_missing_eta():
    a = example_automaton()
    assert verify_certificate(a, Trace([A]), [{(0, 0, 2)}], [set()]) == (False, "eta-moves")


def test_certificate_length_mismatch():
    with pytest.raises(ValueError):
        verify_certificate(example_automaton(), Trace([A]), [], [])


def test_certificate_last_position():
    f = S.Diamond(S.make_automaton(("r0", "r1"), [("r0", S.Future(S.TRUE), "r1")], "r0", ["r1"]),
                  S.atom("p"))
    a = compile_formula(f)
    gamma = [{(0, 1, a.index[S.Diamond(f.automaton.rerooted("r1"), S.atom("p"))])}]
    assert verify_certificate(a, Trace([set()]), gamma, [set()]) == (False, "last")


@pytest.mark.parametrize("chunk", range(3))
def test_certificates_sound(chunk):
    for f in formulas(300 + chunk, 40):
        ctx = NfwContext(compile_formula(f))
        for t in TRACES3:
            cert = certificate(ctx, t)
            assert (cert is not None) == eval_formula(f, t) == accepts_game(ctx.afw, t)
            if cert is None:
                continue
            gamma, eta = cert
            assert verify_certificate(ctx.afw, t, gamma, eta) == (True, None)
            # every path following gamma ends where delta is True
            assert dead_ends(ctx.afw, t, gamma) == []


def test_certificate_mutations_never_crash():
    rng = random.Random(7)
    names = {None, "initial", "last", "moves", "destination", "eta-moves", "eta-transitive",
             "eta-accepting", "eta-right", "eta-left"}
    for f in formulas(400, 40):
        a = compile_formula(f)
        t = rng.choice(TRACES3)
        cert = certificate(a, t)
        if cert is None:
            continue
        gamma, eta = cert
        for u, letter in enumerate(gamma):
            for triple in letter:
                g2 = list(gamma)
                g2[u] = letter - {triple}
                ok, name = verify_certificate(a, t, g2, eta)
                assert name in names and ok == (name is None)
                ok, name = verify_certificate(a, t, g2, annotation_closure(g2, a.accepting))
                assert name in names and ok == (name is None)
                if ok:
                    assert accepts_game(a, t)


# ---- NFW


def test_successors_of_initial_state():
    a = example_automaton()
    succ = nfw_successors(a, NfwState(INITIAL), A, at_last=True)
    assert any(s.gamma == {(0, 0, 2)} and s.control == READY for s in succ)


def test_successors_dropped_on_cycle():
    assert nfw_successors(example_automaton(False), NfwState(INITIAL), A) == []


def test_rejected_is_sink():
    s = NfwState(REJECTED, frozenset())
    assert nfw_successors(example_automaton(), s, A) == []


def test_memory_none_iff_initial():
    with pytest.raises(ValueError):
        NfwState(READY)
    with pytest.raises(ValueError):
        NfwState(INITIAL, frozenset())


def test_pending_control_not_accepting_at_end():
    f = S.Diamond(S.make_automaton(("r0", "r1"), [("r0", S.Future(S.TRUE), "r1")], "r0", ["r1"]),
                  S.atom("p"))
    a = compile_formula(f)
    succ = nfw_successors(a, NfwState(INITIAL), set())
    assert succ and all(s.control == PENDING for s in succ)
    assert nfw_successors(a, NfwState(INITIAL), set(), at_last=True) == []


def test_nfw_accepts_examples():
    assert nfw_accepts(example_automaton(), Trace([A]))
    assert not nfw_accepts(example_automaton(False), Trace([A]))
    assert not nfw_accepts(compile_formula(S.atom("p")), Trace([set()]))


@pytest.mark.parametrize("chunk", range(2))
def test_state_size_bound(chunk):
    for f in formulas(500 + chunk, 30):
        ctx = NfwContext(compile_formula(f))
        n = len(ctx.afw)
        letters = all_letters(ctx.afw.atoms)
        layer = [NfwState(INITIAL)]
        for depth in range(3):
            nxt = []
            for s in layer:
                for letter in letters:
                    for s2 in ctx.successors(s, letter):
                        assert s2.size() <= 3 * n * n + 2 * n * n
                        assert s2.letter is not None
                        nxt.append(s2)
            layer = nxt[:200]


def test_certificate_dump_round_trip():
    for f in formulas(450, 10):
        a = compile_formula(f)
        for t in TRACES3[:20]:
            cert = certificate(a, t)
            if cert is None:
                continue
            gamma, eta = load_certificate(json.dumps(dump_certificate(*cert)))
            assert gamma == list(cert[0]) and eta == list(cert[1])
            assert verify_certificate(a, t, gamma, eta) == (True, None)
