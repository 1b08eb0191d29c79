import random
import time

import pytest

from aldlf import syntax as S
from aldlf.frontends.parser import parse_formula
from aldlf.sat import SearchLimitExceeded, equivalence, is_satisfiable, search
from aldlf.semantics import Trace, eval_formula

from _gen import all_traces, formulas, gen_automaton, gen_nnf

p, q = S.atom("p"), S.atom("q")
U = S.make_automaton(("a", "b"), [("a", S.Future(S.Atom("p")), "b"), ("b", S.Past(S.TRUE), "a")],
                     "a", ["b"])


def test_atom_witness():
    assert is_satisfiable(p) == Trace([{"p"}])


def test_contradiction_unsat():
    assert is_satisfiable(S.And(p, S.Not(p))) is None


def test_nullable_star_witness():
    f = parse_formula("<(p*)*> q")
    start = time.perf_counter()
    w = is_satisfiable(f)
    assert time.perf_counter() - start < 1.0
    assert w is not None and eval_formula(f, w)


def test_witness_is_shortest():
    f = parse_formula("<true ; true ; true> p")
    w = is_satisfiable(f)
    assert len(w) == 4 and eval_formula(f, w)


def test_past_needs_history():
    f = parse_formula("<true> <back(p)> q")
    w = is_satisfiable(f)
    assert w is not None and eval_formula(f, w)


def test_limits():
    f = parse_formula("<true ; true ; true> p")
    with pytest.raises(SearchLimitExceeded):
        search(f, max_states=1)
    with pytest.raises(SearchLimitExceeded):
        search(f, max_len=2)
    assert search(f, max_len=4).witness is not None
    assert search(S.And(p, S.Not(p)), max_len=3).witness is None


def test_deterministic():
    f = parse_formula("<(p + q)*> (p & q)")
    assert is_satisfiable(f) == is_satisfiable(f)


@pytest.mark.parametrize("chunk", range(3))
def test_sat_sound_and_complete(chunk):
    for f in formulas(600 + chunk, 25, max_size=16):
        w = is_satisfiable(f)
        if w is not None:
            assert eval_formula(f, w)
        else:
            atoms = sorted(S.formula_atoms(f))
            assert not any(eval_formula(f, t) for t in all_traces(atoms, 3))


# ---- equivalence


def test_equivalent_to_nnf():
    rng = random.Random(3)
    for _ in range(10):
        f = S.Not(gen_nnf(rng, 3))
        assert equivalence(f, S.to_nnf(f)).equivalent


def test_diamond_box_duality():
    assert equivalence(S.Diamond(U, p), S.Not(S.Box(U, S.Not(p)))).equivalent
    assert equivalence(S.Box(U, p), S.Not(S.Diamond(U, S.Not(p)))).equivalent


def test_counterexample():
    res = equivalence(p, q)
    assert not res.equivalent
    assert res.counterexample == Trace([{"p"}]) and res.holds == "left"


def test_random_duality_pairs():
    rng = random.Random(11)
    for _ in range(5):
        a = gen_automaton(rng, 1)
        f = gen_nnf(rng, 1)
        assert equivalence(S.Diamond(a, f), S.Not(S.Box(a, S.Not(f)))).equivalent
