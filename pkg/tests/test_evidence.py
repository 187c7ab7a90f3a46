import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from mmlcost.corpus import load
from mmlcost.errors import InfiniteModel
from mmlcost.evidence import (
    cost_evidence, cost_evidence_mc, cost_evidence_pc, evaluate_evidence, mc_evidence_cost,
    model_atoms, simple_theory_cost,
)
from mmlcost.numcode import code_length
from mmlcost.reader import read_term
from mmlcost.solver import Solver
from mmlcost.terms import extract_signature

from _helpers import prog, solver_for

EVEN = "even(0). even(s(s(X))):-even(X)."


def test_even_evidence():
    examples = [(read_term("even(0)"), 3, Fraction(1, 2)),
                (read_term("even(s(s(0)))"), 2, Fraction(1, 4))]
    assert cost_evidence(examples) == pytest.approx(9.01596, abs=1e-3)


def test_even_evidence_through_solver():
    s = solver_for(EVEN)
    r = evaluate_evidence(s, prog("3 # even(0). 2 # even(s(s(0))).", "evidence"))
    assert r.bits == pytest.approx(9.01596, abs=1e-3)
    assert r.size == 5 and not r.partial


def test_certain_singleton():
    assert cost_evidence([(read_term("p(a)"), 1, Fraction(1))]) == pytest.approx(1.51929, abs=1e-4)


def test_empty_evidence():
    assert cost_evidence([]) == 0.0


def test_merge_equivalence():
    s = solver_for(EVEN)
    merged = evaluate_evidence(s, prog("3 # even(0). 2 # even(s(s(0))).", "evidence")).bits
    literal = evaluate_evidence(s, prog("even(0). even(s(s(0))). even(0). even(0). "
                                        "even(s(s(0))).", "evidence")).bits
    assert merged == literal


@given(st.lists(st.tuples(st.integers(1, 6), st.fractions(Fraction(1, 100), 1)), min_size=1,
                max_size=6), st.randoms())
def test_permutation_invariance(items, rnd):
    examples = [(read_term(f"e({i})"), r, p) for i, (r, p) in enumerate(items)]
    shuffled = examples[:]
    rnd.shuffle(shuffled)
    assert cost_evidence(shuffled) == pytest.approx(cost_evidence(examples))


@given(st.integers(1, 30))
def test_certain_distinct_examples(n):
    examples = [(read_term(f"e({i})"), 1, Fraction(1)) for i in range(n)]
    assert cost_evidence(examples) == pytest.approx(code_length(n) - math.log2(math.factorial(n)))


@given(st.lists(st.tuples(st.integers(1, 5), st.fractions(Fraction(1, 50), 1)), min_size=1,
                max_size=5), st.integers(2, 4))
def test_scaling_reps(items, k):
    base = [(read_term(f"e({i})"), r, p) for i, (r, p) in enumerate(items)]
    scaled = [(a, r * k, p) for a, r, p in base]
    surprisal = sum(r * -math.log2(p) for _, r, p in base)
    delta = cost_evidence(scaled) - cost_evidence(base)
    from mmlcost.numcode import log2_multinomial
    expected = ((k - 1) * surprisal
                + code_length(sum(r for _, r, _ in scaled)) - code_length(sum(r for _, r, _ in base))
                - log2_multinomial([r for _, r, _ in scaled]) + log2_multinomial([r for _, r, _ in base]))
    assert delta == pytest.approx(expected, abs=1e-6)


def test_uncovered_examples_are_left_out():
    s = solver_for("p(a). p(b).")
    r = evaluate_evidence(s, prog("p(a). p(c).", "evidence"))
    assert r.partial and len(r.uncovered) == 1
    assert r.bits == pytest.approx(cost_evidence([(read_term("p(a)"), 1, Fraction(1, 2))]))


def test_mc_coder():
    assert cost_evidence_mc(19, 19) == 1.0
    assert cost_evidence_mc(20, 19) == pytest.approx(math.log2(20) + 1)


def test_mc_on_reachability():
    p = load("reach_t1.pl", "program")
    kb = load("reach_kb.pl", "knowledge-base")
    ev = load("reach_evidence.pl", "evidence")
    sig = extract_signature(p, kb, ev, True)
    s = Solver(p, kb, sig)
    assert len(model_atoms(s, sig, [("reach", 2)])) == 9 * 9
    assert mc_evidence_cost(s, sig, ev) == pytest.approx(math.log2(math.comb(81, 19)) + 1)


def test_mc_refuses_infinite_models():
    s = solver_for(EVEN)
    sig = extract_signature(prog(EVEN))
    with pytest.raises(InfiniteModel):
        mc_evidence_cost(s, sig, prog("even(0).", "evidence"))


def test_pc_coder():
    s = solver_for("p(a). p(b). q(X) :- p(X). r(a). t(a). t(X) :- p(X).")
    assert cost_evidence_pc(s, prog("r(a).", "evidence")) == 0.0
    assert cost_evidence_pc(s, prog("t(a).", "evidence")) == 1.0
    assert cost_evidence_pc(s, prog("t(b).", "evidence")) == 0.0
    assert cost_evidence_pc(s, prog("2 # t(a).", "evidence")) == 2.0


def test_simple_theory_cost():
    p = load("reach_t1.pl", "program")
    kb = load("reach_kb.pl", "knowledge-base")
    ev = load("reach_evidence.pl", "evidence")
    sig = extract_signature(p, kb, ev, True)
    # one atom reach(X,Y): log2(3) + 1 + 2 + log2 2 + 2 log2(2 + 9)
    assert simple_theory_cost(p, sig) == pytest.approx(12.5, abs=0.01)
