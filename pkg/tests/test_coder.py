import re

import pytest
from hypothesis import given, settings, strategies as st

from mmlcost.coder import (
    body_cost, cost_program, cost_rules, cost_signature, cost_term, head_cost,
    probability_costs, vars_cost,
)
from mmlcost.corpus import load
from mmlcost.errors import DuplicateDefinition
from mmlcost.normalizer import normalize
from mmlcost.reader import read_program, read_term
from mmlcost.terms import Signature, extract_signature

from _helpers import prog


def test_signature_example():
    sig = Signature(frozenset({("p", 3), ("q", 1), ("r", 3)}), frozenset(), frozenset({("f", 0)}))
    assert cost_signature(sig) == pytest.approx(17.88444, abs=1e-3)


def test_reachability_lexicon():
    p = load("reach_t1.pl", "program")
    kb = load("reach_kb.pl", "knowledge-base")
    ev = load("reach_evidence.pl", "evidence")
    sig = extract_signature(p, kb, ev, include_numbers=True)
    assert sig.program_preds == {("reach", 2)}
    assert len(sig.funcs) == 9
    assert cost_signature(sig) == pytest.approx(18.21158, abs=1e-3)


def test_p7_parts():
    b = cost_program(load("p7.pl", "program"), include_numbers=True)
    assert b.heads == 14.0
    assert b.rule_costs[0].body == pytest.approx(9.76870, abs=1e-3)
    assert b.rule_costs[0].vars == pytest.approx(3.80735, abs=1e-3)


@pytest.mark.parametrize("t,heads,bodies,vars_", [
    ("t2", 177.45715, 0.0, 0.0), ("t4", 6.0, 11.03859, 8.97728), ("t6", 6.0, 15.28800, 12.88417),
])
def test_reachability_parts(t, heads, bodies, vars_):
    p = load(f"reach_{t}.pl", "program")
    b = cost_program(p, load("reach_kb.pl", "knowledge-base"),
                     load("reach_evidence.pl", "evidence"), include_numbers=True)
    assert b.heads == pytest.approx(heads, abs=1e-3)
    assert b.bodies == pytest.approx(bodies, abs=1e-3)
    assert b.vars == pytest.approx(vars_, abs=1e-3)
    assert b.kb == pytest.approx(100.7642, abs=1e-3)


def test_facts_have_no_body_cost():
    c = prog("p(X, s(0)).").clauses[0]
    assert body_cost(c, 3, 4) == 0.0


def test_ground_program_has_no_vars_cost():
    p = prog("p(a). q(b) :- p(a).")
    assert cost_program(p).vars == 0.0


def test_term_cost_counts_symbols():
    assert cost_term(read_term("X"), 4) == 1.0
    assert cost_term(read_term("s(s(0))"), 4) == pytest.approx(9.0)
    assert cost_term(read_term("3"), 4, include_numbers=False) == 1.0


def test_rules_cost():
    assert cost_rules(5) == pytest.approx(5.33789, abs=1e-3)
    with pytest.raises(ValueError):
        cost_rules(0)


def test_builtins_skipped_unless_predefined():
    c = prog("p(X) :- q(X), X > 2.").clauses[0]
    assert body_cost(c, 2, 1) < body_cost(c, 3, 1, include_predefined=True)


def test_stochastic_example_zerobitslast():
    p = normalize(prog("0.25 :: p(0). 0.25 :: p(1). 0.50 :: p(X) :- X > 20."))
    assert sum(probability_costs(p).values()) == pytest.approx(11.03858, abs=1e-3)


def test_rulesprob_modes():
    p = normalize(prog("0.8888 :: p(a). 0.1111 :: p(b). 0.4 :: q(a). 0.3 :: q(b). 0.3 :: q(c). "
                       "1 :: r(a)."))
    zero = probability_costs(p, "zerobitslast")
    notlast = probability_costs(p, "notlast")
    every = probability_costs(p, "all")
    assert len(zero) == 3
    assert notlast[-1] == 3.0 and len(notlast) == 4
    assert len(every) == 6


def test_duplicate_definition():
    with pytest.raises(DuplicateDefinition) as info:
        extract_signature(prog("p(a)."), prog("p(b).", "knowledge-base"))
    assert info.value.code == 14


def test_undefined_symbol_is_a_function():
    sig = extract_signature(prog("p(X) :- q(X, r(a))."))
    assert ("r", 1) in sig.funcs and ("q", 2) in sig.program_preds


PROGRAMS = [
    "pred1(s(X),Y):-pred2(s(X)),pred2(Y). pred2(s(s(X))):-pred2(X). pred2(0).",
    "reach(X,Y):-linked(X,Y). reach(X,Y):-linked(X,Z),reach(Z,Y). linked(a,b). linked(b,c).",
    "0.3 :: p(X,Y):-q(X),q(Y). 0.3 :: p(X,Y):-q(X). 0.4 :: p(a,b). q(a). q(b). q(c).",
    "sum(0,X,X). sum(s(X),Y,s(Z)):-sum(X,Y,Z).",
]


def _rename_vars(text, suffix):
    return re.sub(r"\b([A-Z]\w*)", lambda m: m.group(1) + suffix, text)


def _costs(text):
    b = cost_program(normalize(read_program(text)), include_numbers=True)
    return (b.rules, b.lexicon, b.heads, b.bodies, b.vars, b.prob)


@pytest.mark.parametrize("text", PROGRAMS)
def test_alpha_renaming_invariance(text):
    assert _costs(text) == _costs(_rename_vars(text, "_Renamed"))


@settings(max_examples=40)
@given(st.sampled_from(PROGRAMS), st.permutations(["pa", "pb", "pc", "pd", "pe", "pf", "pg",
                                                   "ph", "pi", "pj"]))
def test_symbol_renaming_invariance(text, names):
    symbols = sorted(set(re.findall(r"\b([a-z]\w*)", text)))
    mapping = dict(zip(symbols, names))
    renamed = re.sub(r"\b([a-z]\w*)", lambda m: mapping[m.group(1)], text)
    assert _costs(renamed) == pytest.approx(_costs(text))
