"""Shared helpers: run corpus entries and read off the fragments they promise."""
from __future__ import annotations

from fractions import Fraction

from mmlcost.analysis import Options, analyze
from mmlcost.corpus import load
from mmlcost.normalizer import normalize
from mmlcost.reader import read_program, read_term
from mmlcost.solver import Solver
from mmlcost.terms import extract_signature


def prog(text, role="program"):
    return read_program(text, role)


def run_entry(entry):
    p = load(entry.program, "program")
    ev = load(entry.evidence, "evidence")
    kb = load(entry.kb, "knowledge-base")
    return analyze(p, ev, kb, Options(**entry.options))


def fragment(analysis, key):
    b = analysis.breakdown
    if key.startswith("rule") and "." in key:
        index, part = key[4:].split(".")
        return getattr(b.rule_costs[int(index) - 1], part)
    if key.startswith("example:"):
        atom = read_term(key.split(":", 1)[1])
        for a, _, p in analysis.result.probabilities:
            if a == atom:
                return p
        return Fraction(0)
    if key.startswith("label:"):
        return analysis.program.clauses[int(key.split(":")[1]) - 1].prob
    return getattr(b, key)


def solver_for(text, evidence=None, numbers=False, **kw):
    p = normalize(prog(text))
    ev = prog(evidence, "evidence") if evidence else None
    sig = extract_signature(p, None, ev, numbers)
    return Solver(p, None, sig, **kw)
