"""Message length of a program: rule count, lexicon, heads, bodies, variables, labels."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

from .numcode import code_length, rational_cost, var_assignments
from .terms import (
    Clause, Num, Program, Signature, Struct, Var, count_variable_positions, extract_signature,
    is_builtin, pred_key,
)

RULESPROB_MODES = ("zerobitslast", "notlast", "all")


@dataclass
class CostBreakdown:
    rules: float = 0.0
    lexicon: float = 0.0
    heads: float = 0.0
    bodies: float = 0.0
    vars: float = 0.0
    prob: float = 0.0
    examples: float = 0.0
    kb: float = 0.0
    n_r: int = 0
    n_p: int = 0
    n_f: int = 0
    n_e: int = 0
    predicates: list = field(default_factory=list)
    functions: list = field(default_factory=list)
    partial: bool = False
    rule_costs: list = field(default_factory=list)
    extra: dict = field(default_factory=dict)

    @property
    def program(self) -> float:
        return self.rules + self.lexicon + self.heads + self.bodies + self.vars + self.prob

    @property
    def total(self) -> float:
        return self.program + self.examples + self.kb


@dataclass(frozen=True)
class RuleCost:
    index: int
    clause: Clause
    head: float
    body: float
    vars: float
    prob: float


def _log2(n: int) -> float:
    return math.log2(n) if n > 1 else 0.0


def cost_rules(n_r: int) -> float:
    if n_r < 1:
        raise ValueError("an empty program has no rule count to code")
    return code_length(n_r)


def _arity_classes(symbols) -> tuple:
    arities = [a for _, a in symbols]
    top = max(arities, default=0)
    counts = [0] * (top + 1)
    for a in arities:
        counts[a] += 1
    return top, counts


def cost_signature(sig: Signature) -> float:
    max_p, pcounts = _arity_classes(sig.program_preds)
    max_f, fcounts = _arity_classes(sig.funcs)
    bits = code_length(1 + max_p) + code_length(1 + max_f)
    bits += sum(code_length(1 + c) for c in pcounts)
    bits += sum(code_length(1 + c) for c in fcounts)
    return bits


def cost_term(t, n_f: int, include_numbers: bool = True) -> float:
    """One discriminator bit, then the symbol and its arguments for non-variables."""
    if isinstance(t, Var):
        return 1.0
    if isinstance(t, Num) and not include_numbers:
        return 1.0
    bits = 1.0 + _log2(n_f)
    if isinstance(t, Struct):
        bits += sum(cost_term(a, n_f, include_numbers) for a in t.args)
    return bits


def _args(t):
    return t.args if isinstance(t, Struct) else ()


def head_cost(c: Clause, n_p: int, n_f: int, include_numbers: bool = True) -> float:
    return _log2(n_p) + sum(cost_term(a, n_f, include_numbers) for a in _args(c.head))


def _skipper(include_predefined: bool):
    if include_predefined:
        return None
    return lambda lit: is_builtin(pred_key(lit))


def body_cost(c: Clause, n_p: int, n_f: int, include_predefined: bool = False,
              include_numbers: bool = True) -> float:
    if c.is_fact:
        return 0.0
    skip = _skipper(include_predefined)
    coded = [lit for lit in c.body if skip is None or not skip(lit)]
    bits = code_length(1 + len(coded))
    for lit in coded:
        bits += _log2(n_p) + sum(cost_term(a, n_f, include_numbers) for a in _args(lit))
    return bits


def vars_cost(c: Clause, include_predefined: bool = False) -> float:
    d, n_v = count_variable_positions(c, _skipper(include_predefined))
    return math.log2(var_assignments(d, n_v))


def cost_heads(prog: Program, n_p: int, n_f: int, include_numbers: bool = True) -> float:
    return sum(head_cost(c, n_p, n_f, include_numbers) for c in prog.clauses)


def cost_bodies(prog: Program, n_p: int, n_f: int, include_predefined: bool = False,
                include_numbers: bool = True) -> float:
    return sum(body_cost(c, n_p, n_f, include_predefined, include_numbers) for c in prog.clauses)


def cost_vars(prog: Program, include_predefined: bool = False) -> float:
    return sum(vars_cost(c, include_predefined) for c in prog.clauses)


def probability_costs(prog: Program, mode: str = "zerobitslast") -> dict:
    """Bits spent on each clause label, keyed by clause position, plus group bits under -1."""
    if mode not in RULESPROB_MODES:
        raise ValueError(f"unknown rulesprob mode {mode!r}")
    out: dict = {}
    if not prog.stochastic:
        return out
    groups: dict = {}
    for i, c in enumerate(prog.clauses):
        groups.setdefault(c.key, []).append(i)
    for idx in groups.values():
        coded = idx if mode == "all" else idx[:-1]
        for i in coded:
            p = prog.clauses[i].prob
            if p is None:
                continue
            if mode == "zerobitslast" and p == 1:
                continue
            out[i] = rational_cost(p)
    if mode == "notlast":
        out[-1] = float(len(groups))
    return out


def cost_probabilities(prog: Program, mode: str = "zerobitslast") -> float:
    return sum(probability_costs(prog, mode).values())


def _symbol_list(symbols) -> list:
    return [f"{n}/{a}" for n, a in sorted(symbols, key=lambda s: (s[1], s[0]))]


def cost_program(prog: Program, kb: Optional[Program] = None, evidence: Optional[Program] = None,
                 include_numbers: bool = False, include_predefined: bool = False,
                 rulesprob: str = "zerobitslast", sig: Optional[Signature] = None) -> CostBreakdown:
    """Cost of the program (and of the KB, reported apart); evidence only feeds the signature."""
    if sig is None:
        sig = extract_signature(prog, kb, evidence, include_numbers, include_predefined)
    n_p, n_f = max(1, sig.n_p), sig.n_f
    pcost = probability_costs(prog, rulesprob)
    b = CostBreakdown(n_r=len(prog.clauses), n_p=len(sig.program_preds), n_f=n_f,
                      predicates=_symbol_list(sig.program_preds),
                      functions=_symbol_list(sig.funcs))
    b.rules = cost_rules(len(prog.clauses)) if prog.clauses else 0.0
    b.lexicon = cost_signature(sig)
    for i, c in enumerate(prog.clauses):
        rc = RuleCost(i + 1, c,
                      head_cost(c, n_p, n_f, include_numbers),
                      body_cost(c, n_p, n_f, include_predefined, include_numbers),
                      vars_cost(c, include_predefined),
                      pcost.get(i, 0.0))
        b.rule_costs.append(rc)
        b.heads += rc.head
        b.bodies += rc.body
        b.vars += rc.vars
    b.prob = sum(pcost.values())
    if kb is not None and kb.clauses:
        b.kb = (cost_rules(len(kb.clauses))
                + cost_heads(kb, n_p, n_f, include_numbers)
                + cost_bodies(kb, n_p, n_f, include_predefined, include_numbers)
                + cost_vars(kb, include_predefined))
    b.extra["kb_predicates"] = _symbol_list(sig.kb_preds)
    return b
