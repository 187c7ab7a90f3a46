"""Cost of the evidence given a theory, plus the MC and PC baseline coders."""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import ExampleNotCovered, InfiniteModel
from .numcode import code_length, log2_multinomial
from .solver import Solver, first_refutation
from .terms import Program, Signature, Struct, Var, format_term, pred_key, term_vars


def cost_evidence(examples) -> float:
    """examples: iterable of (atom, reps, probability) with probabilities in (0, 1]."""
    examples = list(examples)
    if not examples:
        return 0.0
    reps = [r for _, r, _ in examples]
    surprisal = 0.0
    for atom, r, p in examples:
        if not p > 0:
            raise ExampleNotCovered(f"example {format_term(atom)} has probability 0")
        surprisal += r * -math.log2(p)
    return code_length(sum(reps)) + surprisal - log2_multinomial(reps)


@dataclass
class EvidenceResult:
    bits: float = 0.0
    probabilities: list = field(default_factory=list)  # (atom, reps, normalized probability)
    uncovered: list = field(default_factory=list)

    @property
    def partial(self) -> bool:
        return bool(self.uncovered)

    @property
    def size(self) -> int:
        return sum(r for _, r, _ in self.probabilities)


def evaluate_evidence(solver: Solver, evidence: Program, strict: bool = False) -> EvidenceResult:
    """Probabilities of every example and Cost(E|T); uncovered examples are left out
    (or abort in strict mode)."""
    result = EvidenceResult()
    for c in evidence.clauses:
        p = solver.solve_example(c.head, strict=strict)
        if p > 0:
            result.probabilities.append((c.head, c.reps, p))
        else:
            result.uncovered.append(c.head)
    result.bits = cost_evidence(result.probabilities)
    return result


# -- baselines ---------------------------------------------------------------------

def simple_theory_cost(prog: Program, sig: Signature) -> float:
    """Theory length used with the MC and PC coders: counts of rules, literals and symbols."""
    v = max((len(set(itertools.chain(term_vars(c.head), *map(term_vars, c.body))))
             for c in prog.clauses), default=0)
    n_p = max(1, sig.n_p)
    n_f = sig.solver_symbols
    bits = math.log2(v + 1) + 1 + 2 * len(prog.clauses)
    for c in prog.clauses:
        bits += 2 * len(c.body)
        for atom in (c.head, *c.body):
            arity = len(atom.args) if isinstance(atom, Struct) else 0
            bits += math.log2(n_p) + (arity * math.log2(v + n_f) if v + n_f > 0 else 0.0)
    return bits


def cost_evidence_mc(q_size: int, e_size: int) -> float:
    if e_size > q_size:
        raise ValueError("more examples than derivable atoms")
    return math.log2(math.comb(q_size, e_size)) + 1


def model_atoms(solver: Solver, sig: Signature, keys) -> set:
    """Ground atoms of the given predicates derivable from the theory (finite case only)."""
    constants = sig.constants()
    atoms: set = set()
    for key in keys:
        dist = solver.estimate_distribution(key)
        if dist.pruned:
            raise InfiniteModel(f"{key[0]}/{key[1]} has unbounded derivations")
        for pattern in dist.entries:
            free = list(dict.fromkeys(term_vars(pattern)))
            if free and sig.has_compound_functions:
                raise InfiniteModel(f"{format_term(pattern)} ranges over infinitely many terms")
            for values in itertools.product(constants, repeat=len(free)):
                atoms.add(_substitute(pattern, dict(zip(free, values))))
    return atoms


def _substitute(t, mapping):
    if isinstance(t, Var):
        return mapping.get(t, t)
    if isinstance(t, Struct):
        return Struct(t.functor, tuple(_substitute(a, mapping) for a in t.args))
    return t


def mc_evidence_cost(solver: Solver, sig: Signature, evidence: Program) -> float:
    keys = list(dict.fromkeys(pred_key(c.head) for c in evidence.clauses))
    q = model_atoms(solver, sig, keys)
    e_size = len(evidence.clauses)
    return cost_evidence_mc(len(q), e_size)


def cost_evidence_pc(solver: Solver, evidence: Program, code_free: bool = False) -> float:
    """Sum over examples of log2 of the choice points of their first refutation.

    With code_free, symbols chosen for unconstrained variables are paid at
    log2 |F| each as well.
    """
    bits = 0.0
    per_symbol = math.log2(solver.symbols) if solver.symbols > 1 else 0.0
    for c in evidence.clauses:
        proof = first_refutation(solver, c.head)
        if proof is None:
            raise ExampleNotCovered(f"example {format_term(c.head)} has no refutation")
        steps, generated = proof
        one = sum(math.log2(n) for _, n in steps)
        if code_free:
            one += generated * per_symbol
        bits += c.reps * one
    return bits
