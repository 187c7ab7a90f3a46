"""End-to-end analysis of one (program, evidence, KB) combination."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

from .coder import RULESPROB_MODES, CostBreakdown, cost_program
from .errors import InfiniteModel, InvalidArgument, MMLError
from .evidence import (
    EvidenceResult, cost_evidence_pc, evaluate_evidence, mc_evidence_cost, simple_theory_cost,
)
from .normalizer import check_options, normalize
from .solver import Solver, check_termination
from .terms import Program, extract_signature

COMPARE_MODES = ("ec", "mc", "pc")


@dataclass
class Options:
    precision: float = 1e-5
    numbers: bool = False
    predefined: bool = False
    normalize: bool = True
    rulesprob: str = "zerobitslast"
    maxrecursion: int = 20
    strict: bool = False
    compare: tuple = ()

    def validate(self):
        if self.rulesprob not in RULESPROB_MODES:
            raise InvalidArgument(f"unknown --rulesprob value {self.rulesprob!r}")
        if self.maxrecursion < 1:
            raise InvalidArgument("--maxrecursion must be a positive integer")
        for mode in self.compare:
            if mode not in COMPARE_MODES:
                raise InvalidArgument(f"unknown --compare coder {mode!r}")
        check_options(self.normalize, self.rulesprob)


@dataclass
class Analysis:
    breakdown: CostBreakdown
    program: Program
    kb: Optional[Program]
    evidence: Optional[Program]
    solver: Optional[Solver] = None
    result: Optional[EvidenceResult] = None
    warnings: list = field(default_factory=list)


def _prepare(prog: Optional[Program], options: Options) -> Optional[Program]:
    if prog is None:
        return None
    return normalize(prog, options.normalize)


def analyze(prog: Program, evidence: Optional[Program] = None, kb: Optional[Program] = None,
            options: Optional[Options] = None, trace: Optional[Callable] = None) -> Analysis:
    options = options or Options()
    options.validate()
    prog = _prepare(prog, options)
    kb = _prepare(kb, options) if kb is not None and kb.clauses else None
    sig = extract_signature(prog, kb, evidence, options.numbers, options.predefined)
    b = cost_program(prog, kb, evidence, options.numbers, options.predefined,
                     options.rulesprob, sig)
    check_termination(prog)
    if kb is not None:
        check_termination(kb)
    out = Analysis(b, prog, kb, evidence)
    if evidence is None or not evidence.clauses:
        return out
    solver = Solver(prog, kb, sig, options.maxrecursion, options.strict, trace)
    out.solver = solver
    out.result = evaluate_evidence(solver, evidence, options.strict)
    b.examples = out.result.bits
    b.n_e = out.result.size
    b.partial = out.result.partial
    b.extra["evidence_probabilities"] = out.result.probabilities
    for mode in options.compare:
        b.extra[mode] = _baseline(mode, b, prog, sig, solver, evidence)
    out.warnings = list(solver.warnings.items)
    return out


def _baseline(mode, b: CostBreakdown, prog, sig, solver, evidence) -> dict:
    """Theory and evidence lengths under one coder; 'infinite' when it does not apply."""
    if mode == "ec":
        return {"theory": b.program, "evidence": b.examples}
    theory = simple_theory_cost(prog, sig)
    try:
        if mode == "mc":
            bits = mc_evidence_cost(solver, sig, evidence)
        else:
            bits = cost_evidence_pc(solver, evidence)
    except InfiniteModel:
        return {"theory": theory, "evidence": "infinite"}
    except MMLError as e:
        return {"theory": theory, "evidence": f"n/a ({e})"}
    return {"theory": theory, "evidence": bits}
