"""MML code lengths for (stochastic) logic programs and their evidence."""
from .analysis import Analysis, Options, analyze
from .coder import CostBreakdown, cost_program
from .errors import MMLError
from .evidence import cost_evidence, cost_evidence_mc, cost_evidence_pc, evaluate_evidence
from .normalizer import normalize
from .numcode import code_length, rational_approx, rational_cost, var_assignments
from .reader import read_program, read_term
from .solver import Solver
from .terms import extract_signature

__all__ = [
    "Analysis", "Options", "analyze", "CostBreakdown", "cost_program", "MMLError",
    "cost_evidence", "cost_evidence_mc", "cost_evidence_pc", "evaluate_evidence", "normalize",
    "code_length", "rational_approx", "rational_cost", "var_assignments", "read_program",
    "read_term", "Solver", "extract_signature",
]
