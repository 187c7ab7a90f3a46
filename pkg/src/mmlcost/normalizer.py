"""Per-predicate normalization of clause probability labels."""
from __future__ import annotations

from dataclasses import replace
from fractions import Fraction

from .errors import IncompatibleOptions, SumExceedsOne, UnsolvableNormalization
from .terms import Program


def check_options(normalize: bool, rulesprob: str) -> None:
    if not normalize and rulesprob == "zerobitslast":
        raise IncompatibleOptions(
            "--normalize=off cannot be combined with --rulesprob=zerobitslast "
            "(pick --rulesprob=notlast or --rulesprob=all)")


def _label(name, arity):
    return f"{name}/{arity}"


def normalize(prog: Program, mode: bool = True) -> Program:
    """Make every predicate group's labels sum to exactly one.

    Fully labeled groups are rescaled, unlabeled clauses share what is left,
    and unlabeled groups become uniform. Non-stochastic programs pass through.
    """
    if not prog.stochastic:
        return prog
    new_probs: dict = {}
    groups: dict = {}
    for i, c in enumerate(prog.clauses):
        groups.setdefault(c.key, []).append(i)
    for key, idx in groups.items():
        clauses = [prog.clauses[i] for i in idx]
        labeled = [c.prob for c in clauses if c.prob is not None]
        unlabeled = sum(1 for c in clauses if c.prob is None)
        total = sum(labeled, Fraction(0))
        where = _label(*key)
        if not mode:
            if total > 1:
                raise SumExceedsOne(f"probabilities of {where} sum to {float(total):.5f} > 1 "
                                    "and normalization is off")
            if unlabeled or total != 1:
                raise UnsolvableNormalization(
                    f"probabilities of {where} do not sum to 1 and normalization is off")
            continue
        if unlabeled and labeled:
            if total >= 1:
                raise UnsolvableNormalization(
                    f"{where}: labeled clauses already sum to {float(total):.5f}, "
                    "nothing left for the unlabeled ones")
            fill = (1 - total) / unlabeled
            probs = [c.prob if c.prob is not None else fill for c in clauses]
        elif unlabeled:
            probs = [Fraction(1, len(clauses))] * len(clauses)
        else:
            probs = [c.prob / total for c in clauses]
        new_probs.update(zip(idx, probs))
    if not mode:
        return prog
    clauses = tuple(replace(c, prob=new_probs[i]) for i, c in enumerate(prog.clauses))
    return Program(clauses, prog.role, prog.name)


def clause_labels(prog: Program) -> dict:
    """Choice probability of each clause (by position): its label, or uniform within
    the predicate group when the program carries no labels."""
    out = {}
    groups = prog.groups()
    for i, c in enumerate(prog.clauses):
        if c.prob is not None:
            out[i] = c.prob
        else:
            out[i] = Fraction(1, len(groups[c.key]))
    return out
