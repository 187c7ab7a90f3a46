"""Bundled example programs with the figures they are expected to reproduce."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from typing import Optional

from ..reader import read_program
from ..terms import Program


@dataclass(frozen=True)
class CorpusEntry:
    name: str
    program: str
    evidence: Optional[str] = None
    kb: Optional[str] = None
    options: dict = field(default_factory=dict)
    # breakdown field (or "rule<i>.<part>", "example:<atom>", "label:<index>") -> (value, tolerance)
    expected: dict = field(default_factory=dict)
    # reference figures the implementation does not reach; kept for reference only
    unreproduced: dict = field(default_factory=dict)
    error_code: Optional[int] = None


def data_path(filename: str):
    return resources.files(__name__).joinpath("data", filename)


def read_text(filename: str) -> str:
    return data_path(filename).read_text(encoding="utf-8")


def load(filename: Optional[str], role: str) -> Optional[Program]:
    if filename is None:
        return None
    return read_program(read_text(filename), role, filename)


REACH = {
    # rules, heads, bodies, vars, program
    "t1": (1.51929, 3.0, 0.0, 1.0, 23.73087),
    "t2": (9.00103, 177.45715, 0.0, 0.0, 204.66976),
    "t3": (7.36570, 87.05865, 5.51929, 3.80735, 121.96257),
    "t4": (2.51929, 6.0, 11.03859, 8.97728, 46.74674),
    "t5": (5.92873, 43.35940, 15.28800, 12.88417, 95.67187),
    "t6": (2.51929, 6.0, 15.28800, 12.88417, 54.90304),
}


def _reach_entries():
    out = []
    for t, (rules, heads, bodies, vars_, program) in REACH.items():
        out.append(CorpusEntry(
            f"reach_{t}", f"reach_{t}.pl", "reach_evidence.pl", "reach_kb.pl",
            {"numbers": True},
            {"rules": (rules, 1e-3), "lexicon": (18.21158, 1e-3), "heads": (heads, 1e-3),
             "bodies": (bodies, 1e-3), "vars": (vars_, 1e-3), "program": (program, 1e-3),
             "kb": (100.7642, 1e-3)}))
    return out


def corpus_manifest() -> list:
    entries = _reach_entries()
    entries += [
        CorpusEntry("p4_overlapping", "p4.pl", options={"numbers": True},
                    unreproduced={"raw:p(0,1)": 0.49375, "mass:p/2": 1.53262,
                                  "normalized:p(0,1)": 0.32216}),
        CorpusEntry("p5_sum_labeled", "p5.pl", options={"numbers": True},
                    expected={"rules": (2.51929, 1e-3)}),
        CorpusEntry("p5_sum", "p5_plain.pl", "sum_evidence.pl",
                    expected={"examples": (22.77, 2.0)}),
        CorpusEntry("p6_full", "p6.pl", error_code=9),
        CorpusEntry("p6_free_head_variable", "p6_rule.pl", "p6_evidence.pl",
                    expected={"example:r(0,t(0,s(0)))": (Fraction(4, 405), 1e-6)}),
        CorpusEntry("p7", "p7.pl", options={"numbers": True},
                    expected={"heads": (14.0, 0.0), "rule1.body": (9.76870, 1e-3),
                              "rule1.vars": (3.80735, 1e-3)}),
        CorpusEntry("p8_even", "p8_even.pl", "p8_evidence.pl",
                    expected={"examples": (9.01596, 1e-3),
                              "example:even(0)": (Fraction(1, 2), 1e-5),
                              "example:even(s(s(0)))": (Fraction(1, 4), 1e-5)}),
        CorpusEntry("deck_intensional", "deck_intensional.pl",
                    expected={"examples": (0.0, 0.0)}),
        CorpusEntry("deck_fair", "deck_fair.pl", "deck_fair_evidence.pl"),
        CorpusEntry("deck_rigged", "deck_rigged.pl", "deck_rigged_evidence.pl"),
        CorpusEntry("deck_noclubs", "deck_noclubs.pl", "deck_noclubs_evidence.pl"),
        CorpusEntry("graph", "graph.pl"),
        CorpusEntry("graph_extensional", "graph_ext.pl", "graph_evidence.pl",
                    expected={"label:8": (Fraction(1, 24), 1e-5)},
                    unreproduced={"example:path(5,3)": 0.00181}),
        CorpusEntry("case_2_2", "case22.pl", "case22_evidence.pl"),
        CorpusEntry("case_6", "case6.pl", options={"numbers": True},
                    expected={"rules": (5.33789, 1e-3), "heads": (24.92481, 1e-3)},
                    unreproduced={"lexicon": 25.66446, "bodies": 31.10245, "vars": 19.89060}),
        CorpusEntry("case_7_2_coin", "case72_coin.pl", "case72_evidence.pl"),
        CorpusEntry("case_free_vars", "case_freevars.pl"),
    ]
    return entries
