"""mml_cost command line tool."""
from __future__ import annotations

import argparse
import itertools
import os
import sys
from decimal import ROUND_HALF_EVEN, Decimal
from typing import Optional

from .analysis import COMPARE_MODES, Analysis, Options, analyze
from .coder import RULESPROB_MODES, CostBreakdown
from .errors import FileUnreadable, MMLError
from .numcode import parse_precision, precision_digits
from .reader import canonize, parse, SourceUnit
from .terms import Program, format_clause, format_term

STDIN = "-"
TABLE_COLUMNS = ("name", "Total", "Program", "CRule", "CLexicon", "NP", "NF", "CHeads", "CBodies",
                 "CVars", "CProb", "CExamples", "CKnowledgeBase", "Predicates", "FunctionSymbols")

EPILOG = """\
You can use '::' to indicate the probability of a clause:
   0.25 :: f(X,Y):-X>0,Y is 3.
And also '#' in the examples to indicate the repetitions:
   32 # f(0,1).  ~>  Like writing f(0,1) 32 times
"""


def _on_off(text: str) -> bool:
    value = text.strip().lower()
    if value not in ("on", "off"):
        raise argparse.ArgumentTypeError("expected 'on' or 'off'")
    return value == "on"


def _precision(text: str) -> float:
    try:
        return parse_precision(text)
    except ValueError as e:
        raise argparse.ArgumentTypeError(str(e)) from None


def _positive_int(text: str) -> int:
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError("expected a positive integer") from None
    if n < 1:
        raise argparse.ArgumentTypeError("expected a positive integer")
    return n


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="mml_cost", description="It determines the MML cost of a Prolog program",
        epilog=EPILOG, formatter_class=argparse.RawDescriptionHelpFormatter)
    p.add_argument("programs", nargs="*", metavar="file.pl",
                   help="program files ('--' reads the program from stdin)")
    p.add_argument("--examples", action="append", default=[], metavar="e1,e2...",
                   help="files with the examples as clauses")
    p.add_argument("--kb", action="append", default=[], metavar="kb1,kb2...",
                   help="files with the knowledge base (merged)")
    p.add_argument("--debug", action="store_true", help="detailed evaluation process")
    p.add_argument("--warnings", type=_on_off, default=False, metavar="on|off",
                   help="with 'on', warnings abort the execution")
    p.add_argument("--precision", type=_precision, default=1e-5, metavar="0.00001",
                   help="maximum error allowed in operations, or a number of digits (<=15)")
    p.add_argument("--dialect", default="cprolog", metavar="cprolog",
                   help="accepted for compatibility, ignored")
    p.add_argument("--predefined", action="store_true", help="count predefined predicates")
    p.add_argument("--numbers", action="store_true", help="count numbers as function symbols")
    p.add_argument("--normalize", type=_on_off, default=True, metavar="on|off",
                   help="normalize to 1 the probabilities of each predicate")
    p.add_argument("--rulesprob", choices=RULESPROB_MODES, default="zerobitslast",
                   help="which rule probabilities are coded")
    p.add_argument("--tabled", action="store_true", help="show summarized results")
    p.add_argument("--maxrecursion", type=_positive_int, default=20, metavar="20",
                   help="maximum SLD-resolution depth")
    p.add_argument("--compare", action="append", default=[], metavar="ec,mc,pc",
                   help="also report the baseline evidence coders")
    return p


def _split(values) -> list:
    return [part for v in values for part in v.split(",") if part]


def _prepare_argv(argv) -> list:
    # a bare '--' stands for the standard input as a program file
    return [STDIN if a == "--" else a for a in argv]


def _read(path: str, stdin_text: Optional[str]) -> str:
    if path == STDIN:
        return stdin_text if stdin_text is not None else sys.stdin.read()
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except (OSError, UnicodeDecodeError) as e:
        raise FileUnreadable(f"cannot read {path}: {e}") from None


def _load(path: str, role: str, precision: float, stdin_text) -> Program:
    origin = "<stdin>" if path == STDIN else path
    return canonize(parse(SourceUnit(_read(path, stdin_text), origin, role), precision))


def _merge(programs, role: str, name: str) -> Program:
    clauses = tuple(c for p in programs for c in p.clauses)
    return canonize(Program(clauses, role, name))


def _stem(path: str) -> str:
    if path == STDIN:
        return "stdin"
    return os.path.splitext(os.path.basename(path))[0]


# -- formatting ---------------------------------------------------------------

def fmt(x: float, digits: int = 5) -> str:
    q = Decimal(1).scaleb(-digits)
    value = Decimal(x).quantize(q, rounding=ROUND_HALF_EVEN)
    if value == 0:
        value = abs(value)
    return f"{value:.{digits}f}"


def _bracket(items) -> str:
    return "[" + ",".join(items) + "]"


def format_plain(title: str, b: CostBreakdown, digits: int = 5) -> str:
    f = lambda x: fmt(x, digits)  # noqa: E731
    preds = b.predicates
    lines = [
        title,
        f"  Total cost: {f(b.total)} bits",
        f"     Cost of program: {f(b.program)} bits",
        f"        Cost of {b.n_r} rules: {f(b.rules)} bits",
        f"        Cost of lexicon: {f(b.lexicon)} bits",
        f"             of {len(preds):2d} predicates {_bracket(preds)}",
        f"             and {b.n_f} function symbols {_bracket(b.functions)}",
        f"        Cost of heads: {f(b.heads)} bits",
        f"        Cost of bodies: {f(b.bodies)} bits",
        f"        Cost of vars: {f(b.vars)} bits",
        f"        Cost of probabilities: {f(b.prob)} bits",
        f"     Cost of examples: {f(b.examples)} bits ({b.n_e} examples"
        + (", partial" if b.partial else "") + ")",
        f"     Cost of knowledge base: {f(b.kb)} bits",
    ]
    for mode in COMPARE_MODES:
        if mode in b.extra:
            r = b.extra[mode]
            ev = r["evidence"]
            ev_text = f(ev) if isinstance(ev, float) else ev
            total = f(r["theory"] + ev) if isinstance(ev, float) else ev
            lines.append(f"     Coder {mode.upper()}: L(T)={f(r['theory'])} "
                         f"L(E|T)={ev_text} total={total}")
    return "\n".join(lines)


def tabled_header() -> str:
    return ";" + ";".join(TABLE_COLUMNS) + ";"


def format_tabled(name: str, b: CostBreakdown, digits: int = 5) -> str:
    f = lambda x: fmt(x, digits)  # noqa: E731
    preds = b.predicates + b.extra.get("kb_predicates", [])
    cells = [name, f(b.total), f(b.program), f(b.rules), f(b.lexicon), str(len(preds)),
             str(b.n_f), f(b.heads), f(b.bodies), f(b.vars), f(b.prob), f(b.examples), f(b.kb),
             _bracket(preds), _bracket(b.functions)]
    return ";" + ";".join(cells) + ";"


def format_rule_costs(b: CostBreakdown, digits: int = 5) -> list:
    f = lambda x: fmt(x, digits)  # noqa: E731
    out = []
    for rc in b.rule_costs:
        extra = f" Prob:{f(rc.prob)}" if rc.prob else ""
        out.append(f"-- #{rc.index} rule cost: Header:{f(rc.head)} Body:{f(rc.body)} "
                   f"Vars:{f(rc.vars)}{extra}")
        clause = format_clause(rc.clause)
        if rc.clause.prob is not None:
            clause = f"{f(float(rc.clause.prob))} :: " + clause.split(" :: ", 1)[1]
        out.append(f"--\t{clause}")
    return out


def format_evidence(a: Analysis, digits: int = 5) -> list:
    if a.result is None:
        return []
    out = []
    for atom, reps, p in a.result.probabilities:
        out.append(f"-- example {format_term(atom)}: times={reps} "
                   f"probability={fmt(float(p), digits)}")
    for atom in a.result.uncovered:
        out.append(f"-- example {format_term(atom)}: not covered")
    return out


# -- driver -------------------------------------------------------------------

def run(argv, stdin_text: Optional[str] = None, out=None, err=None) -> int:
    out = out if out is not None else sys.stdout
    err = err if err is not None else sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_intermixed_args(_prepare_argv(argv))
    except SystemExit as e:
        return int(e.code or 0)
    if not args.programs:
        parser.print_usage(err)
        print("mml_cost: error: at least one program file (or -- for stdin) is required", file=err)
        return 2
    options = Options(precision=args.precision, numbers=args.numbers,
                      predefined=args.predefined, normalize=args.normalize,
                      rulesprob=args.rulesprob, maxrecursion=args.maxrecursion,
                      strict=args.warnings, compare=tuple(dict.fromkeys(_split(args.compare))))
    digits = precision_digits(args.precision)
    if args.dialect != "cprolog":
        print(f"% Notice: --dialect={args.dialect} is accepted and ignored", file=err)
    try:
        options.validate()
        programs = [(path, _load(path, "program", args.precision, stdin_text))
                    for path in args.programs]
        example_paths = _split(args.examples)
        evidences = [(path, _load(path, "evidence", args.precision, stdin_text))
                     for path in example_paths] or [(None, None)]
        kb_paths = _split(args.kb)
        kb = None
        if kb_paths:
            kb = _merge([_load(path, "knowledge-base", args.precision, stdin_text) for path in kb_paths],
                        "knowledge-base", "+".join(kb_paths))
        if args.tabled:
            print(tabled_header(), file=out)
        for (ppath, prog), (epath, ev) in itertools.product(programs, evidences):
            parts = [ppath] + ([epath] if epath else []) + kb_paths
            debug_lines: list = []
            trace = None
            if args.debug:
                def trace(depth, goal, info, p, _lines=debug_lines):
                    _lines.append("--" + "    " * depth + f"{format_clause(info.clause)[:-1]} "
                                  f"(prob:{fmt(float(p), digits)})")
            a = analyze(prog, ev, kb, options, trace)
            for w in a.warnings:
                print(f"% Warning: {w}", file=err)
            if args.debug:
                print("\n".join(format_rule_costs(a.breakdown, digits)
                                + debug_lines + format_evidence(a, digits)), file=out)
            if args.tabled:
                print(format_tabled("+".join(_stem(p) for p in parts), a.breakdown, digits),
                      file=out)
            else:
                title = " + ".join("<stdin>" if p == STDIN else p for p in parts)
                print(format_plain(title, a.breakdown, digits), file=out)
    except MMLError as e:
        print(f"mml_cost: error: {e}", file=err)
        return e.code
    return 0


def main(argv=None) -> int:
    return run(sys.argv[1:] if argv is None else argv)


if __name__ == "__main__":
    sys.exit(main())
