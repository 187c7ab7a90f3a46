"""Term, clause and program model plus signature extraction."""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from decimal import Decimal, localcontext
from fractions import Fraction
from typing import Iterator, Optional, Union

from .errors import DuplicateDefinition


@dataclass(frozen=True)
class Var:
    name: str
    uid: int = 0

    @property
    def anonymous(self) -> bool:
        return self.name.startswith("_")


@dataclass(frozen=True)
class Atom:
    name: str


@dataclass(frozen=True)
class Num:
    value: Union[int, Fraction]
    is_float: bool = False

    def __post_init__(self):
        if self.is_float and not isinstance(self.value, Fraction):
            object.__setattr__(self, "value", Fraction(self.value))


@dataclass(frozen=True)
class Struct:
    functor: str
    args: tuple

    def __post_init__(self):
        if not self.args:
            raise ValueError("compound terms need at least one argument")

    @property
    def arity(self) -> int:
        return len(self.args)


Term = Union[Var, Atom, Num, Struct]

NIL = Atom("[]")
OBJECTIVE = "mml_objective"

# builtins known to sender and receiver; the solver evaluates these
CONTROL = {("true", 0), ("fail", 0), ("false", 0)}
DEBUGGING = {
    ("debug", 0), ("nodebug", 0), ("spy", 1), ("nospy", 1), ("nospyall", 0),
    ("trace", 0), ("notrace", 0), ("leash", 1), ("source", 0), ("no_source", 0),
    ("halt", 0), ("halt", 1),
}
COMPARISONS = {
    ("==", 2), ("\\==", 2), ("=:=", 2), ("=\\=", 2), ("<", 2), (">", 2),
    ("=<", 2), (">=", 2), ("\\=", 2), ("@<", 2), ("@>", 2), ("@=<", 2), ("@>=", 2),
}
BUILTINS = (
    {("is", 2), ("=", 2), ("functor", 3), ("write", 1), ("nl", 0), ("read", 1)}
    | COMPARISONS | DEBUGGING | CONTROL
)
ARITH_BUILTINS = {("is", 2), ("=:=", 2), ("=\\=", 2), ("<", 2), (">", 2), ("=<", 2), (">=", 2)}
EVALUABLES = {
    ("+", 2), ("-", 2), ("*", 2), ("/", 2), ("//", 2), ("mod", 2), ("rem", 2),
    ("^", 2), ("min", 2), ("max", 2), ("-", 1), ("+", 1), ("abs", 1),
}


def is_builtin(key) -> bool:
    return key in BUILTINS


@dataclass(frozen=True)
class Clause:
    head: Term
    body: tuple = ()
    prob: Optional[Fraction] = None
    reps: int = 1
    line: int = 0

    @property
    def is_fact(self) -> bool:
        return not self.body

    @property
    def key(self):
        return pred_key(self.head)


@dataclass(frozen=True)
class Program:
    clauses: tuple
    role: str = "program"
    name: str = "<program>"

    @property
    def stochastic(self) -> bool:
        return any(c.prob is not None for c in self.clauses)

    def defined(self) -> list:
        """Predicate keys defined by clause heads, in first-appearance order."""
        seen = {}
        for c in self.clauses:
            seen.setdefault(c.key, None)
        return list(seen)

    def groups(self) -> dict:
        out: dict = {}
        for c in self.clauses:
            out.setdefault(c.key, []).append(c)
        return out


def pred_key(t: Term):
    if isinstance(t, Struct):
        return (t.functor, len(t.args))
    if isinstance(t, Atom):
        return (t.name, 0)
    raise TypeError(f"not a callable term: {t!r}")


def is_callable(t) -> bool:
    return isinstance(t, (Atom, Struct))


def term_vars(t: Term) -> Iterator[Var]:
    """Variable occurrences in left-to-right order (repeats included)."""
    stack = [t]
    while stack:
        x = stack.pop()
        if isinstance(x, Var):
            yield x
        elif isinstance(x, Struct):
            stack.extend(reversed(x.args))


def is_ground(t: Term) -> bool:
    return next(term_vars(t), None) is None


def make_list(items, tail: Term = NIL) -> Term:
    out = tail
    for x in reversed(items):
        out = Struct(".", (x, out))
    return out


def count_variable_positions(clause: Clause, skip=None):
    """(d, n_v): variable occurrences and distinct variables in a clause.

    Literals for which skip(literal) is true are left out, mirroring the
    body coder which does not transmit them.
    """
    occ = list(term_vars(clause.head))
    for lit in clause.body:
        if skip is not None and skip(lit):
            continue
        occ.extend(term_vars(lit))
    return len(occ), len(set(occ))


# -- signature ----------------------------------------------------------------

@dataclass(frozen=True)
class Signature:
    program_preds: frozenset
    kb_preds: frozenset
    funcs: frozenset
    numeric_constants: frozenset = frozenset()
    include_numbers: bool = False
    include_predefined: bool = False

    @property
    def n_p(self) -> int:
        return len(self.program_preds) + len(self.kb_preds)

    @property
    def n_f(self) -> int:
        return len(self.funcs)

    @property
    def solver_symbols(self) -> int:
        """Function symbols a free variable may be instantiated with; numerals always count."""
        return len(self.funcs) + (0 if self.include_numbers else len(self.numeric_constants))


    def constants(self) -> list:
        """Every 0-arity symbol as a term: atoms and numerals."""
        numerals = {_num_symbol(n) for n in self.numeric_constants}
        atoms = [Atom(name) for name, a in self.funcs if a == 0 and (name, a) not in numerals]
        return sorted(atoms, key=lambda t: t.name) + sorted(
            self.numeric_constants, key=lambda n: (n.value, n.is_float))

    @property
    def has_compound_functions(self) -> bool:
        return any(a > 0 for _, a in self.funcs)


def _num_symbol(n: Num):
    return (format_term(n), 0)


def _collect_funcs(t: Term, funcs: set, nums: set):
    if isinstance(t, Num):
        nums.add(t)
    elif isinstance(t, Atom):
        funcs.add((t.name, 0))
    elif isinstance(t, Struct):
        funcs.add((t.functor, len(t.args)))
        for a in t.args:
            _collect_funcs(a, funcs, nums)


def _collect_arith(t: Term, preds: set, funcs: set, nums: set, predefined: bool):
    # inside an arithmetic builtin: evaluable operators are predefined predicates
    if isinstance(t, Struct) and (t.functor, len(t.args)) in EVALUABLES:
        if predefined:
            preds.add((t.functor, len(t.args)))
        for a in t.args:
            _collect_arith(a, preds, funcs, nums, predefined)
    else:
        _collect_funcs(t, funcs, nums)


def _scan_literal(lit: Term, preds: set, funcs: set, nums: set, predefined: bool):
    key = pred_key(lit)
    builtin = is_builtin(key)
    if not builtin or predefined:
        preds.add(key)
    args = lit.args if isinstance(lit, Struct) else ()
    for a in args:
        if key in ARITH_BUILTINS:
            _collect_arith(a, preds, funcs, nums, predefined)
        else:
            _collect_funcs(a, funcs, nums)


def extract_signature(prog: Program, kb: Optional[Program] = None,
                      evidence: Optional[Program] = None,
                      include_numbers: bool = False,
                      include_predefined: bool = False) -> Signature:
    kb = kb or Program((), "knowledge-base")
    evidence = evidence or Program((), "evidence")
    prog_defined = set(prog.defined())
    kb_defined = set(kb.defined())
    both = prog_defined & kb_defined
    if both:
        names = ", ".join(f"{n}/{a}" for n, a in sorted(both))
        raise DuplicateDefinition(f"predicate defined in both program and knowledge base: {names}")

    prog_preds: set = set()
    kb_preds: set = set()
    funcs: set = set()
    nums: set = set()
    for source, preds in ((prog, prog_preds), (kb, kb_preds)):
        for c in source.clauses:
            _scan_literal(c.head, preds, funcs, nums, include_predefined)
            for lit in c.body:
                _scan_literal(lit, preds, funcs, nums, include_predefined)
    for c in evidence.clauses:
        for a in getattr(c.head, "args", ()):
            _collect_funcs(a, funcs, nums)

    # undefined or builtin predicates used only by the KB stay with the KB;
    # everything else the program refers to is part of its alphabet
    kb_only = kb_preds - prog_preds
    kb_preds = kb_defined | kb_only
    prog_preds = (prog_preds | kb_only) - kb_preds
    if include_numbers:
        funcs |= {_num_symbol(n) for n in nums}
    return Signature(frozenset(prog_preds), frozenset(kb_preds), frozenset(funcs),
                     frozenset(nums), include_numbers, include_predefined)


# -- writing terms -------------------------------------------------------------

INFIX_OPS = {
    ":-": (1200, "xfx"), "-->": (1200, "xfx"),
    "::": (1250, "xfx"), "#": (1250, "xfx"),
    ";": (1100, "xfy"), "|": (1100, "xfy"), "->": (1050, "xfy"), ",": (1000, "xfy"),
    "=": (700, "xfx"), "\\=": (700, "xfx"), "==": (700, "xfx"), "\\==": (700, "xfx"),
    "@<": (700, "xfx"), "@>": (700, "xfx"), "@=<": (700, "xfx"), "@>=": (700, "xfx"),
    "=..": (700, "xfx"), "is": (700, "xfx"), "=:=": (700, "xfx"), "=\\=": (700, "xfx"),
    "<": (700, "xfx"), ">": (700, "xfx"), "=<": (700, "xfx"), ">=": (700, "xfx"),
    "+": (500, "yfx"), "-": (500, "yfx"), "/\\": (500, "yfx"), "\\/": (500, "yfx"),
    "xor": (500, "yfx"),
    "*": (400, "yfx"), "/": (400, "yfx"), "//": (400, "yfx"), "rem": (400, "yfx"),
    "mod": (400, "yfx"), "<<": (400, "yfx"), ">>": (400, "yfx"), "div": (400, "yfx"),
    "**": (200, "xfx"), "^": (200, "xfy"),
}
PREFIX_OPS = {":-": (1200, "fx"), "?-": (1200, "fx"), "\\+": (900, "fy"),
              "-": (200, "fy"), "+": (200, "fy"), "\\": (200, "fy")}

_PLAIN_ATOM = re.compile(r"[a-z][A-Za-z0-9_]*\Z")
_SYMBOL_ATOM = re.compile(r"[+\-*/\\^<>=~:.?@#&$]+\Z")


def format_atom(name: str) -> str:
    if _PLAIN_ATOM.match(name) or name in ("[]", "!", ";", "{}"):
        return name
    if _SYMBOL_ATOM.match(name):
        return name
    return "'" + name.replace("\\", "\\\\").replace("'", "\\'") + "'"


def format_number(n: Num) -> str:
    v = n.value
    if not n.is_float:
        return str(v)
    if v.denominator == 1:
        return f"{v.numerator}.0"
    with localcontext() as ctx:
        ctx.prec = 200
        text = str(Decimal(v.numerator) / Decimal(v.denominator))
    if "E" in text or "e" in text:
        text = format(Decimal(v.numerator) / Decimal(v.denominator), "f")
    return text


def format_term(t: Term, max_prio: int = 999, names=None) -> str:
    if isinstance(t, Var):
        if names is not None and t in names:
            return names[t]
        if t.anonymous:
            return "_" if t.uid == 0 or t.name == "_" else t.name
        return t.name if t.uid == 0 else f"{t.name}_{t.uid}"
    if isinstance(t, Num):
        return format_number(t)
    if isinstance(t, Atom):
        text = format_atom(t.name)
        if t.name in INFIX_OPS or t.name in PREFIX_OPS:
            return f"({text})" if max_prio < 1200 and t.name not in ("-", "+", "\\") else text
        return text
    if t.functor == "." and len(t.args) == 2:
        items = []
        while isinstance(t, Struct) and t.functor == "." and len(t.args) == 2:
            items.append(format_term(t.args[0], 999, names))
            t = t.args[1]
        inner = ",".join(items)
        if t != NIL:
            inner += "|" + format_term(t, 999, names)
        return f"[{inner}]"
    if len(t.args) == 2 and t.functor in INFIX_OPS:
        prio, kind = INFIX_OPS[t.functor]
        lmax = prio - 1 if kind[0] == "x" else prio
        rmax = prio - 1 if kind[2] == "x" else prio
        left = format_term(t.args[0], lmax, names)
        right = format_term(t.args[1], rmax, names)
        op = format_atom(t.functor)
        if t.functor == ",":
            text = f"{left},{right}"
        elif op[0].isalpha():
            text = f"{left} {op} {right}"
        else:
            text = f"{left}{op}{right}"
            if op[-1] in "+-*/\\^<>=~:.?@#&$" and right[:1] in "+-*/\\^<>=~:.?@#&$":
                text = f"{left}{op} {right}"
            if left[-1:] in "+-*/\\^<>=~:.?@#&$":
                text = f"{left} {text[len(left):]}"
        return f"({text})" if prio > max_prio else text
    args = ",".join(format_term(a, 999, names) for a in t.args)
    return f"{format_atom(t.functor)}({args})"


def format_prob(p: Fraction) -> str:
    return str(p.numerator) if p.denominator == 1 else f"{p.numerator}/{p.denominator}"


def format_clause(c: Clause, names=None) -> str:
    text = format_term(c.head, 1199, names)
    if c.body:
        text += ":-" + ",".join(format_term(b, 999, names) for b in c.body)
    if c.prob is not None:
        text = f"{format_prob(c.prob)} :: {text}"
    if c.reps != 1:
        text = f"{c.reps} # {text}"
    return text + "."


def format_program(p: Program) -> str:
    return "\n".join(format_clause(c) for c in p.clauses) + ("\n" if p.clauses else "")


def alpha_key(c: Clause):
    """Clause structure with variables numbered by first occurrence."""
    mapping: dict = {}

    def walk(t):
        if isinstance(t, Var):
            return ("$VAR", mapping.setdefault(t, len(mapping)))
        if isinstance(t, Struct):
            return (t.functor, tuple(walk(a) for a in t.args))
        return t

    return (walk(c.head), tuple(walk(b) for b in c.body), c.prob, c.reps)
