"""Reader for the Prolog subset: tokenizer, operator-precedence parser, canonization."""
from __future__ import annotations

import itertools
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Optional

from .errors import (
    ClauseBodyInEvidence, ObjectiveInEvidence, PrologSyntaxError, RepetitionNotInteger,
    ReservedName, RoleViolation, VariablesInEvidence,
)
from .numcode import rational_approx
from .terms import (
    INFIX_OPS, NIL, OBJECTIVE, PREFIX_OPS, Atom, Clause, Num, Program, Struct, Term, Var,
    is_callable, is_ground, make_list,
)

ROLES = ("program", "evidence", "knowledge-base")
SYMBOL_CHARS = set("+-*/\\^<>=~:.?@#&$")
PUNCT = set("()[]{},|")
RESERVED_PREFIX = "mml_"


@dataclass(frozen=True)
class SourceUnit:
    text: str
    origin: str = "<stdin>"
    role: str = "program"


@dataclass(frozen=True)
class Token:
    kind: str  # num var atom qatom punct end eof
    value: object
    line: int
    col: int
    layout_before: bool = False


def tokenize(text: str, origin: str = "<input>") -> list:
    tokens = []
    i, n = 0, len(text)
    line, line_start = 1, 0
    layout = True

    def err(msg, at=None):
        at = i if at is None else at
        raise PrologSyntaxError(msg, line, at - line_start + 1, origin)

    while i < n:
        ch = text[i]
        if ch == "\n":
            line += 1
            line_start = i + 1
            i += 1
            layout = True
            continue
        if ch.isspace():
            i += 1
            layout = True
            continue
        if ch == "%":
            while i < n and text[i] != "\n":
                i += 1
            layout = True
            continue
        if text.startswith("/*", i):
            end = text.find("*/", i + 2)
            if end < 0:
                err("unterminated block comment")
            line += text.count("\n", i, end)
            if "\n" in text[i:end]:
                line_start = text.rfind("\n", i, end) + 1
            i = end + 2
            layout = True
            continue
        col = i - line_start + 1
        start = i
        if ch.isdigit():
            while i < n and text[i].isdigit():
                i += 1
            is_float = False
            if i + 1 < n and text[i] == "." and text[i + 1].isdigit():
                is_float = True
                i += 1
                while i < n and text[i].isdigit():
                    i += 1
                if i < n and text[i] in "eE":
                    j = i + 1
                    if j < n and text[j] in "+-":
                        j += 1
                    if j < n and text[j].isdigit():
                        i = j
                        while i < n and text[i].isdigit():
                            i += 1
            raw = text[start:i]
            value = Fraction(raw) if is_float else int(raw)
            tokens.append(Token("num", Num(value, is_float), line, col, layout))
        elif ch == "_" or ch.isupper():
            while i < n and (text[i].isalnum() or text[i] == "_"):
                i += 1
            tokens.append(Token("var", text[start:i], line, col, layout))
        elif ch.isalpha():
            while i < n and (text[i].isalnum() or text[i] == "_"):
                i += 1
            tokens.append(Token("atom", text[start:i], line, col, layout))
        elif ch == "'":
            i += 1
            buf = []
            while True:
                if i >= n:
                    err("unterminated quoted atom", start)
                c = text[i]
                if c == "'":
                    if i + 1 < n and text[i + 1] == "'":
                        buf.append("'")
                        i += 2
                        continue
                    i += 1
                    break
                if c == "\\" and i + 1 < n:
                    esc = text[i + 1]
                    buf.append({"n": "\n", "t": "\t", "\\": "\\", "'": "'"}.get(esc, esc))
                    i += 2
                    continue
                if c == "\n":
                    err("newline inside quoted atom")
                buf.append(c)
                i += 1
            tokens.append(Token("qatom", "".join(buf), line, col, layout))
        elif ch == '"':
            err("strings are not supported")
        elif ch in PUNCT:
            i += 1
            tokens.append(Token("punct", ch, line, col, layout))
        elif ch in "!;":
            i += 1
            tokens.append(Token("atom", ch, line, col, layout))
        elif ch in SYMBOL_CHARS:
            while i < n and text[i] in SYMBOL_CHARS:
                i += 1
            run = text[start:i]
            at_end = i >= n or text[i].isspace() or text[i] == "%"
            if run == "." and at_end:
                tokens.append(Token("end", ".", line, col, layout))
            elif run.endswith(".") and at_end:
                tokens.append(Token("atom", run[:-1], line, col, layout))
                tokens.append(Token("end", ".", line, col + len(run) - 1, False))
            else:
                tokens.append(Token("atom", run, line, col, layout))
        else:
            err(f"unexpected character {ch!r}")
        layout = False
    tokens.append(Token("eof", None, line, i - line_start + 1, True))
    return tokens


class _Parser:
    def __init__(self, tokens, origin):
        self.toks = tokens
        self.pos = 0
        self.origin = origin
        self.varmap: dict = {}

    # token helpers
    def peek(self, k=0) -> Token:
        return self.toks[min(self.pos + k, len(self.toks) - 1)]

    def next(self) -> Token:
        t = self.peek()
        self.pos += 1
        return t

    def error(self, msg, tok: Optional[Token] = None):
        tok = tok or self.peek()
        raise PrologSyntaxError(msg, tok.line, tok.col, self.origin)

    def expect(self, kind, value=None):
        tok = self.next()
        if tok.kind != kind or (value is not None and tok.value != value):
            want = value if value is not None else kind
            got = tok.value if tok.value is not None else tok.kind
            self.error(f"expected {want!r}, found {got!r}", tok)
        return tok

    def new_var(self, name):
        if name.startswith("_"):
            return Var(name, next(_anon_ids))
        if name not in self.varmap:
            self.varmap[name] = Var(name)
        return self.varmap[name]

    # grammar
    def clause_term(self):
        self.varmap = {}
        term, _ = self.parse(1300)
        if self.peek().kind != "end":
            self.error("operator expected (missing '.' at the end of a clause?)")
        self.next()
        return term

    def _infix(self, tok: Token):
        if tok.kind in ("atom", "qatom") and tok.value in INFIX_OPS:
            return tok.value
        if tok.kind == "punct" and tok.value == ",":
            return ","
        if tok.kind == "punct" and tok.value == "|":
            return ";"
        return None

    def parse(self, max_prio):
        left, lprio = self.primary(max_prio)
        while True:
            tok = self.peek()
            name = self._infix(tok)
            if name is None:
                break
            prio, kind = INFIX_OPS[name]
            lmax = prio - 1 if kind[0] == "x" else prio
            rmax = prio - 1 if kind[2] == "x" else prio
            if prio > max_prio or lprio > lmax:
                break
            self.next()
            right, _ = self.parse(rmax)
            left, lprio = Struct(name, (left, right)), prio
        return left, lprio

    def _starts_term(self, tok: Token) -> bool:
        if tok.kind in ("num", "var", "qatom"):
            return True
        if tok.kind == "atom":
            return not (tok.value in INFIX_OPS and tok.value not in PREFIX_OPS)
        return tok.kind == "punct" and tok.value in "([{"

    def arglist(self):
        args = [self.parse(999)[0]]
        while self.peek().kind == "punct" and self.peek().value == ",":
            self.next()
            args.append(self.parse(999)[0])
        self.expect("punct", ")")
        return tuple(args)

    def primary(self, max_prio):
        tok = self.next()
        if tok.kind == "num":
            return tok.value, 0
        if tok.kind == "var":
            return self.new_var(tok.value), 0
        if tok.kind == "punct":
            if tok.value == "(":
                inner, _ = self.parse(1300)
                self.expect("punct", ")")
                return inner, 0
            if tok.value == "[":
                if self.peek().kind == "punct" and self.peek().value == "]":
                    self.next()
                    return self._maybe_call("[]"), 0
                items = [self.parse(999)[0]]
                tail = NIL
                while True:
                    t = self.next()
                    if t.kind == "punct" and t.value == ",":
                        items.append(self.parse(999)[0])
                    elif t.kind == "punct" and t.value == "|":
                        tail = self.parse(999)[0]
                        self.expect("punct", "]")
                        break
                    elif t.kind == "punct" and t.value == "]":
                        break
                    else:
                        self.error("expected ',' '|' or ']' in list", t)
                return make_list(items, tail), 0
            if tok.value == "{":
                if self.peek().kind == "punct" and self.peek().value == "}":
                    self.next()
                    return Atom("{}"), 0
                inner, _ = self.parse(1200)
                self.expect("punct", "}")
                return Struct("{}", (inner,)), 0
            self.error(f"unexpected {tok.value!r}", tok)
        if tok.kind in ("atom", "qatom"):
            name = tok.value
            nxt = self.peek()
            if nxt.kind == "punct" and nxt.value == "(" and not nxt.layout_before:
                self.next()
                return Struct(name, self.arglist()), 0
            if tok.kind == "atom" and name == "-" and nxt.kind == "num" and not nxt.layout_before:
                self.next()
                v = nxt.value
                return Num(-v.value, v.is_float), 0
            if tok.kind == "atom" and name in PREFIX_OPS and self._starts_term(nxt):
                prio, kind = PREFIX_OPS[name]
                prio = min(prio, max_prio)
                amax = prio - 1 if kind == "fx" else prio
                arg, _ = self.parse(amax)
                return Struct(name, (arg,)), prio
            return Atom(name), 0
        if tok.kind == "end":
            self.error("unexpected end of clause", tok)
        self.error("unexpected end of input", tok)

    def _maybe_call(self, name):
        nxt = self.peek()
        if nxt.kind == "punct" and nxt.value == "(" and not nxt.layout_before:
            self.next()
            return Struct(name, self.arglist())
        return Atom(name)


_anon_ids = itertools.count(1)


def _conj(t: Term) -> list:
    if isinstance(t, Struct) and t.functor == "," and len(t.args) == 2:
        return _conj(t.args[0]) + _conj(t.args[1])
    return [t]


def _symbols(t: Term):
    if isinstance(t, Atom):
        yield t.name
    elif isinstance(t, Struct):
        yield t.functor
        for a in t.args:
            yield from _symbols(a)


def _eval_label(t: Term, precision: float) -> Fraction:
    if isinstance(t, Num):
        if t.is_float:
            value = rational_approx(t.value, precision)
        else:
            value = Fraction(t.value)
    elif (isinstance(t, Struct) and t.functor == "/" and len(t.args) == 2
          and all(isinstance(a, Num) and not a.is_float for a in t.args) and t.args[1].value != 0):
        value = Fraction(t.args[0].value, t.args[1].value)
    else:
        raise ValueError("probability labels must be numbers or integer ratios")
    if value <= 0:
        raise ValueError("probability labels must be positive")
    return value


def parse(unit: SourceUnit, precision: float = 1e-5) -> Program:
    """Parse a source unit into a Program in source order (not yet canonized)."""
    if unit.role not in ROLES:
        raise ValueError(f"unknown role {unit.role!r}")
    tokens = tokenize(unit.text, unit.origin)
    p = _Parser(tokens, unit.origin)
    clauses = []
    evidence = unit.role == "evidence"
    while p.peek().kind != "eof":
        first = p.peek()
        term = p.clause_term()
        where = f"{unit.origin}:{first.line}"
        for name in _symbols(term):
            if name.startswith(RESERVED_PREFIX):
                raise ReservedName(f"identifiers starting with '{RESERVED_PREFIX}' are reserved: {name}",
                                   first.line, first.col, unit.origin)
        reps, prob = 1, None
        if isinstance(term, Struct) and term.functor == "#" and len(term.args) == 2:
            if not evidence:
                raise RoleViolation(f"{where}: '#' repetitions are only allowed in evidence files")
            n = term.args[0]
            if not (isinstance(n, Num) and not n.is_float and n.value >= 1):
                raise RepetitionNotInteger(f"{where}: repetitions must be a positive integer")
            reps, term = n.value, term.args[1]
        if isinstance(term, Struct) and term.functor == "::" and len(term.args) == 2:
            if evidence:
                raise RoleViolation(f"{where}: probability labels are not allowed in evidence files")
            try:
                prob = _eval_label(term.args[0], precision)
            except ValueError as e:
                raise PrologSyntaxError(str(e), first.line, first.col, unit.origin) from None
            term = term.args[1]
        if isinstance(term, Struct) and term.functor in (":-", "?-") and len(term.args) == 1:
            if evidence:
                raise ObjectiveInEvidence(f"{where}: objectives are not allowed in evidence files")
            head, body = Atom(OBJECTIVE), _conj(term.args[0])
        elif isinstance(term, Struct) and term.functor == ":-" and len(term.args) == 2:
            head, body = term.args[0], _conj(term.args[1])
        else:
            head, body = term, []
        if not is_callable(head):
            raise PrologSyntaxError("clause head must be an atom or compound term",
                                    first.line, first.col, unit.origin)
        for lit in body:
            if not is_callable(lit):
                raise PrologSyntaxError("body literals must be atoms or compound terms",
                                        first.line, first.col, unit.origin)
        if evidence:
            if body:
                raise ClauseBodyInEvidence(f"{where}: examples must be facts")
            if not is_ground(head):
                raise VariablesInEvidence(f"{where}: examples must be ground")
        clauses.append(Clause(head, tuple(body), prob, reps, first.line))
    return Program(tuple(clauses), unit.role, unit.origin)


# -- canonization ---------------------------------------------------------------

def _rewrite(t: Term) -> Term:
    if isinstance(t, Struct):
        functor = "^" if t.functor == "**" and len(t.args) == 2 else t.functor
        return Struct(functor, tuple(_rewrite(a) for a in t.args))
    return t


def _paths(t: Term) -> list:
    """Alternative literal sequences for a body goal."""
    if isinstance(t, Struct) and len(t.args) == 2:
        if t.functor in (",", "->"):
            return [a + b for a in _paths(t.args[0]) for b in _paths(t.args[1])]
        if t.functor in (";", "|"):
            return _paths(t.args[0]) + _paths(t.args[1])
    return [[t]]


def canonize(prog: Program) -> Program:
    out = []
    for c in prog.clauses:
        head = _rewrite(c.head)
        alternatives = [[]]
        for lit in c.body:
            alternatives = [a + b for a in alternatives for b in _paths(_rewrite(lit))]
        share = None if c.prob is None else c.prob / len(alternatives)
        for body in alternatives:
            out.append(replace(c, head=head, body=tuple(body), prob=share))
    if prog.role == "evidence":
        merged: dict = {}
        for c in out:
            if c.head in merged:
                merged[c.head] = replace(merged[c.head], reps=merged[c.head].reps + c.reps)
            else:
                merged[c.head] = c
        out = list(merged.values())
    return Program(tuple(out), prog.role, prog.name)


def read_program(text: str, role: str = "program", origin: str = "<input>",
                 precision: float = 1e-5) -> Program:
    return canonize(parse(SourceUnit(text, origin, role), precision))


def read_term(text: str) -> Term:
    """Parse a single term (no trailing full stop needed)."""
    src = text.strip()
    if not src.endswith("."):
        src += " ."
    p = _Parser(tokenize(src), "<term>")
    return p.clause_term()
