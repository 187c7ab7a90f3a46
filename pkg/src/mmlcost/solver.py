"""Stochastic SLD meta-interpreter.

Goals are resolved depth first against program and KB clauses. Each clause
choice multiplies the path probability by its label. A head variable that
the body never mentions can take any value: whatever it ends up bound to is
charged 1/|S_f| per function symbol, the chance of producing that term by
drawing symbols uniformly from the signature.
"""
from __future__ import annotations

import itertools
import math
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional

from .errors import ExampleNotCovered, NonTerminatingRule, UnresolvableComparison
from .terms import (
    ARITH_BUILTINS, COMPARISONS, DEBUGGING, Atom, Clause, Num, Program, Signature, Struct, Var,
    format_term, is_builtin, pred_key, term_vars,
)

sys.setrecursionlimit(max(sys.getrecursionlimit(), 20000))

ONE = Fraction(1)


class _Unbound(Exception):
    pass


class _TypeFail(Exception):
    pass


@dataclass
class PredicateDistribution:
    predicate: tuple
    entries: dict  # answer pattern -> raw probability
    mass: Fraction
    symbols: int = 1
    pruned: Fraction = Fraction(0)

    def raw(self, atom) -> Fraction:
        """Raw probability of a ground atom, summing every answer that covers it."""
        total = Fraction(0)
        for pattern, p in self.entries.items():
            bound: dict = {}
            if _match(pattern, atom, bound):
                nodes = sum(_size(t) for t in bound.values())
                total += p * Fraction(1, self.symbols) ** nodes
        return total

    def normalized(self, atom) -> Fraction:
        if not self.mass:
            return Fraction(0)
        return self.raw(atom) / self.mass


def _size(t) -> int:
    if isinstance(t, Var):
        return 0
    if isinstance(t, Struct):
        return 1 + sum(_size(a) for a in t.args)
    return 1


def _match(pattern, t, bound: dict) -> bool:
    if isinstance(pattern, Var):
        if pattern in bound:
            return bound[pattern] == t
        bound[pattern] = t
        return True
    if isinstance(pattern, Struct):
        return (isinstance(t, Struct) and t.functor == pattern.functor
                and len(t.args) == len(pattern.args)
                and all(_match(p, a, bound) for p, a in zip(pattern.args, t.args)))
    return pattern == t


@dataclass
class _ClauseInfo:
    clause: Clause
    label: Fraction
    index: int
    variables: tuple
    head_free: tuple
    body_only: tuple


def _labels(prog: Program) -> list:
    groups: dict = {}
    for c in prog.clauses:
        groups[c.key] = groups.get(c.key, 0) + 1
    return [c.prob if c.prob is not None else Fraction(1, groups[c.key]) for c in prog.clauses]


def check_termination(prog: Program) -> None:
    """Reject clauses that call themselves with the very same arguments."""
    for c in prog.clauses:
        for lit in c.body:
            if lit == c.head:
                raise NonTerminatingRule(
                    f"{prog.name}:{c.line}: recursive call {format_term(lit)} does not reduce "
                    f"the head {format_term(c.head)}")


@dataclass
class _Warnings:
    items: list = field(default_factory=list)

    def add(self, msg):
        if msg not in self.items:
            self.items.append(msg)


class Solver:
    def __init__(self, prog: Program, kb: Optional[Program] = None, sig: Optional[Signature] = None,
                 max_depth: int = 20, strict: bool = False, trace: Optional[Callable] = None,
                 normalize_free_body: bool = True):
        self.max_depth = max_depth
        self.strict = strict
        self.trace = trace
        self.normalize_free_body = normalize_free_body
        self.warnings = _Warnings()
        self.symbols = max(1, sig.solver_symbols) if sig is not None else 1
        self.table: dict = {}
        index = 0
        for source in (prog, kb):
            if source is None:
                continue
            check_termination(source)
            for c, label in zip(source.clauses, _labels(source)):
                index += 1
                head_vars = list(dict.fromkeys(term_vars(c.head)))
                body_vars = list(dict.fromkeys(v for b in c.body for v in term_vars(b)))
                variables = tuple(dict.fromkeys(head_vars + body_vars))
                info = _ClauseInfo(
                    c, label, index, variables,
                    tuple(v for v in head_vars if v not in body_vars),
                    tuple(v for v in body_vars if v not in head_vars))
                self.table.setdefault(c.key, []).append(info)
        self._ids = itertools.count(1)
        self._cache: dict = {}
        self._in_progress: set = set()
        self.pruned = Fraction(0)
        # binding state
        self.bind: dict = {}
        self.gen: set = set()
        self.trail: list = []
        self.generated = 0

    # -- bindings ---------------------------------------------------------------

    def deref(self, t):
        while isinstance(t, Var) and t in self.bind:
            t = self.bind[t]
        return t

    def resolve(self, t):
        t = self.deref(t)
        if isinstance(t, Struct):
            return Struct(t.functor, tuple(self.resolve(a) for a in t.args))
        return t

    def _mark(self, v):
        if v not in self.gen:
            self.gen.add(v)
            self.trail.append(("g", v))

    def _mark_all(self, t):
        t = self.deref(t)
        if isinstance(t, Var):
            self._mark(t)
        elif isinstance(t, Struct):
            for a in t.args:
                self._mark_all(a)

    def _nodes(self, t) -> int:
        t = self.deref(t)
        if isinstance(t, Var):
            return 0
        if isinstance(t, Struct):
            return 1 + sum(self._nodes(a) for a in t.args)
        return 1

    def _bind(self, v: Var, t, mult: list):
        if v in self.gen:
            if isinstance(t, Var):
                self._mark(t)
            else:
                nodes = self._nodes(t)
                self.generated += nodes
                self.trail.append(("n", nodes))
                mult[0] *= Fraction(1, self.symbols) ** nodes
                self._mark_all(t)
        self.bind[v] = t
        self.trail.append(("b", v))

    def unify(self, a, b, mult: list) -> bool:
        stack = [(a, b)]
        while stack:
            x, y = stack.pop()
            x, y = self.deref(x), self.deref(y)
            if x is y or x == y:
                continue
            if isinstance(x, Var) and isinstance(y, Var):
                # alias plain variables onto generated ones so nothing is charged twice
                if x in self.gen and y not in self.gen:
                    x, y = y, x
                self.bind[x] = y
                self.trail.append(("b", x))
                if x in self.gen:
                    self._mark(y)
            elif isinstance(x, Var):
                self._bind(x, y, mult)
            elif isinstance(y, Var):
                self._bind(y, x, mult)
            elif isinstance(x, Struct) and isinstance(y, Struct):
                if x.functor != y.functor or len(x.args) != len(y.args):
                    return False
                stack.extend(zip(x.args, y.args))
            else:
                return False
        return True

    def undo(self, mark: int):
        while len(self.trail) > mark:
            kind, v = self.trail.pop()
            if kind == "b":
                del self.bind[v]
            elif kind == "g":
                self.gen.discard(v)
            else:
                self.generated -= v

    def _rename(self, t, mapping):
        if isinstance(t, Var):
            return mapping[t]
        if isinstance(t, Struct):
            return Struct(t.functor, tuple(self._rename(a, mapping) for a in t.args))
        return t

    # -- builtins ---------------------------------------------------------------

    def _eval(self, t):
        t = self.deref(t)
        if isinstance(t, Var):
            raise _Unbound()
        if isinstance(t, Num):
            return t.value, t.is_float
        if isinstance(t, Struct) and (t.functor, len(t.args)) in _ARITH:
            vals = [self._eval(a) for a in t.args]
            result = _ARITH[(t.functor, len(t.args))](*[v for v, _ in vals])
            is_float = any(f for _, f in vals) or (
                isinstance(result, Fraction) and result.denominator != 1)
            if not is_float and isinstance(result, Fraction):
                result = int(result)
            return result, is_float
        raise _TypeFail()

    def _ground(self, t) -> bool:
        t = self.deref(t)
        if isinstance(t, Var):
            return False
        if isinstance(t, Struct):
            return all(self._ground(a) for a in t.args)
        return True

    def _unbound_warning(self, goal):
        msg = f"comparison with unbound arguments fails: {format_term(self.resolve(goal))}"
        if self.strict:
            raise UnresolvableComparison(msg)
        self.warnings.add(msg)

    def eval_builtin(self, goal, mult: list) -> bool:
        key = pred_key(goal)
        name, arity = key
        args = goal.args if isinstance(goal, Struct) else ()
        if key in DEBUGGING or key in (("write", 1), ("nl", 0), ("read", 1), ("true", 0)):
            return True
        if key in (("fail", 0), ("false", 0)):
            return False
        if key == ("=", 2):
            return self.unify(args[0], args[1], mult)
        if key == ("\\=", 2):
            mark = len(self.trail)
            ok = self.unify(args[0], args[1], [ONE])
            self.undo(mark)
            return not ok
        if key == ("is", 2):
            try:
                value, is_float = self._eval(args[1])
            except _Unbound:
                self._unbound_warning(goal)
                return False
            except (_TypeFail, ZeroDivisionError):
                return False
            return self.unify(args[0], Num(value, is_float), mult)
        if key in ARITH_BUILTINS:
            try:
                a, _ = self._eval(args[0])
                b, _ = self._eval(args[1])
            except _Unbound:
                self._unbound_warning(goal)
                return False
            except (_TypeFail, ZeroDivisionError):
                return False
            return _COMPARE[name](a, b)
        if key in COMPARISONS:
            if not (self._ground(args[0]) and self._ground(args[1])):
                self._unbound_warning(goal)
                return False
            a, b = self.resolve(args[0]), self.resolve(args[1])
            if name == "==":
                return a == b
            if name == "\\==":
                return a != b
            return _COMPARE[name](_order_key(a), _order_key(b))
        if key == ("functor", 3):
            t = self.deref(args[0])
            if isinstance(t, Var):
                n, a = self.deref(args[1]), self.deref(args[2])
                if not (isinstance(a, Num) and isinstance(a.value, int)):
                    self._unbound_warning(goal)
                    return False
                if a.value == 0:
                    return self.unify(t, n, mult)
                if not isinstance(n, Atom):
                    return False
                fresh = tuple(Var("_", next(self._ids)) for _ in range(a.value))
                return self.unify(t, Struct(n.name, fresh), mult)
            if isinstance(t, Struct):
                fn, ar = Atom(t.functor), len(t.args)
            else:
                fn, ar = t, 0
            return self.unify(args[1], fn, mult) and self.unify(args[2], Num(ar), mult)
        return False

    # -- resolution -------------------------------------------------------------

    def _carries_free(self, goal, body_only) -> bool:
        for v in body_only:
            t = self.deref(v)
            if isinstance(t, Var) and t not in self.gen:
                for w in term_vars(self.resolve(goal)):
                    if w == t:
                        return True
        return False

    def _solve(self, goals, prob: Fraction):
        if not goals:
            yield prob
            return
        (goal, depth, body_only), rest = goals[0], goals[1:]
        goal = self.deref(goal)
        if isinstance(goal, (Var, Num)):
            self.warnings.add(f"cannot call {format_term(self.resolve(goal))}")
            return
        key = pred_key(goal)
        if is_builtin(key):
            mark = len(self.trail)
            mult = [ONE]
            if self.eval_builtin(goal, mult):
                yield from self._solve(rest, prob * mult[0])
            self.undo(mark)
            return
        clauses = self.table.get(key)
        if not clauses:
            self.warnings.add(f"no clauses for {key[0]}/{key[1]}")
            return
        if depth > self.max_depth:
            self.pruned += prob
            return
        factor = ONE
        if self.normalize_free_body and body_only and self._carries_free(goal, body_only):
            m = self.mass(key)
            if m:
                factor = 1 / m
        for info in clauses:
            mark = len(self.trail)
            mapping = {v: Var(v.name, next(self._ids)) for v in info.variables}
            for v in info.head_free:
                self._mark(mapping[v])
            mult = [ONE]
            if self.unify(goal, self._rename(info.clause.head, mapping), mult):
                p = prob * factor * info.label * mult[0]
                if self.trace is not None:
                    self.trace(depth, self.resolve(goal), info, p)
                fresh = tuple(mapping[v] for v in info.body_only)
                body = tuple((self._rename(b, mapping), depth + 1, fresh) for b in info.clause.body)
                yield from self._solve(body + rest, p)
            self.undo(mark)

    def solutions(self, goal):
        """Yield (resolved goal, raw probability) for every refutation."""
        mark = len(self.trail)
        try:
            for p in self._solve(((goal, 1, ()),), ONE):
                yield self.resolve(goal), p
        finally:
            self.undo(mark)

    def estimate_distribution(self, key) -> PredicateDistribution:
        if key in self._cache:
            return self._cache[key]
        name, arity = key
        goal = Struct(name, tuple(Var(f"X{i + 1}", next(self._ids)) for i in range(arity))) \
            if arity else Atom(name)
        self._in_progress.add(key)
        before = self.pruned
        entries: dict = {}
        try:
            for answer, p in self.solutions(goal):
                pattern = _canonical(answer)
                entries[pattern] = entries.get(pattern, Fraction(0)) + p
        finally:
            self._in_progress.discard(key)
        mass = sum(entries.values(), Fraction(0))
        dist = PredicateDistribution(key, entries, mass, self.symbols, self.pruned - before)
        if mass and dist.pruned > mass / 100:
            self.warnings.add(
                f"depth limit {self.max_depth} pruned probability {float(dist.pruned):.5f} "
                f"while estimating {name}/{arity}")
        self._cache[key] = dist
        return dist

    def mass(self, key) -> Optional[Fraction]:
        if key in self._in_progress:
            return None
        return self.estimate_distribution(key).mass

    def raw_probability(self, atom) -> Fraction:
        return sum((p for _, p in self.solutions(atom)), Fraction(0))

    def solve_example(self, atom, strict: Optional[bool] = None) -> Fraction:
        """Normalized probability of a ground example (0 if it is not covered)."""
        strict = self.strict if strict is None else strict
        key = pred_key(atom)
        if key not in self.table:
            msg = f"example {format_term(atom)} uses {key[0]}/{key[1]}, which is not defined"
            if strict:
                raise ExampleNotCovered(msg)
            self.warnings.add(msg)
            return Fraction(0)
        raw = self.raw_probability(atom)
        mass = self.estimate_distribution(key).mass
        if raw == 0 or mass == 0:
            msg = f"example {format_term(atom)} is not covered by the program"
            if strict:
                raise ExampleNotCovered(msg)
            self.warnings.add(msg)
            return Fraction(0)
        return raw / mass


def _canonical(t):
    mapping: dict = {}

    def walk(x):
        if isinstance(x, Var):
            if x not in mapping:
                mapping[x] = Var("_", len(mapping) + 1)
            return mapping[x]
        if isinstance(x, Struct):
            return Struct(x.functor, tuple(walk(a) for a in x.args))
        return x

    return walk(t)


def _order_key(t):
    # standard order of terms: numbers < atoms < compound
    if isinstance(t, Num):
        return (0, t.value)
    if isinstance(t, Atom):
        return (1, t.name)
    return (2, len(t.args), t.functor, tuple(_order_key(a) for a in t.args))


def _div(a, b):
    return Fraction(a) / Fraction(b)


def _intdiv(a, b):
    return math.floor(Fraction(a) / Fraction(b)) if Fraction(a) / Fraction(b) >= 0 \
        else -math.floor(-Fraction(a) / Fraction(b))


def _pow(a, b):
    if isinstance(b, int) or (isinstance(b, Fraction) and b.denominator == 1):
        return Fraction(a) ** int(b)
    return Fraction(float(a) ** float(b))


_ARITH = {
    ("+", 2): lambda a, b: a + b,
    ("-", 2): lambda a, b: a - b,
    ("*", 2): lambda a, b: a * b,
    ("/", 2): _div,
    ("//", 2): _intdiv,
    ("mod", 2): lambda a, b: a % b,
    ("rem", 2): lambda a, b: a - b * _intdiv(a, b),
    ("^", 2): _pow,
    ("**", 2): _pow,
    ("min", 2): min,
    ("max", 2): max,
    ("-", 1): lambda a: -a,
    ("+", 1): lambda a: a,
    ("abs", 1): abs,
}

_COMPARE = {
    "<": lambda a, b: a < b, ">": lambda a, b: a > b,
    "=<": lambda a, b: a <= b, ">=": lambda a, b: a >= b,
    "=:=": lambda a, b: a == b, "=\\=": lambda a, b: a != b,
    "@<": lambda a, b: a < b, "@>": lambda a, b: a > b,
    "@=<": lambda a, b: a <= b, "@>=": lambda a, b: a >= b,
}


def first_refutation(solver: Solver, goal):
    """Choice points along the first refutation of goal, in Prolog's search order.

    Returns ([(selected atom, number of clause heads unifying with it)], number
    of symbols bound to free variables along the way), or None when the goal
    has no refutation.
    """
    steps: list = []

    def solve(goals, depth_ok=True):
        if not goals:
            return True
        (g, depth), rest = goals[0], goals[1:]
        g = solver.deref(g)
        key = pred_key(g)
        if is_builtin(key):
            mark = len(solver.trail)
            if solver.eval_builtin(g, [ONE]) and solve(rest):
                return True
            solver.undo(mark)
            return False
        if depth > solver.max_depth:
            return False
        candidates = []
        for info in solver.table.get(key, []):
            mark = len(solver.trail)
            mapping = {v: Var(v.name, next(solver._ids)) for v in info.variables}
            if solver.unify(g, solver._rename(info.clause.head, mapping), [ONE]):
                candidates.append(info)
            solver.undo(mark)
        selected = solver.resolve(g)
        for info in candidates:
            mark = len(solver.trail)
            mapping = {v: Var(v.name, next(solver._ids)) for v in info.variables}
            for v in info.head_free:
                solver._mark(mapping[v])
            solver.unify(g, solver._rename(info.clause.head, mapping), [ONE])
            steps.append((selected, len(candidates)))
            body = tuple((solver._rename(b, mapping), depth + 1) for b in info.clause.body)
            if solve(body + rest):
                return True
            steps.pop()
            solver.undo(mark)
        return False

    mark = len(solver.trail)
    start = solver.generated
    try:
        if solve(((goal, 1),)):
            return list(steps), solver.generated - start
        return None
    finally:
        solver.undo(mark)
