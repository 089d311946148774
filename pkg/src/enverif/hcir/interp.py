"""Reference interpreter: runs a goal and measures its resource usage.

Used as an oracle for the static analysis.  Execution is plain SLD
resolution with chronological backtracking; the cost reported is that of
the first successful derivation (one step per clause used, or the sum of
leaf-call energies).  Leaf calls (predicates the program does not define)
succeed once and leave their outputs unbound.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .terms import Builtin, Call, Int, Program, Struct, Var


class ExecutionError(RuntimeError):
    pass


def _walk(t, s):
    while isinstance(t, Var) and t.name in s:
        t = s[t.name]
    return t


def resolve(t, s):
    t = _walk(t, s)
    if isinstance(t, Struct):
        return Struct(t.functor, tuple(resolve(a, s) for a in t.args))
    return t


def _occurs(name, t, s):
    t = _walk(t, s)
    if isinstance(t, Var):
        return t.name == name
    if isinstance(t, Struct):
        return any(_occurs(name, a, s) for a in t.args)
    return False


def unify(a, b, s):
    """Extended substitution or None."""
    a, b = _walk(a, s), _walk(b, s)
    if isinstance(a, Var) and isinstance(b, Var) and a.name == b.name:
        return s
    if isinstance(a, Var):
        return None if _occurs(a.name, b, s) else {**s, a.name: b}
    if isinstance(b, Var):
        return None if _occurs(b.name, a, s) else {**s, b.name: a}
    if isinstance(a, Int) and isinstance(b, Int):
        return s if a.value == b.value else None
    if isinstance(a, Struct) and isinstance(b, Struct):
        if a.functor != b.functor or len(a.args) != len(b.args):
            return None
        for x, y in zip(a.args, b.args):
            s = unify(x, y, s)
            if s is None:
                return None
        return s
    return None


def arith(t, s) -> int:
    t = _walk(t, s)
    if isinstance(t, Int):
        return t.value
    if isinstance(t, Var):
        raise ExecutionError(f"arithmetic on unbound variable {t.name}")
    if isinstance(t, Struct):
        if t.functor == "-" and len(t.args) == 1:
            return -arith(t.args[0], s)
        if len(t.args) == 2:
            x, y = arith(t.args[0], s), arith(t.args[1], s)
            if t.functor == "+":
                return x + y
            if t.functor == "-":
                return x - y
            if t.functor == "*":
                return x * y
            if t.functor in ("//", "/") and y != 0:
                return x // y if t.functor == "//" or x % y == 0 else Fraction(x, y)
            if t.functor == "mod" and y != 0:
                return x % y
    raise ExecutionError(f"cannot evaluate {t}")


def _push(lits, depth, rest):
    for lit in reversed(lits):
        rest = (lit, depth, rest)
    return rest


@dataclass
class Interpreter:
    program: Program
    model: object = None
    resource: str = "steps"
    bound: str = "upper"
    max_depth: int = 100_000

    def __post_init__(self):
        self._fresh = itertools.count()

    def _rename(self, clause):
        tag = next(self._fresh)
        mapping = {}

        def go(t):
            if isinstance(t, Var):
                if t.name == "_":
                    return Var(f"_G{tag}_{next(self._fresh)}")
                return mapping.setdefault(t.name, Var(f"{t.name}_{tag}"))
            if isinstance(t, Struct):
                return Struct(t.functor, tuple(go(a) for a in t.args))
            return t

        params = tuple(go(p) for p in clause.params)
        body = []
        for lit in clause.body:
            args = tuple(go(a) for a in lit.args)
            body.append(Call(lit.name, args) if isinstance(lit, Call) else Builtin(lit.op, args))
        return params, body

    def _leaf_cost(self, lit):
        if self.resource == "steps" or self.model is None:
            return 0
        from ..costmodel import lookup
        return lookup(self.model, lit, self.bound)

    def _solve(self, goals, s, cost, depth):
        """Depth-first search with an explicit choice-point stack.

        Goal lists are cons cells ``(literal, depth, rest)`` so extending a
        continuation is O(body length); solutions come in clause order.
        """
        stack = [(_push(goals, depth, None), s, cost)]
        while stack:
            goals, s, cost = stack.pop()
            if goals is None:
                yield s, cost
                continue
            lit, depth, rest = goals
            if depth > self.max_depth:
                raise ExecutionError("depth limit exceeded")
            if isinstance(lit, Builtin):
                s2 = self._builtin(lit, s)
                if s2 is not None:
                    stack.append((rest, s2, cost + self._leaf_cost(lit)))
                continue
            if not self.program.defines(lit.key):
                stack.append((rest, s, cost + self._leaf_cost(lit)))
                continue
            step = 1 if self.resource == "steps" else 0
            alternatives = []
            for clause in self.program.clauses(lit.key):
                params, body = self._rename(clause)
                s2 = s
                for p, a in zip(params, lit.args):
                    s2 = unify(p, a, s2)
                    if s2 is None:
                        break
                if s2 is not None:
                    alternatives.append((_push(body, depth + 1, rest), s2, cost + step))
            stack.extend(reversed(alternatives))

    def _builtin(self, lit, s):
        a, b = lit.args
        if lit.op == "=":
            return unify(a, b, s)
        if lit.op == "==":
            return s if resolve(a, s) == resolve(b, s) else None
        if lit.op == "is":
            return unify(a, Int(arith(b, s)), s)
        x, y = arith(a, s), arith(b, s)
        ok = {"<": x < y, "=<": x <= y, ">": x > y, ">=": x >= y}[lit.op]
        return s if ok else None

    def run(self, name: str, args):
        """(resolved arguments, cost) of the first solution, or None."""
        goal = Call(name, tuple(args))
        for s, cost in self._solve([goal], {}, Fraction(0), 0):
            return tuple(resolve(a, s) for a in args), cost
        return None


def measure(program: Program, name: str, args, model=None, resource="steps",
            bound="upper"):
    """Cost of the first solution of ``name(args)``; raises if it fails."""
    out = Interpreter(program, model, resource, bound).run(name, args)
    if out is None:
        raise ExecutionError(f"{name} failed")
    return out[1]
