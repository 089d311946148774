"""Per-clause size propagation, size guards and clause exclusivity.

Sizes are tracked as ``SizeBound(lo, hi)`` pairs of expressions over the
clause head's input size variables.  Integer arguments are measured by
their value and lists by their length; arithmetic on sizes assumes the
values involved are nonnegative, which the size domains guarantee.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from ..costfn.evaluate import EvalError
from ..costfn.expr import Add, Const, Expr, Inf, Mul, Sub, Var, free_vars
from ..costfn.poly import normalize, to_poly
from ..hcir.terms import Builtin, Clause, Int, Struct, Var as TVar, is_cons, is_nil
from ..sizedtypes import Mode, PredicateSignature, SizeMetric

COMPARISONS = ("<", "=<", ">", ">=", "==")


@dataclass(frozen=True)
class SizeBound:
    lo: Expr
    hi: Expr

    @classmethod
    def exact(cls, e: Expr):
        e = normalize(e)
        return cls(e, e)

    @property
    def is_exact(self):
        return self.lo == self.hi

    @property
    def bounded(self):
        return not isinstance(self.hi, Inf)

    def __add__(self, other):
        return SizeBound(normalize(Add(self.lo, other.lo)), _hi(Add, self.hi, other.hi))

    def __sub__(self, other):
        if not other.bounded:
            return UNKNOWN
        return SizeBound(normalize(Sub(self.lo, other.hi)), _hi(Sub, self.hi, other.lo))

    def __mul__(self, other):
        return SizeBound(normalize(Mul(self.lo, other.lo)), _hi(Mul, self.hi, other.hi))


def _hi(op, a, b):
    if isinstance(a, Inf) or isinstance(b, Inf):
        return Inf()
    return normalize(op(a, b))


UNKNOWN = SizeBound(Const(0), Inf())


def const_size(k) -> SizeBound:
    return SizeBound(Const(k), Const(k))


# ---------------------------------------------------------------------------

class ClauseSizes:
    """Size environment of one clause, filled in literal order."""

    def __init__(self, clause: Clause, sig: PredicateSignature | None):
        self.clause = clause
        self.sig = sig
        self.env: dict = {}
        self.guards: dict = {}
        self.feasible = True
        if sig is not None:
            self._bind_head()

    def _restrict(self, var, lo, hi):
        old_lo, old_hi = self.guards.get(var, (0, math.inf))
        lo, hi = max(old_lo, lo), min(old_hi, hi)
        if lo > hi:
            self.feasible = False
        self.guards[var] = (lo, hi)

    def _bind_head(self):
        for param, arg in zip(self.clause.params, self.sig.args):
            if arg.mode is not Mode.IN or arg.metric is None:
                continue
            v = Var(arg.name)
            if isinstance(param, TVar):
                self.env.setdefault(param.name, SizeBound.exact(v))
            elif arg.metric is SizeMetric.INT_VALUE and isinstance(param, Int):
                self._restrict(arg.name, abs(param.value), abs(param.value))
            elif arg.metric is SizeMetric.LIST_LENGTH:
                k, t = 0, param
                while is_cons(t):
                    k, t = k + 1, t.args[1]
                if is_nil(t):
                    self._restrict(arg.name, k, k)
                elif isinstance(t, TVar):
                    self._restrict(arg.name, k, math.inf)
                    self.env.setdefault(t.name, SizeBound.exact(Sub(v, Const(k))))

    def size(self, t) -> SizeBound | None:
        if isinstance(t, TVar):
            return self.env.get(t.name)
        if isinstance(t, Int):
            return const_size(abs(t.value))
        if is_nil(t):
            return const_size(0)
        if is_cons(t):
            tail = self.size(t.args[1])
            return None if tail is None else tail + const_size(1)
        if isinstance(t, Struct) and len(t.args) == 2 and t.functor in ("+", "-", "*"):
            a, b = self.size(t.args[0]), self.size(t.args[1])
            if a is None or b is None:
                return None
            return {"+": a.__add__, "-": a.__sub__, "*": a.__mul__}[t.functor](b)
        return None

    def bind(self, t, sb: SizeBound | None):
        if sb is not None and isinstance(t, TVar) and t.name not in self.env:
            self.env[t.name] = sb

    def builtin(self, lit: Builtin):
        left, right = lit.args
        if lit.op == "is":
            self.bind(left, self.size(right))
        elif lit.op == "=":
            if isinstance(left, TVar) and left.name not in self.env:
                self.bind(left, self.size(right))
            elif isinstance(right, TVar):
                self.bind(right, self.size(left))

    def guard(self, lit: Builtin) -> bool:
        """Record a size guard from a comparison; False if not one."""
        if lit.op not in COMPARISONS:
            return False
        a, b = self.size(lit.args[0]), self.size(lit.args[1])
        if a is None or b is None or not (a.is_exact and b.is_exact):
            return False
        try:
            diff = to_poly(Sub(a.lo, b.lo))
        except EvalError:
            return False
        names = {x.name for x in diff.atoms() if isinstance(x, Var)}
        if not diff.is_polynomial_in() or len(names) > 1 or diff.degree() > 1:
            return False
        if any(n.startswith("@") for n in names):
            return False
        if not names:
            c = diff.const_value()
            holds = {"<": c < 0, "=<": c <= 0, ">": c > 0, ">=": c >= 0, "==": c == 0}[lit.op]
            if not holds:
                self.feasible = False
            return True
        (var,) = names
        parts = diff.coefficients_in(var)
        c1 = parts[1].const_value()
        c0 = parts[0].const_value() if 0 in parts else Fraction(0)
        op = lit.op
        if c1 < 0:
            c1, c0 = -c1, -c0
            op = {"<": ">", "=<": ">=", ">": "<", ">=": "=<", "==": "=="}[op]
        t = -c0 / c1
        if op == "<":
            self._restrict(var, 0, math.ceil(t) - 1)
        elif op == "=<":
            self._restrict(var, 0, math.floor(t))
        elif op == ">":
            self._restrict(var, math.floor(t) + 1, math.inf)
        elif op == ">=":
            self._restrict(var, math.ceil(t), math.inf)
        elif t.denominator == 1:
            self._restrict(var, int(t), int(t))
        else:
            self.feasible = False
        return True


def leading_guards(clause: Clause):
    out = []
    for lit in clause.body:
        if not (isinstance(lit, Builtin) and lit.op in COMPARISONS):
            break
        out.append(lit)
    return out


# ---------------------------------------------------------------------------
# exclusivity

def _shape(t, head, tag):
    if isinstance(t, TVar):
        for i, p in enumerate(head):
            if p == t:
                return f"${i}"
        return f"?{tag}{t.name}"
    if isinstance(t, Int):
        return str(t.value)
    return f"{t.functor}(" + ",".join(_shape(a, head, tag) for a in t.args) + ")"


def _comparisons(clause: Clause, tag):
    out = set()
    for lit in leading_guards(clause):
        x, y = (_shape(a, clause.params, tag) for a in lit.args)
        if lit.op == ">":
            x, y, op = y, x, "<"
        elif lit.op == ">=":
            x, y, op = y, x, "=<"
        else:
            op = lit.op
        if op == "==":
            x, y = sorted((x, y))
        out.add((x, op, y))
    return out


def _head_clash(c1: Clause, c2: Clause) -> bool:
    for p1, p2 in zip(c1.params, c2.params):
        if isinstance(p1, TVar) or isinstance(p2, TVar):
            continue
        if isinstance(p1, Int) or isinstance(p2, Int):
            if p1 != p2:
                return True
            continue
        if (p1.functor, len(p1.args)) != (p2.functor, len(p2.args)):
            return True
    return False


def exclusive(c1: Clause, s1: ClauseSizes, c2: Clause, s2: ClauseSizes) -> bool:
    """Syntactic check that two clauses can never both succeed on a call."""
    if _head_clash(c1, c2):
        return True
    for v, (lo1, hi1) in s1.guards.items():
        if v in s2.guards:
            lo2, hi2 = s2.guards[v]
            if hi1 < lo2 or hi2 < lo1:
                return True
    g1, g2 = _comparisons(c1, "a"), _comparisons(c2, "b")
    for x, op, y in g1:
        if op == "<" and ((y, "=<", x) in g2 or (y, "<", x) in g2
                          or (min(x, y), "==", max(x, y)) in g2):
            return True
        if op == "=<" and (y, "<", x) in g2:
            return True
        if op == "==" and ((x, "<", y) in g2 or (y, "<", x) in g2):
            return True
    return False


def size_free(e: Expr) -> bool:
    return not any(n.startswith("@") for n in free_vars(e))
