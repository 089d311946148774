"""Canonical sum-of-monomials form for cost expressions.

A :class:`Poly` maps monomials to rational coefficients.  A monomial is a
sorted tuple of ``(atom, exponent)`` pairs where an atom is either a size
variable or an opaque, already-normalized non-polynomial subexpression
(``power(2, N)``, ``log(2, N)``, ``min(a)``, a symbolic ``sum``...).  Keeping
non-polynomial parts as atoms lets ``power(2, N) - power(2, N)`` cancel while
leaving everything else structurally intact.

Free variables are assumed to range over nonnegative integers (they are
input sizes); this matters only for the closed forms of symbolic
summations.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
import math

from .evaluate import Enclosure, EvalError, Indeterminate, evaluate
from .expr import (Add, ArrayMax, ArrayMin, Const, Div, Expr, Inf, Log, Mul,
                   Power, Prod, Sub, Sum, Var, free_vars, render, subst)

MAX_POWER_EXPANSION = 32
MAX_SUM_EXPANSION = 2000


def _atom_key(a: Expr):
    if isinstance(a, Var):
        return (0, a.name)
    if isinstance(a, Inf):
        return (2, render(a))
    return (1, render(a))


class Poly:
    """Immutable multivariate polynomial over rational coefficients."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        clean = {}
        for mono, c in (terms or {}).items():
            c = Fraction(c)
            if c:
                clean[mono] = c
        self.terms = clean

    @classmethod
    def const(cls, c):
        return cls({(): Fraction(c)})

    @classmethod
    def atom(cls, a: Expr, exp: int = 1):
        return cls({((a, exp),): Fraction(1)})

    def __eq__(self, other):
        return isinstance(other, Poly) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __repr__(self):
        return f"Poly({render(self.to_expr())})"

    def is_zero(self):
        return not self.terms

    def is_const(self):
        return all(m == () for m in self.terms)

    def const_value(self) -> Fraction:
        return self.terms.get((), Fraction(0))

    def atoms(self):
        return {a for m in self.terms for a, _ in m}

    def is_polynomial_in(self, names=None):
        """True when every atom is a plain variable (optionally from ``names``)."""
        for a in self.atoms():
            if not isinstance(a, Var):
                return False
            if names is not None and a.name not in names:
                return False
        return True

    def degree(self, var: str | None = None) -> int:
        best = 0
        for m in self.terms:
            if var is None:
                d = sum(e for a, e in m if isinstance(a, Var))
            else:
                d = sum(e for a, e in m if a == Var(var))
            best = max(best, d)
        return best

    def __add__(self, other):
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, Fraction(0)) + c
        return Poly(out)

    def __neg__(self):
        return Poly({m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, k):
        k = Fraction(k)
        return Poly({m: c * k for m, c in self.terms.items()})

    def __mul__(self, other):
        out = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = _mono_mul(m1, m2)
                out[m] = out.get(m, Fraction(0)) + c1 * c2
        return Poly(out)

    def __pow__(self, k: int):
        result = Poly.const(1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def coefficients_in(self, var: str):
        """Split into {exponent of ``var``: coefficient Poly}."""
        out = {}
        v = Var(var)
        for m, c in self.terms.items():
            e = 0
            rest = []
            for a, k in m:
                if a == v:
                    e = k
                else:
                    rest.append((a, k))
            out.setdefault(e, {})
            key = tuple(rest)
            out[e][key] = out[e].get(key, Fraction(0)) + c
        return {e: Poly(t) for e, t in out.items()}

    def substitute(self, var: str, value: "Poly") -> "Poly":
        out = Poly()
        v = Var(var)
        for m, c in self.terms.items():
            term = Poly.const(c)
            for a, k in m:
                term = term * (value ** k if a == v else Poly({((a, k),): 1}))
            out = out + term
        return out

    def univariate_coeffs(self, var: str):
        """Dense rational coefficient list (lowest degree first); requires the
        polynomial to be univariate in ``var`` with no other atoms."""
        if not self.is_polynomial_in({var}):
            raise ValueError("not a univariate polynomial")
        deg = self.degree(var)
        coeffs = [Fraction(0)] * (deg + 1)
        for m, c in self.terms.items():
            e = m[0][1] if m else 0
            coeffs[e] += c
        return coeffs

    def sorted_terms(self):
        def key(item):
            m, _ = item
            deg = sum(e for _, e in m)
            return (-deg, tuple((_atom_key(a), -e) for a, e in m))
        return sorted(self.terms.items(), key=key)

    def to_expr(self) -> Expr:
        if not self.terms:
            return Const(0)
        out = None
        for m, c in self.sorted_terms():
            factors = None
            for a, e in m:
                f = a if e == 1 else Power(a, Const(e))
                factors = f if factors is None else Mul(factors, f)
            if out is None:
                if factors is None:
                    out = Const(c)
                elif c == 1:
                    out = factors
                else:
                    out = Mul(Const(c), factors)
                continue
            mag = abs(c)
            if factors is None:
                term = Const(mag)
            elif mag == 1:
                term = factors
            else:
                term = Mul(Const(mag), factors)
            out = Add(out, term) if c > 0 else Sub(out, term)
        return out


def _mono_mul(m1, m2):
    if not m1:
        return m2
    if not m2:
        return m1
    acc = {}
    for a, e in m1 + m2:
        acc[a] = acc.get(a, 0) + e
    return tuple(sorted(acc.items(), key=lambda t: _atom_key(t[0])))


# ---------------------------------------------------------------------------
# summation table: sum_{i=1}^{n} i^k for k = 0..3

def _faulhaber(k: int, n: Poly) -> Poly:
    one = Poly.const(1)
    if k == 0:
        return n
    if k == 1:
        return (n * (n + one)).scale(Fraction(1, 2))
    if k == 2:
        return (n * (n + one) * (n.scale(2) + one)).scale(Fraction(1, 6))
    if k == 3:
        t = (n * (n + one)).scale(Fraction(1, 2))
        return t * t
    raise ValueError("no closed form for this power")


SUM_TABLE_MAX_DEGREE = 3


def sum_closed_form(body: Poly, index: str, lower: Poly, upper: Poly):
    """Closed form of sum_{index=lower}^{upper} body, or None.

    Valid whenever upper >= lower - 1; callers are responsible for that
    side condition.
    """
    if any(index in free_vars(a) for a in body.atoms() if a != Var(index)):
        return None
    parts = body.coefficients_in(index)
    if not parts:
        return Poly()
    if max(parts) > SUM_TABLE_MAX_DEGREE:
        return None
    total = Poly()
    below = lower - Poly.const(1)
    for k, coeff in parts.items():
        total = total + coeff * (_faulhaber(k, upper) - _faulhaber(k, below))
    return total


def _min_value(p: Poly, lower_bounds: dict):
    """Lower bound of p over its variables' ranges, when p is monotone."""
    if not p.is_polynomial_in():
        return None
    if any(c < 0 for m, c in p.terms.items() if m):
        return None
    env = {}
    for a in p.atoms():
        lb = lower_bounds.get(a.name, 0)
        if lb is None or lb < 0:
            return None
        env[a.name] = lb
    return evaluate(p.to_expr(), env)


# ---------------------------------------------------------------------------
# normalization

def to_poly(e: Expr, _bounds=None) -> Poly:
    """Convert to canonical polynomial form (see module docstring)."""
    lb = {} if _bounds is None else _bounds
    if isinstance(e, Const):
        return Poly.const(e.value)
    if isinstance(e, Var):
        return Poly.atom(e)
    if isinstance(e, Inf):
        return Poly.atom(e)
    if isinstance(e, (ArrayMin, ArrayMax)):
        return Poly.atom(e)
    if isinstance(e, Add):
        return _inf_guard(to_poly(e.left, lb), to_poly(e.right, lb), 1)
    if isinstance(e, Sub):
        return _inf_guard(to_poly(e.left, lb), to_poly(e.right, lb), -1)
    if isinstance(e, Mul):
        left, right = to_poly(e.left, lb), to_poly(e.right, lb)
        for a, b in ((left, right), (right, left)):
            if _has_inf(a) and b.is_zero():
                raise Indeterminate("0 * inf")
        return left * right
    if isinstance(e, Div):
        num, den = to_poly(e.left, lb), to_poly(e.right, lb)
        if den.is_const() and not _has_inf(den):
            c = den.const_value()
            if c == 0:
                raise ZeroDivisionError("division by zero")
            return num.scale(1 / c)
        if num.is_zero():
            return Poly()
        return Poly.atom(Div(num.to_expr(), den.to_expr()))
    if isinstance(e, Power):
        return _power(to_poly(e.base, lb), to_poly(e.exponent, lb))
    if isinstance(e, Log):
        base, arg = to_poly(e.base, lb), to_poly(e.arg, lb)
        if base.is_const() and arg.is_const():
            folded = _fold(Log(base.to_expr(), arg.to_expr()))
            if folded is not None:
                return folded
        return Poly.atom(Log(base.to_expr(), arg.to_expr()))
    if isinstance(e, (Sum, Prod)):
        return _binder(e, lb)
    raise TypeError(f"not an expression: {e!r}")


def _has_inf(p: Poly):
    return any(isinstance(a, Inf) for a in p.atoms())


def _inf_guard(a: Poly, b: Poly, sign: int) -> Poly:
    result = a + b.scale(sign)
    for pos in (True, False):
        mono = ((Inf(pos), 1),)
        ca, cb = a.terms.get(mono, 0), b.terms.get(mono, 0) * sign
        if ca and cb and (ca > 0) != (cb > 0):
            raise Indeterminate("inf - inf")
    return result


def _fold(e: Expr):
    try:
        v = evaluate(e, {})
    except EvalError:
        return None
    if isinstance(v, (Enclosure, float)):
        return None
    return Poly.const(v)


def _power(base: Poly, exp: Poly) -> Poly:
    if exp.is_const() and not _has_inf(exp):
        k = exp.const_value()
        if base.is_const() and not _has_inf(base):
            folded = _fold(Power(base.to_expr(), Const(k)))
            if folded is not None:
                return folded
        elif k.denominator == 1 and 0 <= k <= MAX_POWER_EXPANSION and not _has_inf(base):
            return base ** int(k)
        return Poly.atom(Power(base.to_expr(), Const(k)))
    if base.is_const() and not _has_inf(base):
        a = base.const_value()
        if a == 1:
            return Poly.const(1)
        c0 = exp.const_value()
        if a > 0 and c0.denominator == 1 and c0 != 0:
            rest = exp - Poly.const(c0)
            return Poly.const(a ** int(c0)) * Poly.atom(Power(Const(a), rest.to_expr()))
        return Poly.atom(Power(Const(a), exp.to_expr()))
    return Poly.atom(Power(base.to_expr(), exp.to_expr()))


def _binder(e, lb) -> Poly:
    lower, upper = to_poly(e.lower, lb), to_poly(e.upper, lb)
    if lower.is_const() and upper.is_const() and not (_has_inf(lower) or _has_inf(upper)):
        lo, hi = lower.const_value(), upper.const_value()
        if lo.denominator == 1 and hi.denominator == 1 and hi - lo < MAX_SUM_EXPANSION:
            acc = Poly() if isinstance(e, Sum) else Poly.const(1)
            for i in range(int(lo), int(hi) + 1):
                term = to_poly(subst(e.body, {e.index: Const(i)}), lb)
                acc = acc + term if isinstance(e, Sum) else acc * term
            return acc
    inner = dict(lb)
    lo_min = _min_value(lower, lb) if lower.is_polynomial_in() else None
    inner[e.index] = lo_min if isinstance(lo_min, Fraction) else None
    body = to_poly(e.body, inner)
    if isinstance(e, Sum) and lower.is_const() and not _has_inf(lower):
        hi_min = _min_value(upper, lb)
        ok = isinstance(hi_min, Fraction) and hi_min >= lower.const_value() - 1
        if ok:
            closed = sum_closed_form(body, e.index, lower, upper)
            if closed is not None:
                return closed
    node = type(e)(e.index, lower.to_expr(), upper.to_expr(), body.to_expr())
    return Poly.atom(node)


def normalize(e: Expr) -> Expr:
    """Canonical form: folded constants, flattened polynomial parts in
    graded-lex order, constant-bound summations expanded."""
    p = to_poly(e)
    for pos in (True, False):
        mono = ((Inf(pos), 1),)
        c = p.terms.get(mono)
        others_finite = not any(isinstance(a, Inf) for m in p.terms if m != mono
                                for a, _ in m)
        if c and others_finite:
            return Inf(pos if c > 0 else not pos)
    return p.to_expr()


# ---------------------------------------------------------------------------
# classification

@dataclass(frozen=True)
class FunctionClass:
    kind: str                  # constant|polynomial|exponential|logarithmic|mixed|unsupported
    degree: int | None = None

    def __str__(self):
        if self.kind == "polynomial":
            return f"polynomial({self.degree})"
        return self.kind


def _is_const_expr(e: Expr):
    return not free_vars(e) and not any(
        isinstance(n, (ArrayMin, ArrayMax)) for n in _walk(e))


def _walk(e):
    from .expr import walk
    return walk(e)


def atom_kind(a: Expr) -> str:
    """Growth family of a normalized atom."""
    if isinstance(a, Var):
        return "polynomial"
    if isinstance(a, Inf):
        return "constant"
    if isinstance(a, Power) and isinstance(a.base, Const) and a.base.value > 1:
        exp = to_poly(a.exponent)
        if exp.is_polynomial_in() and not exp.is_const():
            return "exponential"
        return "unsupported"
    if isinstance(a, Log) and isinstance(a.base, Const) and a.base.value > 1:
        arg = to_poly(a.arg)
        if arg.is_polynomial_in() and not arg.is_const():
            return "logarithmic"
        return "unsupported"
    return "unsupported"


def classify(e: Expr) -> FunctionClass:
    p = to_poly(e)
    kinds = set()
    for m in p.terms:
        for a, _ in m:
            kinds.add(atom_kind(a))
    kinds.discard("constant")
    if "unsupported" in kinds:
        return FunctionClass("unsupported")
    if not kinds:
        return FunctionClass("constant")
    if kinds == {"polynomial"}:
        d = p.degree()
        return FunctionClass("polynomial", d) if d > 0 else FunctionClass("constant")
    if len(kinds) == 1:
        return FunctionClass(kinds.pop())
    return FunctionClass("mixed")


# ---------------------------------------------------------------------------
# bound functions

@dataclass(frozen=True)
class DomainSet:
    """Per-variable integer ranges [lo, hi]; hi may be ``math.inf``."""

    ranges: tuple = ()

    def __post_init__(self):
        items = tuple(sorted((str(v), int(lo), hi if hi == math.inf else int(hi))
                             for v, lo, hi in self.ranges))
        for v, lo, hi in items:
            if lo < 0:
                raise ValueError(f"negative size bound for {v}")
            if lo > hi:
                raise ValueError(f"empty range for {v}")
        object.__setattr__(self, "ranges", items)

    @classmethod
    def full(cls, names):
        return cls(tuple((n, 0, math.inf) for n in names))

    @classmethod
    def of(cls, **ranges):
        return cls(tuple((k, lo, hi) for k, (lo, hi) in ranges.items()))

    def vars(self):
        return [v for v, _, _ in self.ranges]

    def get(self, var):
        for v, lo, hi in self.ranges:
            if v == var:
                return lo, hi
        return 0, math.inf

    def intersect(self, other: "DomainSet") -> "DomainSet":
        names = sorted(set(self.vars()) | set(other.vars()))
        out = []
        for n in names:
            a, b = self.get(n), other.get(n)
            lo, hi = max(a[0], b[0]), min(a[1], b[1])
            if lo > hi:
                raise DisjointDomains(f"domains for {n} do not intersect")
            out.append((n, lo, hi))
        return DomainSet(tuple(out))

    def restrict(self, var, lo, hi) -> "DomainSet":
        return self.intersect(DomainSet(((var, lo, hi),)))

    def __contains__(self, point: dict):
        for v, lo, hi in self.ranges:
            if not lo <= point.get(v, 0) <= hi:
                return False
        return True


class DisjointDomains(ValueError):
    pass


@dataclass(frozen=True)
class BoundFn:
    """A bound function over input sizes: expression, variable order, domain."""

    expr: Expr
    vars: tuple = ()
    domain: DomainSet = field(default_factory=DomainSet)

    def __post_init__(self):
        object.__setattr__(self, "vars", tuple(self.vars))
        missing = free_vars(self.expr) - set(self.vars)
        if missing:
            raise ValueError(f"free variables {sorted(missing)} not in {self.vars}")

    @classmethod
    def of(cls, expr, vars=None, domain=None):
        from .expr import as_expr
        expr = as_expr(expr)
        vars = tuple(sorted(free_vars(expr))) if vars is None else tuple(vars)
        return cls(expr, vars, domain if domain is not None else DomainSet.full(vars))

    def __call__(self, *args, **kw):
        env = dict(zip(self.vars, args))
        env.update(kw)
        return evaluate(self.expr, env)

    def normalized(self):
        return BoundFn(normalize(self.expr), self.vars, self.domain)


@dataclass(frozen=True)
class IntervalFn:
    lower: BoundFn
    upper: BoundFn

    @classmethod
    def exact(cls, f: BoundFn):
        return cls(f, f)


def subtract(f1: BoundFn, f2: BoundFn) -> BoundFn:
    """f1 - f2 over the intersection of the two domains."""
    names = tuple(dict.fromkeys(f1.vars + f2.vars))
    d1 = f1.domain.intersect(DomainSet.full(names))
    d2 = f2.domain.intersect(DomainSet.full(names))
    domain = d1.intersect(d2)
    return BoundFn(normalize(Sub(f1.expr, f2.expr)), names, domain)
