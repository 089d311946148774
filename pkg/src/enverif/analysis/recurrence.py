"""First-order recurrences over one size variable and their closed forms.

A recurrence is a list of cases ``T(n) = a*T(n-1) + p(n)`` for ``n`` in an
integer range; ``a = 0`` marks a base case.  ``p`` may mention other size
variables, which are carried along as symbolic parameters.  Where several
cases apply at the same ``n`` the upper-bound recurrence takes their maximum
and the lower-bound recurrence their minimum.

Two shapes have closed forms: ``a = 1`` (telescoping with the summation
table, ``p`` of degree at most 3 in ``n``) and ``a >= 2`` (``A*a^n`` plus a
polynomial particular solution).  Every solution is checked against exact
unrolling before it is returned.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from math import comb

from ..costfn.evaluate import EvalError, evaluate_number
from ..costfn.expr import Const, Expr, Power, Var, free_vars, render, subst
from ..costfn.poly import Poly, sum_closed_form, to_poly

UNROLL_CHECK = 25
PARAM_SAMPLES = (0, 1, 2, 7)
MAX_PARAM_COMBOS = 64


class Unsupported(Exception):
    """The recurrence (or the predicate behind it) is outside the solvable
    classes; callers fall back to the trivial interval."""


@dataclass(frozen=True)
class Case:
    lo: int
    hi: float
    a: int
    p: Expr

    def applies(self, n: int) -> bool:
        return self.lo <= n <= self.hi

    def __str__(self):
        rng = f"{self.lo}..{'inf' if self.hi == math.inf else int(self.hi)}"
        rec = "" if self.a == 0 else ("T(n-1) + " if self.a == 1 else f"{self.a}*T(n-1) + ")
        return f"n in {rng}: {rec}{render(self.p)}"


@dataclass(frozen=True)
class Recurrence:
    name: str
    bound: str
    var: str
    cases: tuple

    def __post_init__(self):
        object.__setattr__(self, "cases", tuple(self.cases))
        if self.bound not in ("lower", "upper"):
            raise ValueError(f"bound must be lower or upper, not {self.bound!r}")

    def params(self):
        names = set()
        for c in self.cases:
            names |= free_vars(c.p)
        names.discard(self.var)
        return tuple(sorted(names))

    def __str__(self):
        return "\n".join(f"{self.name} [{self.bound}] {c}" for c in self.cases)


@dataclass(frozen=True)
class ClosedForm:
    """``expr`` bounds the recurrence on every ``n >= 0``; ``exact`` is set
    when it also equals it everywhere (no widening, no shift)."""

    expr: Expr
    var: str
    exact: bool = True


# ---------------------------------------------------------------------------
# coefficient-wise widening

def _nonneg_atom(a: Expr) -> bool:
    if isinstance(a, Var):
        return True
    if isinstance(a, Power) and isinstance(a.base, Const) and a.base.value > 0:
        return True
    return False


def widen(polys, bound: str) -> Poly:
    """Coefficient-wise max (upper) or min (lower) of polynomials whose
    monomials are all nonnegative; this bounds the pointwise max/min."""
    polys = list(polys)
    if len(polys) == 1:
        return polys[0]
    for p in polys:
        if not all(_nonneg_atom(a) for a in p.atoms()):
            raise Unsupported("cannot widen over non-monotone terms")
    monos = set()
    for p in polys:
        monos |= set(p.terms)
    pick = max if bound == "upper" else min
    return Poly({m: pick(p.terms.get(m, Fraction(0)) for p in polys) for m in monos})


# ---------------------------------------------------------------------------
# unrolling

def _tail_start(r: Recurrence) -> int:
    k0 = 0
    for c in r.cases:
        k0 = max(k0, c.lo)
        if c.hi != math.inf:
            k0 = max(k0, int(c.hi) + 1)
    return k0


def unroll(r: Recurrence, n_max: int, env: dict | None = None):
    """Exact values T(0..n_max) for fixed parameter values."""
    env = dict(env or {})
    pick = max if r.bound == "upper" else min
    values = []
    for n in range(n_max + 1):
        env[r.var] = n
        options = []
        for c in r.cases:
            if not c.applies(n):
                continue
            if c.a and n == 0:
                raise Unsupported(f"{r.name}: recursive case applies at {r.var} = 0")
            rest = values[n - 1] * c.a if c.a else 0
            try:
                options.append(rest + evaluate_number(c.p, env))
            except EvalError as exc:
                raise Unsupported(f"{r.name}: {exc}") from exc
        if not options:
            raise Unsupported(f"{r.name}: no clause applies at {r.var} = {n}")
        values.append(pick(options))
    return values


def _symbolic_prefix(r: Recurrence, upto: int):
    """Symbolic T(0..upto-1) as Polys in the parameters."""
    values = []
    for n in range(upto):
        options = []
        for c in r.cases:
            if not c.applies(n):
                continue
            if c.a and n == 0:
                raise Unsupported(f"{r.name}: recursive case applies at {r.var} = 0")
            p = to_poly(c.p).substitute(r.var, Poly.const(n))
            options.append(values[n - 1].scale(c.a) + p if c.a else p)
        if not options:
            raise Unsupported(f"{r.name}: no clause applies at {r.var} = {n}")
        values.append(widen(options, r.bound))
    return values


# ---------------------------------------------------------------------------
# solving

def _particular(p_parts: dict, a: int) -> dict:
    """Polynomial q with q(n) - a*q(n-1) = p(n), as {degree: coeff Poly}."""
    deg = max(p_parts, default=0)
    q = {}
    for m in range(deg, -1, -1):
        acc = p_parts.get(m, Poly())
        for j in range(m + 1, deg + 1):
            acc = acc + q[j].scale(a * comb(j, m) * (-1) ** (j - m))
        q[m] = acc.scale(Fraction(1, 1 - a))
    return q


def _poly_in(parts: dict, var: str) -> Poly:
    out = Poly()
    for k, c in parts.items():
        out = out + c * Poly.atom(Var(var)) ** k
    return out


def _tail(r: Recurrence, k0: int):
    """The single (widened) case in force for n >= k0."""
    tail = [c for c in r.cases if c.hi == math.inf]
    if not tail:
        raise Unsupported(f"{r.name}: no clause covers large {r.var}")
    ps = [to_poly(c.p) for c in tail]
    rec = [c for c in tail if c.a]
    if not rec:
        return 0, widen(ps, r.bound)
    if len(rec) < len(tail):
        # a base case competes with the recursive ones for every n: costs
        # are nonnegative, so the base cost can be added (upper) and the
        # recursive contribution dropped (lower)
        if r.bound == "lower":
            return 0, widen(ps, "lower")
        base = widen([p for p, c in zip(ps, tail) if not c.a], "upper")
        return max(c.a for c in rec), widen([to_poly(c.p) for c in rec], "upper") + base
    a = max(c.a for c in rec) if r.bound == "upper" else min(c.a for c in rec)
    return a, widen(ps, r.bound)


def _solve_tail(r: Recurrence, a: int, p: Poly, k0: int, prefix):
    n = r.var
    if any(n in free_vars(x) for x in p.atoms() if x != Var(n)):
        raise Unsupported(f"{r.name}: cost is not polynomial in {n}")
    if a == 0:
        return p, k0
    if k0 == 0:
        raise Unsupported(f"{r.name}: recursion on {n} has no base case")
    c = prefix[k0 - 1]
    if a == 1:
        idx = "@i"
        body = p.substitute(n, Poly.atom(Var(idx)))
        total = sum_closed_form(body, idx, Poly.const(k0), Poly.atom(Var(n)))
        if total is None:
            raise Unsupported(f"{r.name}: per-step cost of degree > 3 in {n}")
        return c + total, k0 - 1
    parts = p.coefficients_in(n)
    q_parts = _particular(parts, a)
    q = _poly_in(q_parts, n)
    q_start = q.substitute(n, Poly.const(k0 - 1))
    amp = (c - q_start).scale(Fraction(1, a ** (k0 - 1)))
    expo = Poly.atom(Power(Const(a), Var(n)))
    return amp * expo + q, k0 - 1


def _at(p: Poly, var: str, k: int) -> Poly:
    return to_poly(subst(p.to_expr(), {var: Const(k)}))


def _param_envs(params):
    combos = itertools.product(PARAM_SAMPLES, repeat=len(params))
    return [dict(zip(params, vals)) for vals in itertools.islice(combos, MAX_PARAM_COMBOS)]


def _validate(r: Recurrence, eff: Recurrence, closed: Expr, shifted: Expr, exact_from: int):
    """Check against unrolling; True when ``shifted`` matched exactly."""
    exact = True
    for env in _param_envs(r.params()):
        actual = unroll(r, UNROLL_CHECK, env)
        widened = unroll(eff, UNROLL_CHECK, env)
        for k in range(UNROLL_CHECK + 1):
            point = {**env, r.var: k}
            if k >= exact_from and evaluate_number(closed, point) != widened[k]:
                raise Unsupported(f"{r.name}: closed form disagrees with unrolling at {r.var} = {k}")
            v = evaluate_number(shifted, point)
            if not (v >= actual[k] if r.bound == "upper" else v <= actual[k]):
                raise Unsupported(f"{r.name}: closed form is not a {r.bound} bound at {r.var} = {k}")
            exact = exact and v == actual[k]
    return exact


def solve_recurrence(r: Recurrence) -> ClosedForm:
    """Closed form of ``r``; raises :class:`Unsupported` otherwise."""
    if not r.cases:
        raise Unsupported(f"{r.name}: no cases")
    k0 = _tail_start(r)
    prefix = _symbolic_prefix(r, k0)
    a, p = _tail(r, k0)
    closed, exact_from = _solve_tail(r, a, p, k0, prefix)
    # below the range where the closed form is exact, shift it by the
    # largest constant gap to the true values
    shift = Fraction(0)
    for k in range(exact_from):
        gap = prefix[k] - _at(closed, r.var, k)
        if not gap.is_const():
            raise Unsupported(f"{r.name}: base values do not fit the closed form")
        g = gap.const_value()
        shift = max(shift, g) if r.bound == "upper" else min(shift, g)
    eff_cases = [Case(k, k, 0, v.to_expr()) for k, v in enumerate(prefix)]
    eff_cases.append(Case(k0, math.inf, a, p.to_expr()))
    eff = Recurrence(r.name, r.bound, r.var, eff_cases)
    shifted = closed + Poly.const(shift)
    exact = _validate(r, eff, closed.to_expr(), shifted.to_expr(), exact_from)
    return ClosedForm(shifted.to_expr(), r.var, exact)
