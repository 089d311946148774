"""Internal (predicate-level) resource assertions and the translation from
and to ``#pragma`` assertions.

Internal assertions also have a text form, used in spec files for
resources other than energy::

    :- check pred fact(N, F) : (1 <= N) + resource(steps, N + 1, N + 1).
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from fractions import Fraction

from ..costfn.evaluate import EvalError, evaluate_number
from ..costfn.expr import Const, Expr, Inf, array_refs, free_vars, rename, render
from ..costfn.poly import DomainSet
from ..sizedtypes import Mode, PredicateSignature
from .syntax import (CostBounds, Precond, PragmaSyntaxError, Status, XCAssertion,
                     _STATUS_WORDS, _conditions, _parse_slice, _single_ident,
                     _tokenize, parse_expr)

ENERGY = "energy"


class TranslationError(ValueError):
    pass


@dataclass(frozen=True)
class InternalAssertion:
    """``pred`` with call pattern, size precondition and resource interval.

    ``upper`` may be ``Inf()`` (no upper bound).  ``scope_names`` are the
    identifiers used at the source level, one per non-output argument."""

    key: str
    call_pattern: tuple
    size_precond: DomainSet
    resource: str
    lower: Expr
    upper: Expr
    status: Status = Status.CHECK
    scope_names: tuple = ()
    origin: str = field(default="pragma", compare=False)

    def __post_init__(self):
        object.__setattr__(self, "call_pattern", tuple(self.call_pattern))
        object.__setattr__(self, "scope_names", tuple(self.scope_names))
        outs = [c for c in self.call_pattern if c[2] is Mode.OUT]
        if len(outs) != 1:
            raise TranslationError(f"{self.key}: exactly one output argument expected")

    @property
    def name(self):
        return self.key.rpartition("/")[0]

    def size_vars(self):
        return self.size_precond.vars()

    def with_status(self, status):
        return InternalAssertion(self.key, self.call_pattern, self.size_precond,
                                 self.resource, self.lower, self.upper, status,
                                 self.scope_names, self.origin)

    def with_domain(self, domain: DomainSet):
        return InternalAssertion(self.key, self.call_pattern, domain, self.resource,
                                 self.lower, self.upper, self.status, self.scope_names,
                                 self.origin)


def _const_bound(e: Expr, what: str) -> Fraction:
    try:
        v = evaluate_number(e, {})
    except EvalError as exc:
        raise TranslationError(f"{what} is not a constant: {render(e)}") from exc
    if isinstance(v, float):
        raise TranslationError(f"{what} is infinite")
    return v


def _precond_conds(precond: Precond | None):
    if precond is None:
        return []
    out = []
    if precond.lower is not None:
        out.append(("lower", precond.lower_id, precond.lower))
    if precond.upper is not None:
        out.append(("upper", precond.upper_id, precond.upper))
    return out


def _domain(conds, size_vars, to_size) -> DomainSet:
    ranges = {v: [0, math.inf] for v in size_vars}
    for kind, ident, e in conds:
        v = to_size(ident)
        bound = _const_bound(e, "precondition bound")
        if kind == "lower":
            ranges[v][0] = max(ranges[v][0], math.ceil(bound))
        else:
            ranges[v][1] = min(ranges[v][1], math.floor(bound))
    for v, (lo, hi) in ranges.items():
        if lo > hi:
            raise TranslationError(f"precondition on {v} is unsatisfiable")
    return DomainSet(tuple((v, lo, hi) for v, (lo, hi) in ranges.items()))


def to_internal(a: XCAssertion, sig: PredicateSignature) -> InternalAssertion:
    """Predicate-level form of a pragma: the output argument is added, sizes
    replace scope identifiers, missing bounds become 0 and +inf."""
    ins = [x for x in sig.args if x.mode is Mode.IN]
    outs = [x for x in sig.args if x.mode is Mode.OUT]
    if len(outs) != 1 or len(ins) != len(a.args) or sig.arity != len(a.args) + 1:
        raise TranslationError(
            f"scope {a.name}/{len(a.args)} does not match signature {sig.key}")
    names = {src: arg.name for src, arg in zip(a.args, ins)}
    measured = {arg.name for arg in ins if arg.metric is not None}

    def to_size(ident):
        v = names[ident]
        if v not in measured:
            raise TranslationError(f"argument {ident} has no size metric")
        return v

    lower = a.bounds.lower if a.bounds.lower is not None else Const(0)
    upper = a.bounds.upper if a.bounds.upper is not None else Inf()
    for e in (lower, upper):
        bad = free_vars(e) - set(a.args)
        if bad:
            raise TranslationError("cost bound uses unknown identifier " + ", ".join(sorted(bad)))
        for v in free_vars(e):
            to_size(v)
        bad = array_refs(e) - set(a.args)
        if bad:
            raise TranslationError("min/max of unknown identifier " + ", ".join(sorted(bad)))
    lower, upper = rename(lower, names), rename(upper, names)
    domain = _domain(_precond_conds(a.precond), [x.name for x in ins if x.metric is not None], to_size)
    pattern = tuple((x.name, x.type_name, x.mode) for x in sig.args)
    return InternalAssertion(sig.key, pattern, domain, ENERGY, lower, upper, a.status,
                             tuple(a.args))


def domain_precond(domain: DomainSet, back) -> Precond | None:
    """Render the non-default parts of a size domain as a pragma precondition."""
    lows = [(v, lo) for v, lo, hi in domain.ranges if lo > 0]
    highs = [(v, hi) for v, lo, hi in domain.ranges if hi != math.inf]
    if len(lows) > 1 or len(highs) > 1:
        raise TranslationError("precondition over several sizes cannot be written as a pragma")
    if not lows and not highs:
        return None
    lower = lower_id = upper = upper_id = None
    if lows:
        lower_id, lower = back[lows[0][0]], Const(lows[0][1])
    if highs:
        upper_id, upper = back[highs[0][0]], Const(highs[0][1])
    return Precond(lower, lower_id, upper_id, upper)


def from_internal(ia: InternalAssertion, sig: PredicateSignature | None = None) -> XCAssertion:
    if ia.resource != ENERGY:
        raise TranslationError(f"resource {ia.resource} has no pragma form")
    ins = [c[0] for c in ia.call_pattern if c[2] is Mode.IN]
    scope = ia.scope_names or tuple(ins)
    back = dict(zip(ins, scope))
    lower = None if ia.lower == Const(0) else rename(ia.lower, back)
    upper = None if isinstance(ia.upper, Inf) else rename(ia.upper, back)
    if lower is None and upper is None:
        lower = Const(0)
    precond = domain_precond(ia.size_precond, back)
    return XCAssertion(ia.status, ia.name, scope, CostBounds(lower, upper), precond)


# ---------------------------------------------------------------------------
# text form of internal assertions

_PRED_RE = re.compile(
    r":-\s*(?:(check|trust|true|checked|false)\s+)?pred\s+([a-z][A-Za-z0-9_]*)\s*"
    r"\(([^)]*)\)\s*(?::(.*))?\+\s*resource\s*\((.*)\)\s*\.?\s*\Z", re.S)


def _split_commas(text):
    parts, depth, cur = [], 0, ""
    for ch in text:
        depth += ch == "("
        depth -= ch == ")"
        if ch == "," and depth == 0:
            parts.append(cur)
            cur = ""
        else:
            cur += ch
    parts.append(cur)
    return [p.strip() for p in parts]


def parse_internal(text: str, sig: PredicateSignature) -> InternalAssertion:
    m = _PRED_RE.match(text.strip())
    if not m:
        raise PragmaSyntaxError("expected ':- <status> pred p(...) + resource(r, lo, hi).'")
    status = _STATUS_WORDS[m.group(1)] if m.group(1) else Status.CHECK
    name = m.group(2)
    args = tuple(x.strip() for x in m.group(3).split(",") if x.strip())
    if f"{name}/{len(args)}" != sig.key:
        raise TranslationError(f"{name}/{len(args)} does not match signature {sig.key}")
    res = _split_commas(m.group(5))
    if len(res) != 3:
        raise PragmaSyntaxError("resource(...) takes a name and two bounds")
    resource = res[0]
    lower = parse_expr(res[1])
    upper = Inf() if res[2] in ("inf", "+inf") else parse_expr(res[2])
    names = {src: arg.name for src, arg in zip(args, sig.args)}
    measured = {a.name for a in sig.inputs() if a.metric is not None}
    for e in (lower, upper):
        for v in free_vars(e):
            if v not in names or names[v] not in measured:
                raise TranslationError(f"bound uses {v}, which is not a measured input")
    conds = []
    if m.group(4) and m.group(4).strip():
        toks = _tokenize(m.group(4))
        for left, right, col in _conditions(toks, "precondition", len(text)):
            l_id, r_id = _single_ident(left), _single_ident(right)
            if r_id in names and l_id not in names:
                conds.append(("lower", r_id, _parse_slice(left, col)))
            elif l_id in names and r_id not in names:
                conds.append(("upper", l_id, _parse_slice(right, col)))
            else:
                raise PragmaSyntaxError("precondition must bound one argument by a constant", col)

    def to_size(ident):
        if names[ident] not in measured:
            raise TranslationError(f"argument {ident} has no size metric")
        return names[ident]

    domain = _domain(conds, sorted(measured, key=sig.index), to_size)
    pattern = tuple((a.name, a.type_name, a.mode) for a in sig.args)
    ins = [src for src, a in zip(args, sig.args) if a.mode is Mode.IN]
    return InternalAssertion(sig.key, pattern, domain, resource,
                             rename(lower, names), rename(upper, names), status,
                             tuple(ins), origin="pred")


def print_internal(ia: InternalAssertion) -> str:
    args = [c[0] for c in ia.call_pattern]
    conds = []
    for v, lo, hi in ia.size_precond.ranges:
        if lo > 0:
            conds.append(f"{lo} <= {v}")
        if hi != math.inf:
            conds.append(f"{v} <= {hi}")
    pre = f" : ({' && '.join(conds)})" if conds else ""
    upper = "inf" if isinstance(ia.upper, Inf) else render(ia.upper)
    return (f":- {ia.status} pred {ia.name}({', '.join(args)}){pre}"
            f" + resource({ia.resource}, {render(ia.lower)}, {upper}).")
