"""Checking inferred cost intervals against resource assertions.

For an assertion with interval ``[SL, SU]`` and an inferred interval
``[IL, IU]`` a size ``n`` is

* ``checked`` when ``SL(n) <= IL(n)`` and ``IU(n) <= SU(n)``,
* ``false``   when ``IU(n) < SL(n)`` or ``SU(n) < IL(n)``,
* ``check``   otherwise, including wherever a comparison is undecided.

The verdict regions partition the assertion's size domain and become one
output assertion each.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass, field

from .analysis import ENERGY, STEPS, AnalysisResult, analyze_program
from .assertlang import (InternalAssertion, Status, TranslationError, XCAssertion,
                         from_internal, parse_internal, parse_pragma, print_internal,
                         print_pragma, to_internal)
from .assertlang.specfile import SpecFile
from .compare import Rel, compare_fns
from .compare.partition import DEFAULT_SCAN_LIMIT
from .compare.roots import DEFAULT_MAX_DEGREE
from .costfn import BoundFn, DomainSet, IntervalFn, free_vars
from .costfn.taylor import DEFAULT_ORDER
from .hcir.graph import Diagnostic
from .sizedtypes import Mode, Signatures


class VerificationInputError(ValueError):
    """An assertion that cannot be verified at all (unknown predicate,
    missing signature, bad translation)."""


@dataclass(frozen=True)
class Region:
    lo: int
    hi: float
    status: Status

    def __contains__(self, n):
        return self.lo <= n <= self.hi

    def __str__(self):
        hi = "inf" if self.hi == math.inf else str(int(self.hi))
        return f"[{self.lo},{hi}]:{self.status}"


@dataclass(frozen=True)
class VerificationOutcome:
    assertion: InternalAssertion
    var: str | None
    verdicts: tuple
    diagnostics: tuple = ()
    inferred: IntervalFn | None = None
    source: XCAssertion | None = None

    @property
    def whole(self) -> Status | None:
        """The status when a single verdict covers the domain."""
        return self.verdicts[0].status if len(self.verdicts) == 1 else None

    def counts(self):
        out = {"checked": 0, "false": 0, "check": 0}
        for r in self.verdicts:
            out[str(r.status)] += 1
        return out


def _merge(regions):
    out = []
    for r in regions:
        if out and out[-1].status is r.status and out[-1].hi + 1 == r.lo:
            out[-1] = Region(out[-1].lo, r.hi, r.status)
        else:
            out.append(r)
    return tuple(out)


def _whole(spec, var, status, diags, inferred=None, source=None):
    lo, hi = spec.size_precond.get(var) if var else (0, math.inf)
    return VerificationOutcome(spec, var, (Region(lo, hi, status),), tuple(diags),
                               inferred, source)


def _patterns_compatible(spec: InternalAssertion, sigs: Signatures | None):
    if sigs is None:
        return None
    sig = sigs.get(spec.key)
    if sig is None:
        return f"no signature for {spec.key}"
    for (name, t_spec, mode), arg in zip(spec.call_pattern, sig.args):
        if mode is not arg.mode:
            return f"{spec.key}: mode of {name} differs from the analyzed call pattern"
        if mode is Mode.IN and not sigs.subsumed(t_spec, arg.type_name):
            return f"{spec.key}: type {t_spec} of {name} is not subsumed by {arg.type_name}"
    return None


def check_assertion(inferred: IntervalFn, spec: InternalAssertion,
                    sigs: Signatures | None = None, max_degree=DEFAULT_MAX_DEGREE,
                    scan_limit=DEFAULT_SCAN_LIMIT, source=None) -> VerificationOutcome:
    """Verdict regions of ``spec`` against the inferred interval."""
    domain_vars = spec.size_precond.vars()
    exprs = (spec.lower, spec.upper, inferred.lower.expr, inferred.upper.expr)
    used = set()
    for e in exprs:
        used |= free_vars(e)
    var = sorted(used)[0] if len(used) == 1 else (domain_vars[0] if domain_vars else None)
    problem = _patterns_compatible(spec, sigs)
    if problem:
        return _whole(spec, var, Status.CHECK,
                      [Diagnostic("type-mismatch", problem)], inferred, source)
    if len(used) > 1:
        return _whole(spec, var, Status.CHECK, [Diagnostic(
            "multivariate", f"{spec.key}: bounds depend on several sizes "
            f"({', '.join(sorted(used))}); comparison is not attempted")], inferred, source)
    if var is not None and var not in domain_vars:
        return _whole(spec, var, Status.CHECK, [Diagnostic(
            "unknown-size", f"{spec.key}: {var} is not a measured argument")], inferred, source)
    name = var or "N"
    lo, hi = spec.size_precond.get(name) if var else (0, math.inf)
    dom = DomainSet(((name, lo, hi),))

    def fn(e):
        return BoundFn(e, (name,), dom)

    def cmp(a, b):
        return compare_fns(fn(a), fn(b), max_degree, scan_limit)

    s_lo, s_hi = spec.lower, spec.upper
    i_lo, i_hi = inferred.lower.expr, inferred.upper.expr
    parts = [cmp(s_lo, i_lo), cmp(i_hi, s_hi), cmp(i_hi, s_lo), cmp(s_hi, i_lo)]
    cuts = sorted({p.lo for part in parts for p in part})
    regions = []
    for a, b in zip(cuts, cuts[1:] + [None]):
        end = hi if b is None else b - 1
        r1, r2, r3, r4 = (part.relation_at(a) for part in parts)
        ok = r1 in (Rel.LT, Rel.EQ) and r2 in (Rel.LT, Rel.EQ)
        bad = r3 is Rel.LT or r4 is Rel.LT
        status = Status.CHECKED if ok else Status.FALSE_ if bad else Status.CHECK
        regions.append(Region(a, end, status))
    return VerificationOutcome(spec, var, _merge(regions), (), inferred, source)


def split_outcome(o: VerificationOutcome):
    """One internal assertion per verdict region, status set."""
    if o.var is None or len(o.verdicts) == 1:
        r = o.verdicts[0]
        return [o.assertion.with_status(r.status)]
    out = []
    for r in o.verdicts:
        dom = o.assertion.size_precond.restrict(o.var, r.lo, r.hi)
        out.append(o.assertion.with_domain(dom).with_status(r.status))
    return out


def split_to_assertions(o: VerificationOutcome):
    """The result pragmas of an energy outcome.  A whole-domain ``check``
    gives back the original assertion unchanged."""
    if o.whole is Status.CHECK and o.source is not None:
        return [o.source]
    return [from_internal(ia) for ia in split_outcome(o)]


def render_assertion(ia: InternalAssertion) -> str:
    """Pragma text for energy assertions, ``:- pred`` text otherwise."""
    if ia.resource == ENERGY:
        try:
            return print_pragma(from_internal(ia))
        except TranslationError:
            pass
    return print_internal(ia)


def render_outcome(o: VerificationOutcome):
    if o.whole is Status.CHECK and o.source is not None:
        return [print_pragma(o.source)]
    return [render_assertion(ia) for ia in split_outcome(o)]


# ---------------------------------------------------------------------------
# whole programs

@dataclass(frozen=True)
class SpecEntry:
    """An input assertion, its source form (if a pragma) and where it came from."""

    assertion: InternalAssertion
    source: XCAssertion | None = None
    item: object = None


@dataclass
class Report:
    outcomes: list = field(default_factory=list)
    entries: list = field(default_factory=list)
    checked_entries: list = field(default_factory=list)
    diagnostics: list = field(default_factory=list)
    analyses: dict = field(default_factory=dict)

    def counts(self):
        out = {"checked": 0, "false": 0, "check": 0}
        for o in self.outcomes:
            for k, v in o.counts().items():
                out[k] += v
        return out

    @property
    def all_verified(self):
        return all(o.whole is Status.CHECKED for o in self.outcomes)

    @property
    def any_false(self):
        return any(r.status is Status.FALSE_ for o in self.outcomes for r in o.verdicts)

    @property
    def any_check(self):
        return any(r.status is Status.CHECK for o in self.outcomes for r in o.verdicts)


def entries_from_spec(spec: SpecFile, sigs: Signatures):
    """Translate every assertion of a spec file; raises
    :class:`VerificationInputError` for unknown predicates."""
    out = []
    for item in spec.items:
        if item.kind == "pragma":
            xc = parse_pragma(item.text)
            candidates = [s for s in sigs.sigs.values()
                          if s.name == xc.name and s.arity == len(xc.args) + 1]
            if len(candidates) != 1:
                raise VerificationInputError(
                    f"{spec.path}:{item.first_line}: no signature for {xc.name}/{len(xc.args) + 1}")
            try:
                ia = to_internal(xc, candidates[0])
            except TranslationError as exc:
                raise VerificationInputError(f"{spec.path}:{item.first_line}: {exc}") from exc
            out.append(SpecEntry(ia, xc, item))
        else:
            m = re.search(r"pred\s+([a-z][A-Za-z0-9_]*)\s*\(([^)]*)\)", item.text)
            if not m:
                raise VerificationInputError(f"{spec.path}:{item.first_line}: not a pred assertion")
            arity = len([a for a in m.group(2).split(",") if a.strip()])
            sig = sigs.get(f"{m.group(1)}/{arity}")
            if sig is None:
                raise VerificationInputError(
                    f"{spec.path}:{item.first_line}: no signature for {m.group(1)}/{arity}")
            try:
                ia = parse_internal(item.text, sig)
            except TranslationError as exc:
                raise VerificationInputError(f"{spec.path}:{item.first_line}: {exc}") from exc
            out.append(SpecEntry(ia, None, item))
    return out


def _trusted(entries, resource, sigs):
    out = {}
    for e in entries:
        ia = e.assertion
        if ia.status is not Status.TRUST or ia.resource != resource:
            continue
        sig = sigs.get(ia.key) if sigs else None
        vars = tuple(sig.size_vars()) if sig else tuple(ia.size_precond.vars())
        dom = DomainSet.full(vars).intersect(ia.size_precond)
        out[ia.key] = IntervalFn(BoundFn(ia.lower, vars, dom), BoundFn(ia.upper, vars, dom))
    return out


_EXPECTED = {Status.CHECKED: Status.CHECKED, Status.TRUE_: Status.CHECKED,
             Status.FALSE_: Status.FALSE_}


def verify_program(program, sigs: Signatures, model, entries,
                   max_degree=DEFAULT_MAX_DEGREE, scan_limit=DEFAULT_SCAN_LIMIT,
                   taylor_order=DEFAULT_ORDER) -> Report:
    """Analyze once per resource, then check every non-trust assertion."""
    if taylor_order < 1:
        raise ValueError("taylor order must be at least 1")
    entries = [e if isinstance(e, SpecEntry) else SpecEntry(e) for e in entries]
    report = Report(entries=entries)
    for e in entries:
        if not program.defines(e.assertion.key) and e.assertion.status is not Status.TRUST:
            raise VerificationInputError(f"assertion for unknown predicate {e.assertion.key}")
    resources = sorted({e.assertion.resource for e in entries} or {ENERGY})
    for res in resources:
        if res not in (ENERGY, STEPS):
            raise VerificationInputError(f"unknown resource {res}")
        if res == ENERGY and model is None:
            if any(e.assertion.resource == ENERGY for e in entries):
                raise VerificationInputError("energy assertions need an energy model")
            continue
        trusted = _trusted(entries, res, sigs)
        report.analyses[res] = analyze_program(program, sigs, model, res, trusted)
        for key in trusted:
            report.diagnostics.append(Diagnostic(
                "trusted", f"{res} of {key} is taken from a trust assertion"))
    for res, an in report.analyses.items():
        for d in an.diagnostics:
            if d not in report.diagnostics:
                report.diagnostics.append(d)
    for e in entries:
        ia = e.assertion
        if ia.status is Status.TRUST:
            continue
        an: AnalysisResult = report.analyses[ia.resource]
        inferred = an.cost(ia.key)
        source = e.source if ia.status is Status.CHECK else None
        o = check_assertion(inferred, ia.with_status(Status.CHECK), sigs, max_degree,
                            scan_limit, source)
        want = _EXPECTED.get(ia.status)
        if want is not None and o.whole is not want:
            o = VerificationOutcome(o.assertion, o.var, o.verdicts, o.diagnostics + (Diagnostic(
                "reverify", f"{ia.key}: input status {ia.status} does not hold on the "
                "whole domain"),), o.inferred, o.source)
        report.outcomes.append(o)
        report.checked_entries.append(e)
    return report
