"""Bottom-up inference of size relations and cost intervals.

Predicates are processed callee-first over the strongly connected
components of the call graph.  A non-recursive predicate's cost is the
(widened) combination of its clause costs; a directly recursive one yields
a recurrence per bound, solved by :mod:`.recurrence`.  Whatever falls
outside the supported shapes gets the interval ``[0, +inf)``.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

from ..costfn.evaluate import EvalError, evaluate_number
from ..costfn.expr import Add, Const, Expr, Inf, Sub, Var, free_vars, render, subst
from ..costfn.poly import BoundFn, DomainSet, IntervalFn, Poly, normalize, to_poly
from ..costmodel import EnergyModel, MissingCost, lookup
from ..hcir.graph import Diagnostic, call_graph_sccs
from ..hcir.terms import Builtin, Call, Clause, Program
from ..sizedtypes import Mode, PredicateSignature, Signatures
from .recurrence import Case, Recurrence, Unsupported, solve_recurrence, widen
from .sizes import UNKNOWN, ClauseSizes, SizeBound, exclusive, leading_guards

STEPS = "steps"
ENERGY = "energy"
MONOTONE_GRID = 20
BOUNDS = ("lower", "upper")


def trivial(vars=()) -> IntervalFn:
    vars = tuple(vars)
    dom = DomainSet.full(vars)
    return IntervalFn(BoundFn(Const(0), vars, dom), BoundFn(Inf(), vars, dom))


@dataclass(frozen=True)
class PredResult:
    key: str
    vars: tuple
    cost: IntervalFn
    sizes: dict = field(default_factory=dict)
    deterministic: bool = True
    supported: bool = True
    trusted: bool = False
    recursion_var: str | None = None


@dataclass
class AnalysisResult:
    resource: str
    preds: dict = field(default_factory=dict)
    diagnostics: list = field(default_factory=list)
    recurrences: list = field(default_factory=list)

    def __getitem__(self, key) -> PredResult:
        return self.preds[key]

    def __contains__(self, key):
        return key in self.preds

    def cost(self, key) -> IntervalFn:
        return self.preds[key].cost


@dataclass
class _ClauseInfo:
    clause: Clause
    sizes: ClauseSizes
    cost: dict            # bound -> Expr (recursive calls excluded)
    rec_calls: list       # per recursive call: {size var: SizeBound}
    out_sizes: dict       # output arg name -> SizeBound


def _placeholder(bound, name):
    return Var(f"@{bound}.{name}")


class Analyzer:
    def __init__(self, program: Program, sigs: Signatures | None = None,
                 model: EnergyModel | None = None, resource: str = ENERGY,
                 trusted: dict | None = None):
        if resource not in (STEPS, ENERGY):
            raise ValueError(f"unknown resource {resource!r}")
        self.program = program
        self.sigs = sigs or Signatures()
        self.model = model
        self.resource = resource
        self.trusted = dict(trusted or {})
        self.result = AnalysisResult(resource)

    def note(self, code, message, pos=None):
        d = Diagnostic(code, message, pos)
        if d not in self.result.diagnostics:
            self.result.diagnostics.append(d)

    def sig(self, key) -> PredicateSignature | None:
        return self.sigs.get(key)

    def vars_of(self, key):
        s = self.sig(key)
        return tuple(s.size_vars()) if s else ()

    # -- driver ------------------------------------------------------------

    def run(self) -> AnalysisResult:
        for scc in call_graph_sccs(self.program):
            if len(scc.preds) > 1:
                for key in scc.preds:
                    self.note("unsupported", f"{key}: mutual recursion is not supported")
                    self._store(PredResult(key, self.vars_of(key), trivial(self.vars_of(key)),
                                           {}, True, False))
                continue
            (key,) = scc.preds
            self._store(self._analyze(key, scc.recursive))
        for key, fn in self.trusted.items():
            if key not in self.result.preds:
                self.result.preds[key] = PredResult(key, tuple(fn.lower.vars), fn, {},
                                                    True, True, True)
        return self.result

    def _store(self, r: PredResult):
        if r.key in self.trusted:
            fn = self.trusted[r.key]
            r = PredResult(r.key, r.vars, fn, r.sizes, r.deterministic, True, True,
                           r.recursion_var)
        self.result.preds[r.key] = r

    # -- clause level --------------------------------------------------------

    def _callee_fn(self, key):
        if key in self.trusted:
            return self.trusted[key]
        if key in self.result.preds:
            return self.result.preds[key].cost
        return None

    def _instantiate(self, e: Expr, callee_vars, actual: dict, bound: str) -> Expr:
        mapping = {}
        for v in callee_vars:
            if v not in free_vars(e):
                continue
            sb = actual.get(v, UNKNOWN)
            x = sb.hi if bound == "upper" else sb.lo
            if isinstance(x, Inf):
                return Inf()
            mapping[v] = x
        return normalize(subst(e, mapping))

    def _actual_sizes(self, cs: ClauseSizes, lit: Call):
        s = self.sig(lit.key)
        if s is None:
            return {}
        out = {}
        for t, a in zip(lit.args, s.args):
            if a.mode is Mode.IN and a.metric is not None:
                out[a.name] = cs.size(t) or UNKNOWN
        return out

    def _literal_cost(self, lit, cs: ClauseSizes, bound: str) -> Expr:
        if isinstance(lit, Builtin):
            if self.resource == STEPS or self.model is None:
                return Const(0)
            return Const(lookup(self.model, lit, bound))
        fn = self._callee_fn(lit.key)
        if fn is not None:
            bf = fn.upper if bound == "upper" else fn.lower
            return self._instantiate(bf.expr, bf.vars, self._actual_sizes(cs, lit), bound)
        if self.program.defines(lit.key):
            return Inf() if bound == "upper" else Const(0)
        if self.resource == STEPS:
            return Const(0)
        try:
            if self.model is None:
                raise MissingCost(lit.key)
            return Const(lookup(self.model, lit, bound))
        except MissingCost:
            self.note("missing-cost", f"no energy cost for {lit.key}", lit.pos)
            return Inf() if bound == "upper" else Const(0)

    def _bind_outputs(self, cs: ClauseSizes, lit: Call, recursive: bool):
        s = self.sig(lit.key)
        if s is None:
            return
        actual = self._actual_sizes(cs, lit)
        res = self.result.preds.get(lit.key)
        for t, a in zip(lit.args, s.args):
            if a.mode is not Mode.OUT or a.metric is None:
                continue
            if recursive:
                sb = SizeBound(_placeholder("lower", a.name), _placeholder("upper", a.name))
            elif res is not None and a.name in res.sizes:
                rel = res.sizes[a.name]
                sb = SizeBound(self._instantiate(rel.lo, res.vars, actual, "lower"),
                               self._instantiate(rel.hi, res.vars, actual, "upper"))
            else:
                sb = UNKNOWN
            cs.bind(t, sb)

    def _clause(self, c: Clause, sig) -> _ClauseInfo:
        cs = ClauseSizes(c, sig)
        for lit in leading_guards(c):
            cs.guard(lit)
        cost = {b: [Const(1 if self.resource == STEPS else 0)] for b in BOUNDS}
        rec_calls = []
        for lit in c.body:
            if isinstance(lit, Builtin):
                cs.builtin(lit)
            recursive = isinstance(lit, Call) and lit.key == c.key
            if recursive:
                rec_calls.append(self._actual_sizes(cs, lit))
            else:
                for b in BOUNDS:
                    cost[b].append(self._literal_cost(lit, cs, b))
            if isinstance(lit, Call):
                self._bind_outputs(cs, lit, recursive)
        total = {}
        for b in BOUNDS:
            acc = cost[b][0]
            for x in cost[b][1:]:
                acc = Add(acc, x)
            total[b] = normalize(acc)
        outs = {}
        if sig is not None:
            for t, a in zip(c.params, sig.args):
                if a.mode is Mode.OUT and a.metric is not None:
                    outs[a.name] = cs.size(t) or UNKNOWN
        return _ClauseInfo(c, cs, total, rec_calls, outs)

    # -- predicate level -----------------------------------------------------

    def _analyze(self, key, recursive) -> PredResult:
        sig = self.sig(key)
        vars = self.vars_of(key)
        infos = [self._clause(c, sig) for c in self.program.clauses(key)]
        infos = [i for i in infos if i.sizes.feasible]
        det = all(exclusive(a.clause, a.sizes, b.clause, b.sizes)
                  for a, b in itertools.combinations(infos, 2))
        if not det:
            self.note("nondeterminate",
                      f"{key}: clauses are not mutually exclusive; "
                      "the predicate is not analyzed")
            return PredResult(key, vars, trivial(vars), {}, False, False)
        try:
            if recursive:
                cost, sizes, rv = self._recursive(key, vars, infos)
            else:
                cost, sizes, rv = self._flat(key, vars, infos), self._flat_sizes(infos), None
            self._check_bounds(key, vars, cost)
        except Unsupported as exc:
            self.note("unsupported", str(exc))
            return PredResult(key, vars, trivial(vars), {}, True, False)
        return PredResult(key, vars, cost, sizes, True, True, False, rv)

    def _interval(self, vars, lower: Expr, upper: Expr) -> IntervalFn:
        dom = DomainSet.full(vars)
        for e in (lower, upper):
            extra = free_vars(e) - set(vars)
            if extra:
                raise Unsupported("bound mentions unknown sizes " + ", ".join(sorted(extra)))
        return IntervalFn(BoundFn(lower, vars, dom), BoundFn(upper, vars, dom))

    def _combine(self, exprs, bound) -> Expr:
        if bound == "upper" and any(isinstance(e, Inf) for e in exprs):
            return Inf()
        return widen([to_poly(e) for e in exprs], bound).to_expr()

    def _flat(self, key, vars, infos) -> IntervalFn:
        if not infos:
            raise Unsupported(f"{key}: no clause can succeed")
        lo = self._combine([i.cost["lower"] for i in infos], "lower")
        hi = self._combine([i.cost["upper"] for i in infos], "upper")
        return self._interval(vars, lo, hi)

    def _flat_sizes(self, infos):
        out = {}
        if not infos:
            return out
        for name in infos[0].out_sizes:
            sbs = [i.out_sizes.get(name, UNKNOWN) for i in infos]
            try:
                lo = self._combine([s.lo for s in sbs], "lower")
                hi = self._combine([s.hi for s in sbs], "upper")
            except Unsupported:
                continue
            if free_vars(lo) | free_vars(hi) <= set(infos[0].sizes.sig.size_vars()):
                out[name] = SizeBound(lo, hi)
        return out

    def _recursion_var(self, key, vars, infos):
        decreasing = set()
        for info in infos:
            for call in info.rec_calls:
                for v in vars:
                    sb = call.get(v)
                    if sb is None or not sb.is_exact:
                        raise Unsupported(f"{key}: size of {v} in the recursive call is unknown")
                    d = to_poly(Sub(Var(v), sb.lo))
                    if not d.is_const():
                        raise Unsupported(f"{key}: {v} changes by a non-constant amount")
                    step = d.const_value()
                    if step == 1:
                        decreasing.add(v)
                    elif step != 0:
                        raise Unsupported(f"{key}: {v} changes by {step} across the recursion")
        if len(decreasing) != 1:
            raise Unsupported(f"{key}: no unique size decreases by one across the recursion")
        (n,) = decreasing
        for info in infos:
            for call in info.rec_calls:
                if to_poly(Sub(Var(n), call[n].lo)) != Poly.const(1):
                    raise Unsupported(f"{key}: recursive calls disagree on the step of {n}")
        return n

    def _cases(self, key, n, infos, pick):
        cases = []
        for info in infos:
            lo, hi = info.sizes.guards.get(n, (0, math.inf))
            a, p = pick(info)
            cases.append(Case(lo, hi, a, p))
        return cases

    def _split(self, e: Expr, ph: Expr, what):
        """e = a*ph + p with a nonnegative integer constant."""
        if isinstance(e, Inf):
            raise Unsupported(f"{what} is unbounded")
        poly = to_poly(e)
        parts = poly.coefficients_in(ph.name)
        if set(parts) - {0, 1}:
            raise Unsupported(f"{what} is not linear in the recursive result")
        a = parts.get(1, Poly())
        if not a.is_const() or a.const_value() < 0 or a.const_value().denominator != 1:
            raise Unsupported(f"{what} scales the recursive result by a non-constant")
        rest = parts.get(0, Poly())
        if any(x.name.startswith("@") for x in rest.atoms() if isinstance(x, Var)):
            raise Unsupported(f"{what} depends on another recursive output")
        return int(a.const_value()), rest.to_expr()

    def _recursive(self, key, vars, infos):
        sig = self.sig(key)
        if not infos:
            raise Unsupported(f"{key}: no clause can succeed")
        n = self._recursion_var(key, vars, infos)
        # output sizes first: later costs may depend on them
        sizes, back = {}, {}
        step_back = {n: Sub(Var(n), Const(1))}
        for name in (infos[0].out_sizes if sig else {}):
            try:
                sb = {}
                for b in BOUNDS:
                    ph = _placeholder(b, name)

                    def pick(info, b=b, ph=ph):
                        s = info.out_sizes.get(name, UNKNOWN)
                        return self._split(s.hi if b == "upper" else s.lo, ph,
                                           f"{key}: size of {name}")
                    r = Recurrence(f"{key}:{name}", b, n, self._cases(key, n, infos, pick))
                    self.result.recurrences.append(r)
                    sb[b] = solve_recurrence(r).expr
                sizes[name] = SizeBound(sb["lower"], sb["upper"])
            except Unsupported as exc:
                self.note("unsupported", f"size of {name}: {exc}")
                sizes[name] = UNKNOWN
            for b, e in (("lower", sizes[name].lo), ("upper", sizes[name].hi)):
                back[_placeholder(b, name).name] = e if isinstance(e, Inf) else subst(e, step_back)
        bounds = {}
        for b in BOUNDS:
            def pick(info, b=b):
                e = info.cost[b]
                mapping = {k: v for k, v in back.items() if k in free_vars(e)}
                if any(isinstance(v, Inf) for v in mapping.values()):
                    raise Unsupported(f"{key}: cost depends on an unbounded size")
                e = normalize(subst(e, mapping))
                if isinstance(e, Inf):
                    raise Unsupported(f"{key}: a clause has unbounded {b} cost")
                return len(info.rec_calls), e
            r = Recurrence(key, b, n, self._cases(key, n, infos, pick))
            self.result.recurrences.append(r)
            try:
                bounds[b] = solve_recurrence(r).expr
            except Unsupported as exc:
                if b == "lower":
                    self.note("unsupported", f"{key} lower bound: {exc}")
                    bounds[b] = Const(0)
                else:
                    raise
        sizes = {k: v for k, v in sizes.items() if v is not UNKNOWN}
        return self._interval(vars, bounds["lower"], bounds["upper"]), sizes, n

    # -- sanity checks -------------------------------------------------------

    def _check_bounds(self, key, vars, fn: IntervalFn):
        """Sampled monotonicity of both bounds and lower <= upper."""
        others = [0, 5]
        points = []
        if not vars:
            points = [{}]
        for v in vars:
            rest = [w for w in vars if w != v]
            for combo in itertools.product(others, repeat=len(rest)):
                base = dict(zip(rest, combo))
                points.extend({**base, v: k} for k in range(MONOTONE_GRID + 1))
        try:
            for bf in (fn.lower, fn.upper):
                if isinstance(bf.expr, Inf):
                    continue
                for v in vars:
                    rest = [w for w in vars if w != v]
                    for combo in itertools.product(others, repeat=len(rest)):
                        base = dict(zip(rest, combo))
                        prev = None
                        for k in range(MONOTONE_GRID + 1):
                            cur = evaluate_number(bf.expr, {**base, v: k})
                            if prev is not None and cur < prev:
                                raise Unsupported(
                                    f"{key}: inferred bound {render(bf.expr)} is not monotone in {v}")
                            prev = cur
            for pt in points:
                lo = evaluate_number(fn.lower.expr, pt)
                hi = evaluate_number(fn.upper.expr, pt)
                if lo > hi:
                    raise Unsupported(f"{key}: inferred lower bound exceeds the upper bound")
        except EvalError as exc:
            raise Unsupported(f"{key}: {exc}") from exc


def analyze_program(program: Program, sigs: Signatures | None = None,
                    model: EnergyModel | None = None, resource: str = ENERGY,
                    trusted: dict | None = None) -> AnalysisResult:
    """Infer size relations and cost intervals for every predicate.

    ``trusted`` maps predicate keys to intervals that replace (or supply)
    the analysis result for that predicate."""
    return Analyzer(program, sigs, model, resource, trusted).run()
