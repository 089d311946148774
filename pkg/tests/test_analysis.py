import json
import math
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from conftest import fixture_text
from oracles import unroll_linear

from enverif.analysis import (Case, Recurrence, Unsupported, analyze_program,
                              solve_recurrence, unroll)
from enverif.assertlang import parse_expr
from enverif.costfn import Inf, Var, evaluate, normalize
from enverif.costmodel import load_model
from enverif.hcir import Int, Var as HVar, make_list, measure, parse_program
from enverif.sizedtypes import parse_signatures


def same(e, text):
    return normalize(e) == normalize(parse_expr(text))


def int_list(n):
    return make_list([Int(i) for i in range(n)])


# -- fixtures ---------------------------------------------------------------

def test_append_steps_and_output_size(programs, list_sigs):
    r = analyze_program(programs["append"], list_sigs, None, "steps")
    pr = r.preds["append/3"]
    assert same(pr.cost.lower.expr, "A + 1") and same(pr.cost.upper.expr, "A + 1")
    c = pr.sizes["C"]
    assert same(c.lo, "A + B") and same(c.hi, "A + B")
    assert pr.deterministic and pr.supported
    assert pr.recursion_var == "A"


def test_fact_steps(programs, list_sigs):
    cost = analyze_program(programs["fact"], list_sigs, None, "steps").cost("fact/2")
    assert same(cost.lower.expr, "N + 1") and same(cost.upper.expr, "N + 1")


def test_nrev_is_quadratic(programs, list_sigs):
    r = analyze_program(programs["nrev"], list_sigs, None, "steps")
    cost = r.cost("nrev/2")
    assert same(cost.upper.expr, "(1/2)*power(A,2) + (3/2)*A + 1")
    assert cost.lower.expr == cost.upper.expr
    assert same(r.preds["nrev/2"].sizes["R"].hi, "A")


def test_biquad_energy_is_linear(biquad):
    program, sigs, model = biquad
    cost = analyze_program(program, sigs, model, "energy").cost("biquadCascade/4")
    assert same(cost.lower.expr, "16502087*N + 5445103")
    assert cost.lower.expr == cost.upper.expr


SIGS = """
:- sig line(N: in num, R: out num).
:- sig idw(X: in listnum, Y: out listnum).
:- sig mr1(N: in num, R: out num).
:- sig mr2(N: in num, R: out num).
:- sig nd(N: in num, R: out num).
"""

EXTRA = """
line(N, R) :- ld(N, A), add(A, 1, R).
idw(X, Y) :- Y = X.
mr1(N, R) :- N > 0, N1 is N - 1, mr2(N1, R).
mr1(N, R) :- N =< 0, R = 0.
mr2(N, R) :- mr1(N, R).
nd(N, R) :- R = 1.
nd(N, R) :- N > 0, N1 is N - 1, nd(N1, R).
"""

MODEL = ('{"unit": "nJ", "instructions": {"ld/2": {"lower": 3, "upper": 5}, '
         '"add/3": {"cost": 2}}}')


@pytest.fixture(scope="module")
def extra():
    return (parse_program(EXTRA),
            parse_signatures(fixture_text("lists.sig") + SIGS),
            load_model(MODEL))


def test_straight_line_block_sums_leaf_costs(extra):
    program, sigs, model = extra
    cost = analyze_program(program, sigs, model, "energy").cost("line/2")
    assert cost.lower.expr == normalize(parse_expr("5"))
    assert cost.upper.expr == normalize(parse_expr("7"))
    assert analyze_program(program, sigs, None, "steps").cost("line/2").upper.expr == \
        normalize(parse_expr("1"))


def test_identity_wrapper_passes_size_through(extra):
    program, sigs, _ = extra
    pr = analyze_program(program, sigs, None, "steps").preds["idw/2"]
    assert pr.sizes["Y"].lo == Var("X") and pr.sizes["Y"].hi == Var("X")


def test_mutual_recursion_is_reported_and_trivial(extra):
    program, sigs, _ = extra
    r = analyze_program(program, sigs, None, "steps")
    for key in ("mr1/2", "mr2/2"):
        pr = r.preds[key]
        assert not pr.supported
        assert pr.cost.lower.expr == normalize(parse_expr("0"))
        assert isinstance(pr.cost.upper.expr, Inf)
    assert any(d.code == "unsupported" and "mr1/2" in str(d) for d in r.diagnostics)


def test_overlapping_clauses_are_nondeterminate(extra):
    program, sigs, _ = extra
    r = analyze_program(program, sigs, None, "steps")
    assert not r.preds["nd/2"].deterministic
    assert isinstance(r.cost("nd/2").upper.expr, Inf)
    assert any(d.code == "nondeterminate" for d in r.diagnostics)


def test_zero_cost_energy_model(programs, list_sigs):
    model = load_model('{"unit": "nJ", "instructions": {}}')
    cost = analyze_program(programs["nrev"], list_sigs, model, "energy").cost("nrev/2")
    assert cost.upper.expr == normalize(parse_expr("0"))


@pytest.mark.parametrize("name, make, cost_var", [
    ("append", lambda n: ("append", [int_list(n), int_list(3), HVar("C")]), "A"),
    ("nrev", lambda n: ("nrev", [int_list(n), HVar("R")]), "A"),
    ("fact", lambda n: ("fact", [Int(n), HVar("F")]), "N"),
])
def test_inferred_bounds_contain_measured_steps(programs, list_sigs, name, make, cost_var):
    key = {"append": "append/3", "nrev": "nrev/2", "fact": "fact/2"}[name]
    cost = analyze_program(programs[name], list_sigs, None, "steps").cost(key)
    for n in range(0, 15):
        pred, args = make(n)
        steps = measure(programs[name], pred, args)
        env = {v: 3 for v in cost.upper.vars}
        env[cost_var] = n
        assert evaluate(cost.lower.expr, env) <= steps <= evaluate(cost.upper.expr, env)


# -- recurrences ------------------------------------------------------------

def rec(bound, *cases):
    return Recurrence("T", bound, "n", tuple(Case(lo, hi, a, parse_expr(p))
                                              for lo, hi, a, p in cases))


def test_solve_telescoping():
    cf = solve_recurrence(rec("upper", (0, 0, 0, "1"), (1, math.inf, 1, "n")))
    assert same(cf.expr, "(1/2)*power(n,2) + (1/2)*n + 1")
    assert cf.exact


def test_solve_doubling():
    cf = solve_recurrence(rec("upper", (0, 0, 0, "1"), (1, math.inf, 2, "1")))
    assert same(cf.expr, "2*power(2,n) - 1")


def test_solve_with_symbolic_parameter():
    cf = solve_recurrence(rec("upper", (0, 0, 0, "B + 1"), (1, math.inf, 1, "1")))
    assert same(cf.expr, "n + B + 1")


def test_unsupported_high_degree_driver():
    with pytest.raises(Unsupported):
        solve_recurrence(rec("upper", (0, 0, 0, "1"), (1, math.inf, 1, "power(n, 5)")))


def test_unroll_matches_definition():
    r = rec("upper", (0, 0, 0, "2"), (1, math.inf, 3, "n"))
    assert unroll(r, 5) == [unroll_linear(3, lambda k: k, 2, n) for n in range(6)]


@settings(max_examples=150, deadline=None)
@given(a=st.integers(1, 3), base=st.integers(0, 20),
       coeffs=st.lists(st.integers(0, 9), min_size=1, max_size=4))
def test_closed_forms_match_iterative_unrolling(a, base, coeffs):
    p = " + ".join(f"{c}*power(n,{k})" for k, c in enumerate(coeffs))
    cf = solve_recurrence(rec("upper", (0, 0, 0, str(base)), (1, math.inf, a, p)))
    drive = lambda k: sum(c * k ** i for i, c in enumerate(coeffs))  # noqa: E731
    for n in range(0, 40):
        assert evaluate(cf.expr, {"n": n}) == unroll_linear(a, drive, base, n)


# -- soundness against the interpreter --------------------------------------

def _loop_program(pre, post, base, branches):
    """Count-down loop with leaf calls before and after the recursive calls."""
    calls = ", ".join(["N1 is N - 1"] + [f"loop(N1, R{i})" for i in range(branches)])
    body = ", ".join(["N > 0"] + [f"{op}(N)" for op in pre] + [calls]
                     + [f"{op}(N)" for op in post] + ["R = 0"])
    stop = ", ".join(["N =< 0"] + [f"{op}(N)" for op in base] + ["R = 0"])
    return parse_program(f"loop(N, R) :- {stop}.\nloop(N, R) :- {body}.\n")


ops = st.lists(st.sampled_from(["op0", "op1", "op2"]), max_size=3)


@settings(max_examples=60, deadline=None)
@given(pre=ops, post=ops, base=ops, branches=st.integers(1, 2),
       costs=st.lists(st.tuples(st.integers(0, 9), st.integers(0, 9)), min_size=3, max_size=3))
def test_energy_bounds_contain_every_run(pre, post, base, branches, costs):
    program = _loop_program(pre, post, base, branches)
    table = {f"op{i}/1": {"lower": min(c), "upper": max(c)} for i, c in enumerate(costs)}
    model = load_model(json.dumps({"unit": "nJ", "instructions": table}))
    sigs = parse_signatures(":- sig loop(N: in num, R: out num).")
    cost = analyze_program(program, sigs, model, "energy").cost("loop/2")
    for n in range(0, 9):
        lo = measure(program, "loop", [Int(n), HVar("R")], model, "energy", "lower")
        hi = measure(program, "loop", [Int(n), HVar("R")], model, "energy", "upper")
        assert evaluate(cost.lower.expr, {"N": n}) <= lo
        assert hi <= evaluate(cost.upper.expr, {"N": n})
        # every body is straight-line, so the bounds are tight
        assert evaluate(cost.lower.expr, {"N": n}) == lo
        assert evaluate(cost.upper.expr, {"N": n}) == hi


@settings(max_examples=40, deadline=None)
@given(pre=ops, post=ops, base=ops, branches=st.integers(1, 2))
def test_steps_bounds_are_ordered_and_monotone(pre, post, base, branches):
    program = _loop_program(pre, post, base, branches)
    sigs = parse_signatures(":- sig loop(N: in num, R: out num).")
    cost = analyze_program(program, sigs, None, "steps").cost("loop/2")
    prev = Fraction(-1)
    for n in range(0, 20):
        lo = evaluate(cost.lower.expr, {"N": n})
        hi = evaluate(cost.upper.expr, {"N": n})
        assert lo <= hi
        assert hi >= prev
        prev = hi
