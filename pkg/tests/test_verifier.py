import math

import pytest
from hypothesis import given, settings, strategies as st

from conftest import fixture_text
from oracles import peval, poly_expr

from enverif.assertlang import (InternalAssertion, Status, parse_expr, parse_internal,
                                print_pragma, read_spec)
from enverif.costfn import BoundFn, Const, DomainSet, IntervalFn, normalize
from enverif.hcir import parse_program
from enverif.sizedtypes import Mode, parse_signatures
from enverif.verifier import (Region, SpecEntry, VerificationInputError, check_assertion,
                              entries_from_spec, render_outcome, split_outcome,
                              split_to_assertions, verify_program)


def interval(lower, upper, var="N", lo=0, hi=math.inf):
    dom = DomainSet(((var, lo, hi),))
    return IntervalFn(BoundFn(lower, (var,), dom), BoundFn(upper, (var,), dom))


def spec(lower, upper, lo=0, hi=math.inf):
    return InternalAssertion("p/2", (("N", "int", Mode.IN), ("E", "any", Mode.OUT)),
                             DomainSet((("N", lo, hi),)), "steps", lower, upper)


def regions(o):
    return [(r.lo, r.hi, str(r.status)) for r in o.verdicts]


# -- examples ---------------------------------------------------------------

def test_biquad_splits_into_checked_and_false(biquad):
    program, sigs, model = biquad
    entries = entries_from_spec(read_spec(fixture_text("biquad.spec")), sigs)
    report = verify_program(program, sigs, model, entries)
    (o,) = report.outcomes
    assert regions(o) == [(1, 7, "checked"), (8, math.inf, "false")]
    assert report.any_false and not report.all_verified
    texts = [print_pragma(a) for a in split_to_assertions(o)]
    assert texts == [
        "#pragma checked biquadCascade(state,xn,N) : "
        "(1 <= N && N <= 7) ==> (energy <= 125000000)",
        "#pragma false biquadCascade(state,xn,N) : (8 <= N) ==> (energy <= 125000000)",
    ]


def test_fact_steps_checked_on_whole_domain(programs, list_sigs):
    entries = entries_from_spec(read_spec(fixture_text("fact.spec")), list_sigs)
    report = verify_program(programs["fact"], list_sigs, None, entries)
    (o,) = report.outcomes
    assert o.whole is Status.CHECKED
    assert report.all_verified


def test_append_upper_bound_checked(programs, list_sigs):
    entries = entries_from_spec(read_spec(fixture_text("append.spec")), list_sigs)
    (o,) = verify_program(programs["append"], list_sigs, None, entries).outcomes
    assert o.whole is Status.CHECKED


def test_exceeding_a_zero_budget_is_false():
    n1 = parse_expr("N + 1")
    o = check_assertion(interval(n1, n1, lo=1), spec(Const(0), Const(0), lo=1))
    assert regions(o) == [(1, math.inf, "false")]


def test_overlap_without_containment_is_check():
    o = check_assertion(interval(parse_expr("N"), parse_expr("3*N")),
                        spec(Const(0), parse_expr("2*N")))
    assert regions(o) == [(0, 0, "checked"), (1, math.inf, "check")]


def test_multivariate_bounds_give_check():
    sig = parse_signatures(fixture_text("lists.sig")).get("append/3")
    ia = parse_internal(":- check pred append(A, B, C) + resource(steps, 0, A + B).", sig)
    dom = DomainSet((("A", 0, math.inf), ("B", 0, math.inf)))
    inf = IntervalFn(BoundFn(parse_expr("A"), ("A", "B"), dom),
                     BoundFn(parse_expr("A + 1"), ("A", "B"), dom))
    o = check_assertion(inf, ia)
    assert o.whole is Status.CHECK
    assert any(d.code == "multivariate" for d in o.diagnostics)


def test_split_outcome_restricts_domains():
    o = check_assertion(interval(parse_expr("N"), parse_expr("N")), spec(Const(0), Const(5)))
    parts = split_outcome(o)
    assert [(a.status, a.size_precond.get("N")) for a in parts] == [
        (Status.CHECKED, (0, 5)), (Status.FALSE_, (6, math.inf))]


def test_whole_domain_check_keeps_source_text(biquad):
    program, sigs, model = biquad
    text = "#pragma check biquadCascade(s,x,N) : (energy <= 16502087*N + 5445102)"
    spec_file = read_spec(text + "\n", "inline.spec")
    (o,) = verify_program(program, sigs, model, entries_from_spec(spec_file, sigs)).outcomes
    # the spec is one unit short of the (exact) cost everywhere: false
    assert o.whole is Status.FALSE_
    looser = "#pragma check biquadCascade(s,x,N) : (energy <= power(N, 9))"
    (o,) = verify_program(program, sigs, model,
                          entries_from_spec(read_spec(looser + "\n"), sigs)).outcomes
    assert render_outcome(o)[-1].startswith("#pragma checked")


TRUST_PROGRAM = """
p(N, R) :- N =< 0, R = 0.
p(N, R) :- N > 0, N1 is N - 1, ext(N, X), p(N1, R).
"""
TRUST_SIGS = ":- sig p(N: in num, R: out num).\n:- sig ext(N: in num, X: out num).\n"


def test_trust_assertion_supplies_undefined_leaf_cost():
    program = parse_program(TRUST_PROGRAM)
    sigs = parse_signatures(TRUST_SIGS)
    text = (":- trust pred ext(N, X) + resource(steps, 2, 2).\n"
            ":- check pred p(N, R) + resource(steps, 3*N + 1, 3*N + 1).\n")
    report = verify_program(program, sigs, None, entries_from_spec(read_spec(text), sigs))
    (o,) = report.outcomes
    assert o.whole is Status.CHECKED
    assert any(d.code == "trusted" for d in report.diagnostics)
    without = text.splitlines()[1] + "\n"
    (o,) = verify_program(program, sigs, None,
                          entries_from_spec(read_spec(without), sigs)).outcomes
    # an unknown leaf costs nothing, so the inferred N + 1 undershoots
    assert regions(o) == [(0, 0, "checked"), (1, math.inf, "false")]


def test_assertion_for_unknown_predicate_is_rejected(programs, list_sigs):
    ia = parse_internal(":- check pred nrev(A, R) + resource(steps, 0, A).",
                        list_sigs.get("nrev/2"))
    with pytest.raises(VerificationInputError):
        verify_program(programs["fact"], list_sigs, None, [SpecEntry(ia)])


def test_spec_for_unsigned_predicate_is_rejected(list_sigs):
    with pytest.raises(VerificationInputError):
        entries_from_spec(read_spec("#pragma check nope(a) : (energy <= 1)\n"), list_sigs)


def test_energy_assertions_need_a_model(biquad):
    program, sigs, _ = biquad
    entries = entries_from_spec(read_spec(fixture_text("biquad.spec")), sigs)
    with pytest.raises(VerificationInputError):
        verify_program(program, sigs, None, entries)


def test_region_membership():
    r = Region(2, math.inf, Status.CHECK)
    assert 2 in r and 10**9 in r and 1 not in r


# -- properties -------------------------------------------------------------

coeffs = st.lists(st.integers(0, 6), min_size=1, max_size=3)


def _expected(sl, su, il, iu):
    if sl <= il and iu <= su:
        return "checked"
    if iu < sl or su < il:
        return "false"
    return "check"


@settings(max_examples=150, deadline=None)
@given(i_lo=coeffs, i_w=coeffs, s_lo=coeffs, s_w=coeffs, lo=st.integers(0, 5),
       width=st.one_of(st.none(), st.integers(0, 40)))
def test_verdicts_partition_domain_and_match_pointwise(i_lo, i_w, s_lo, s_w, lo, width):
    hi = math.inf if width is None else lo + width
    i_hi = [a + b for a, b in zip(i_lo + [0] * 3, i_w + [0] * 3)]
    s_hi = [a + b for a, b in zip(s_lo + [0] * 3, s_w + [0] * 3)]
    o = check_assertion(interval(poly_expr(i_lo), poly_expr(i_hi), lo=lo, hi=hi),
                        spec(poly_expr(s_lo), poly_expr(s_hi), lo, hi))
    rs = list(o.verdicts)
    assert rs[0].lo == lo and rs[-1].hi == hi
    for a, b in zip(rs, rs[1:]):
        assert b.lo == a.hi + 1 and a.status is not b.status
    for r in rs:
        for n in range(r.lo, int(min(r.hi, r.lo + 200)) + 1):
            want = _expected(peval(s_lo, n), peval(s_hi, n), peval(i_lo, n), peval(i_hi, n))
            assert str(r.status) == want, (n, r)


@settings(max_examples=100, deadline=None)
@given(i_lo=coeffs, i_w=coeffs, s_lo=coeffs, s_w=coeffs)
def test_reverifying_split_assertions_is_idempotent(i_lo, i_w, s_lo, s_w):
    i_hi = [a + b for a, b in zip(i_lo + [0] * 3, i_w + [0] * 3)]
    s_hi = [a + b for a, b in zip(s_lo + [0] * 3, s_w + [0] * 3)]
    inferred = interval(poly_expr(i_lo), poly_expr(i_hi))
    o = check_assertion(inferred, spec(poly_expr(s_lo), poly_expr(s_hi)))
    for part in split_outcome(o):
        lo, hi = part.size_precond.get("N")
        again = check_assertion(interval(inferred.lower.expr, inferred.upper.expr, lo=lo, hi=hi),
                                part.with_status(Status.CHECK))
        assert again.whole is part.status


@settings(max_examples=60, deadline=None)
@given(k=st.integers(0, 10), budget=st.integers(0, 400))
def test_no_counterexample_inside_checked_region(k, budget):
    cost = normalize(parse_expr(f"{k}*N + 3"))
    o = check_assertion(interval(cost, cost), spec(Const(0), Const(budget)))
    for r in o.verdicts:
        for n in range(r.lo, int(min(r.hi, 500)) + 1):
            within = k * n + 3 <= budget
            assert within == (r.status is Status.CHECKED)
