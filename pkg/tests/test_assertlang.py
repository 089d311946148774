import math
import random

import pytest
from hypothesis import given, settings, strategies as st

from conftest import fixture_text

from enverif.assertlang import (CostBounds, InternalAssertion, PragmaSyntaxError, Status,
                                TranslationError, XCAssertion, from_internal, parse_expr,
                                parse_internal, parse_pragma, print_internal, print_pragma,
                                read_spec, to_internal)
from enverif.costfn import ArrayMax, Const, Inf, Power, Var, normalize
from enverif.sizedtypes import Mode, parse_signatures

from oracles import random_pragma

CHECK = "#pragma check biquadCascade(state,xn,N) : (1 <= N) ==> (energy <= 125000000)"
TRUE = ("#pragma true biquadCascade(state,xn,N) : "
        "(16502087*N + 5445103 <= energy && energy <= 16502087*N + 5445103)")


@pytest.fixture(scope="module")
def sigs():
    return parse_signatures(fixture_text("biquad.sig") + fixture_text("lists.sig"))


def test_parse_check_pragma():
    a = parse_pragma(CHECK)
    assert a.status is Status.CHECK
    assert a.scope == ("biquadCascade", ("state", "xn", "N"))
    assert a.precond.lower == Const(1) and a.precond.lower_id == "N"
    assert a.precond.upper is None
    assert a.bounds.lower is None and a.bounds.upper == Const(125000000)


def test_parse_true_pragma_equal_bounds():
    a = parse_pragma(TRUE)
    assert a.status is Status.TRUE_
    assert a.bounds.lower == a.bounds.upper
    assert normalize(a.bounds.upper) == normalize(parse_expr("16502087*N + 5445103"))


def test_parse_lower_bound_only():
    a = parse_pragma("#pragma check f(n) : (power(2,n) <= energy)")
    assert a.precond is None and a.bounds.upper is None
    assert a.bounds.lower == Power(Const(2), Var("n"))


def test_missing_status_defaults_to_check():
    assert parse_pragma("#pragma f(n) : (energy <= n)").status is Status.CHECK


def test_expression_precedence_and_functions():
    e = parse_expr("1 + 2 * 3 - -4")
    assert normalize(e) == Const(11)
    assert parse_expr("max(xs)") == ArrayMax("xs")
    assert normalize(parse_expr("sum(i, 1, 3, i) * log(2, 8)")) == Const(18)


@pytest.mark.parametrize("text", [
    "#pragma check f(n) : (1 <= n) ==> (n <= 5)",                  # no energy keyword
    "#pragma check f(n) : (n <= n) ==> (energy <= 1)",             # scope id in precond bound
    "#pragma check f(n) : (1 <= m) ==> (energy <= 1)",             # precond on unknown id
    "#pragma check f(n) : (energy <= max(n + 1))",                 # max of a compound
    "#pragma check f(n) (energy <= 1)",
    "#pragma check f(n) : (energy <= 1",
    "pragma check f(n) : (energy <= 1)",
    "#pragma check f(n) : (energy <= 1 / 0)",
])
def test_syntax_errors(text):
    with pytest.raises(PragmaSyntaxError):
        parse_pragma(text)


def test_print_result_pragmas():
    checked = ("#pragma checked biquadCascade(state,xn,N) : "
               "(1 <= N && N <= 7) ==> (energy <= 125000000)")
    false = "#pragma false biquadCascade(state,xn,N) : (8 <= N) ==> (energy <= 125000000)"
    for text in (checked, false, CHECK):
        assert print_pragma(parse_pragma(text)) == text


def test_to_internal_biquad(sigs):
    ia = to_internal(parse_pragma(CHECK), sigs.get("biquadCascade/4"))
    assert ia.key == "biquadCascade/4"
    assert ia.resource == "energy"
    assert ia.lower == Const(0) and ia.upper == Const(125000000)
    assert ia.size_precond.get("N") == (1, math.inf)
    modes = [m for _, _, m in ia.call_pattern]
    assert modes.count(Mode.OUT) == 1 and len(modes) == 4


def test_to_internal_equal_bounds_and_default_domain(sigs):
    ia = to_internal(parse_pragma(TRUE), sigs.get("biquadCascade/4"))
    assert ia.lower == ia.upper
    assert ia.size_precond.get("N") == (0, math.inf)


def test_to_internal_errors(sigs):
    sig = sigs.get("biquadCascade/4")
    with pytest.raises(TranslationError):
        to_internal(parse_pragma("#pragma check biquadCascade(a,b) : (energy <= 1)"), sig)
    with pytest.raises(TranslationError):
        to_internal(parse_pragma(
            "#pragma check biquadCascade(state,xn,N) : (1 <= xn) ==> (energy <= 1)"), sig)


@pytest.mark.parametrize("text", [CHECK, TRUE,
                                  "#pragma check biquadCascade(s,x,N) : (energy <= 9*N)"])
def test_from_internal_inverts_to_internal(sigs, text):
    sig = sigs.get("biquadCascade/4")
    a = parse_pragma(text)
    back = from_internal(to_internal(a, sig), sig)
    assert back == a
    assert to_internal(back, sig) == to_internal(a, sig)


def test_from_internal_rejects_other_resources(sigs):
    ia = parse_internal(fixture_text("fact.spec"), sigs.get("fact/2"))
    with pytest.raises(TranslationError):
        from_internal(ia)


def test_internal_text_round_trip(sigs):
    ia = parse_internal(fixture_text("fact.spec"), sigs.get("fact/2"))
    assert ia.resource == "steps"
    assert ia.size_precond.get("N") == (1, math.inf)
    assert normalize(ia.lower) == normalize(parse_expr("N + 1"))
    assert parse_internal(print_internal(ia), sigs.get("fact/2")) == ia


def test_internal_open_upper_bound(sigs):
    ia = parse_internal(":- check pred append(A, B, C) + resource(steps, 0, inf).",
                        sigs.get("append/3"))
    assert isinstance(ia.upper, Inf)


def test_internal_assertion_needs_one_output():
    with pytest.raises(TranslationError):
        InternalAssertion("p/1", (("N", "int", Mode.IN),), None, "steps", Const(0), Inf())


def test_spec_file_items_and_continuations():
    text = ("// header\n#pragma check f(n) : \\\n   (energy <= n)\nplain line\n"
            ":- check pred g(A, B)\n    + resource(steps, 0, A).\n")
    spec = read_spec(text, "x.spec")
    assert [(i.kind, i.first_line, i.last_line) for i in spec.items] == [
        ("pragma", 2, 3), ("pred", 5, 6)]
    assert parse_pragma(spec.items[0].text).bounds.upper == Var("n")


# -- properties -------------------------------------------------------------

def test_generated_corpus_round_trips():
    rng = random.Random(99)
    for _ in range(1000):
        a = parse_pragma(random_pragma(rng))
        assert parse_pragma(print_pragma(a)) == a


@settings(max_examples=200, deadline=None)
@given(seed=st.integers(0, 2**32))
def test_round_trip_is_a_fixpoint_of_printing(seed):
    text = print_pragma(parse_pragma(random_pragma(random.Random(seed))))
    assert print_pragma(parse_pragma(text)) == text


@settings(max_examples=200, deadline=None)
@given(ident=st.sampled_from(["a", "n", "k"]), other=st.sampled_from(["a", "n", "k", "q"]),
       k=st.integers(0, 100))
def test_groundness_check_is_exact(ident, other, k):
    """A precondition bound is rejected exactly when it names a scope id."""
    text = f"#pragma check f(a,n,k) : ({k} + {other} <= {ident}) ==> (energy <= n)"
    if other in ("a", "n", "k"):
        with pytest.raises(PragmaSyntaxError):
            parse_pragma(text)
    else:
        assert parse_pragma(text).precond.lower_id == ident


def test_xc_assertion_rejects_energy_in_scope():
    with pytest.raises(ValueError):
        XCAssertion(Status.CHECK, "f", ("energy",), CostBounds(upper=Const(1)))
