import math
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from oracles import brute_relations, peval, poly_expr, runs, sign

from enverif.assertlang import parse_expr
from enverif.compare import (EVERYWHERE_ZERO, DomainExhausted, Rel, Root,
                             UnsupportedComparison, compare_fns, find_roots,
                             polynomial_roots, safe_adjust, scan_roots, sign_partition)
from enverif.costfn import BoundFn, DomainSet, Inf, evaluate

REL = {-1: Rel.LT, 0: Rel.EQ, 1: Rel.GT}


def fn(text, lo=0, hi=math.inf, var="N"):
    return BoundFn(parse_expr(text), (var,), DomainSet(((var, lo, hi),)))


def shape(part):
    return [(p.lo, p.hi, str(p.rel)) for p in part]


# -- roots ------------------------------------------------------------------

def test_linear_root_of_biquad_difference():
    roots = find_roots(fn("16502087*N - 119554897"))
    assert len(roots) == 1
    assert Fraction(119554897, 16502087) in roots[0]
    assert roots[0].exact


def test_quadratic_roots_are_exact():
    roots = find_roots(fn("power(N,2) - 2*N - 3"))
    assert [(r.lo, r.exact) for r in roots] == [(-1, True), (3, True)]


def test_constant_has_no_roots():
    assert find_roots(fn("5")) == []
    assert find_roots(fn("N - N")) is EVERYWHERE_ZERO


def test_irrational_roots_are_tight_enclosures():
    (neg, pos) = find_roots(fn("power(N,2) - 2"))
    assert not pos.exact
    assert pos.lo ** 2 < 2 < pos.hi ** 2
    assert pos.hi - pos.lo < Fraction(1, 2**32)


def test_quintic_goes_through_isolation():
    # (N-1)(N-2)(N-3)(N-4)(N-5)
    coeffs = [-120, 274, -225, 85, -15, 1]
    roots = polynomial_roots(coeffs)
    assert [r.lo for r in roots] == [1, 2, 3, 4, 5]


def test_repeated_root_reports_multiplicity():
    roots = polynomial_roots([9, -6, 1])      # (N-3)^2
    assert len(roots) == 1 and roots[0].multiplicity == 2 and roots[0].lo == 3


def test_multivariate_roots_unsupported():
    f = BoundFn(parse_expr("N - M"), ("M", "N"))
    with pytest.raises(UnsupportedComparison):
        find_roots(f)


# -- safe adjustment --------------------------------------------------------

def test_safe_adjust_biquad_cut():
    f = fn("16502087*N - 119554897", lo=1)
    (r,) = find_roots(f)
    assert safe_adjust(r, f, "left", -1) == 7
    assert safe_adjust(r, f, "right", 1) == 8


def test_safe_adjust_exact_integer_root():
    f = fn("power(N,2) - 2*N - 3")
    assert safe_adjust(Root(Fraction(3), Fraction(3), True), f, "left", -1) == 2
    assert safe_adjust(Root(Fraction(3), Fraction(3), True), f, "right", 1) == 4


def test_safe_adjust_wide_enclosure_matches_exact_case():
    f = fn("power(N,2) - 2*N - 3")
    wide = Root(Fraction(2999, 1000), Fraction(3001, 1000))
    assert safe_adjust(wide, f, "left", -1) == 2
    assert safe_adjust(wide, f, "right", 1) == 4


def test_safe_adjust_domain_exhausted():
    f = fn("N - 3", lo=3, hi=3)
    with pytest.raises(DomainExhausted):
        safe_adjust(Root(Fraction(3), Fraction(3), True), f, "left", -1)


# -- partitions -------------------------------------------------------------

def test_sign_partition_biquad():
    part = sign_partition(fn("16502087*N - 119554897", lo=1))
    assert shape(part) == [(1, 7, "lt"), (8, math.inf, "gt")]


def test_sign_partition_zero_everywhere():
    assert shape(sign_partition(fn("N - N"))) == [(0, math.inf, "eq")]


def test_sign_partition_quadratic():
    part = sign_partition(fn("power(N,2) - 2*N - 3"))
    assert shape(part) == [(0, 2, "lt"), (3, 3, "eq"), (4, math.inf, "gt")]


def test_compare_biquad_against_budget():
    part = compare_fns(fn("16502087*N + 5445103", lo=1), fn("125000000", lo=1))
    assert shape(part) == [(1, 7, "lt"), (8, math.inf, "gt")]


def test_compare_equal_functions():
    assert shape(compare_fns(fn("N + 1"), fn("N + 1"))) == [(0, math.inf, "eq")]


def test_compare_exponential_against_square():
    part = compare_fns(fn("power(2, N)"), fn("power(N, 2)"))
    table = runs(brute_relations(lambda n: 2**n - n * n, 0, 20))
    expected = [(lo, hi, str(REL[s])) for lo, hi, s in table]
    expected[-1] = (expected[-1][0], math.inf, expected[-1][2])
    assert shape(part) == expected
    assert expected[:4] == [(0, 1, "gt"), (2, 2, "eq"), (3, 3, "lt"), (4, 4, "eq")]


def test_compare_logarithm_is_scanned_exactly():
    part = compare_fns(fn("log(2, N + 1)", hi=100), fn("3", hi=100))
    assert shape(part) == [(0, 6, "lt"), (7, 7, "eq"), (8, 100, "gt")]


def test_multivariate_comparison_degrades_to_unknown():
    a = BoundFn(parse_expr("N + M"), ("M", "N"))
    b = BoundFn(parse_expr("2*N"), ("M", "N"))
    assert {p.rel for p in compare_fns(a, b)} == {Rel.UNKNOWN}
    # other variables cancelling out leaves a univariate problem
    c = BoundFn(parse_expr("N + M + 1"), ("M", "N"))
    d = BoundFn(parse_expr("M + 2*N"), ("M", "N"))
    assert shape(compare_fns(c, d)) == [(0, 0, "gt"), (1, 1, "eq"), (2, math.inf, "lt")]


def test_infinite_bounds_compare_as_extremes():
    zero = BoundFn(parse_expr("0"), ("N",))
    top = BoundFn(Inf(), ("N",))
    assert shape(compare_fns(zero, top)) == [(0, math.inf, "lt")]
    assert shape(compare_fns(top, top)) == [(0, math.inf, "eq")]


# -- properties -------------------------------------------------------------

coeff_lists = st.lists(st.integers(-10, 10), min_size=1, max_size=5)


def _check_partition(part, f, lo, hi):
    pieces = list(part)
    assert pieces[0].lo == lo and pieces[-1].hi == hi
    for a, b in zip(pieces, pieces[1:]):
        assert b.lo == a.hi + 1
        assert a.rel is not b.rel
    for p in pieces:
        top = int(min(p.hi, lo + 400))
        for n in range(p.lo, top + 1):
            assert p.rel is REL[sign(f(n))], (n, p)


@settings(max_examples=150, deadline=None)
@given(a=coeff_lists, b=coeff_lists, lo=st.integers(0, 20))
def test_compare_agrees_with_exhaustive_evaluation(a, b, lo):
    dom = DomainSet((("N", lo, math.inf),))
    part = compare_fns(BoundFn(poly_expr(a), ("N",), dom), BoundFn(poly_expr(b), ("N",), dom))
    _check_partition(part, lambda n: peval(a, n) - peval(b, n), lo, math.inf)


@settings(max_examples=100, deadline=None)
@given(c=coeff_lists, lo=st.integers(0, 10), width=st.integers(0, 60))
def test_partition_of_bounded_domain(c, lo, width):
    dom = DomainSet((("N", lo, lo + width),))
    part = sign_partition(BoundFn(poly_expr(c), ("N",), dom))
    _check_partition(part, lambda n: peval(c, n), lo, lo + width)


@settings(max_examples=100, deadline=None)
@given(c=coeff_lists)
def test_analytic_roots_agree_with_bisection(c):
    if not any(c[1:]):
        return
    roots = polynomial_roots(c)
    # every root found by integer scanning and bisection overlaps an
    # analytic enclosure
    scanned = scan_roots(poly_expr(c), "N", -50, 50)
    for x in scanned:
        assert any(x.lo <= r.hi and r.lo <= x.hi for r in roots), (x, roots)
    for r in roots:
        if r.exact:
            assert peval(c, r.lo) == 0
        elif -50 < r.lo < 50 and r.multiplicity % 2 == 1:
            assert sign(peval(c, r.lo)) * sign(peval(c, r.hi)) <= 0
        a, b = math.floor(r.lo), math.ceil(r.hi)
        visible = a == b or sign(peval(c, a)) * sign(peval(c, b)) < 0
        if -49 < r.lo < 49 and visible:
            # a root the integer scan can see must have been found by it
            assert any(x.lo <= r.hi and r.lo <= x.hi for x in scanned), (r, scanned)


@settings(max_examples=100, deadline=None)
@given(c=coeff_lists)
def test_safe_adjust_never_crosses_a_root(c):
    if not any(c[1:]):
        return
    f = BoundFn(poly_expr(c), ("N",))
    for r in polynomial_roots(c):
        for direction, want in (("left", -1), ("left", 1), ("right", -1), ("right", 1)):
            try:
                cut = safe_adjust(r, f, direction, want)
            except DomainExhausted:
                continue
            assert sign(evaluate(f.expr, {"N": cut})) == want
            if direction == "left":
                assert cut <= math.ceil(r.hi)
            else:
                assert cut >= math.floor(r.lo)
