import pytest
from hypothesis import given, settings, strategies as st

from enverif.hcir import Int, Struct, Var, make_list, parse_term
from enverif.sizedtypes import (Mode, SignatureError, SizeError, SizeMetric, UnsupportedType,
                                parse_signatures, print_signatures, size_of)

TYPES = """
listnum := [] | [num|listnum].
matrix := [] | [listnum|matrix].
pair := p(num, num).
"""


@pytest.fixture(scope="module")
def sigs():
    return parse_signatures(TYPES + """
        :- subtype nat < num.
        :- sig append(A: in listnum, B: in listnum, C: out listnum).
        :- sig fact(N: in num, F: out num).
        :- sig swap(P: in pair, Q: out pair).
        :- sig walk(T: in any depth, R: out any).
    """)


def test_listnum_schema(sigs):
    s = sigs.schema("listnum")
    assert str(s) == "listnum^(α,β)(num^(γ,δ))"
    assert s.pairs() == [("α", "β"), ("γ", "δ")]


def test_num_schema(sigs):
    assert str(sigs.schema("num")) == "num^(α,β)"


def test_nested_list_schema_has_three_pairs(sigs):
    s = sigs.schema("matrix")
    # one pair per recursive position (outer and inner list) plus the leaf
    assert len(s.pairs()) == 3


def test_non_recursive_compound_has_no_own_size(sigs):
    s = sigs.schema("pair")
    assert s.bounds is None
    assert len(s.pairs()) == 1


def test_mutual_recursion_unsupported():
    with pytest.raises(UnsupportedType):
        parse_signatures("a := [] | [num|b].\nb := [] | [num|a].\n")


@pytest.mark.parametrize("term, metric, size", [
    ("[1,2,3]", SizeMetric.LIST_LENGTH, 3),
    ("5", SizeMetric.INT_VALUE, 5),
    ("[]", SizeMetric.LIST_LENGTH, 0),
    ("-7", SizeMetric.INT_VALUE, 7),
    ("f(g(a), b)", SizeMetric.TERM_DEPTH, 2),
    ("a", SizeMetric.TERM_DEPTH, 0),
])
def test_size_of_examples(term, metric, size):
    assert size_of(parse_term(term), metric) == size


@pytest.mark.parametrize("term, metric", [
    ("[1|T]", SizeMetric.LIST_LENGTH),
    ("X", SizeMetric.INT_VALUE),
    ("[1,2]", SizeMetric.INT_VALUE),
    ("f(1)", SizeMetric.LIST_LENGTH),
])
def test_size_of_errors(term, metric):
    with pytest.raises(SizeError):
        size_of(parse_term(term), metric)


def test_signature_defaults_and_modes(sigs):
    app = sigs.get("append/3")
    assert [a.mode for a in app.args] == [Mode.IN, Mode.IN, Mode.OUT]
    assert app.args[0].metric is SizeMetric.LIST_LENGTH
    assert sigs.get("fact/2").args[0].metric is SizeMetric.INT_VALUE
    assert sigs.get("swap/2").args[0].metric is None
    assert sigs.get("walk/2").args[0].metric is SizeMetric.TERM_DEPTH
    assert app.size_vars() == ["A", "B"]


def test_input_and_size_functions(sigs):
    app = sigs.get("append/3")
    call = (make_list([Int(1), Int(2)]), make_list([Int(3)]), Var("C"))
    assert app.input_p(call) == call[:2]
    assert app.size_p(call) == (2, 1)


def test_subtypes(sigs):
    assert sigs.subsumed("nat", "num")
    assert sigs.subsumed("listnum", "listnum")
    assert sigs.subsumed("listnum", "any")
    assert not sigs.subsumed("num", "nat")


@pytest.mark.parametrize("text", [
    "listnum := [] | [num|listnum]",                     # unterminated
    "t := [] | [num|undeclared].",
    ":- sig p(X: in num).",                              # no output
    ":- sig p(X: inout num, Y: out num).",
    ":- sig p(X: in num, X: out num).",
    ":- sig p(X: in nosuch, Y: out num).",
    "t := [] | [].",                                     # duplicate constructor
])
def test_signature_errors(text):
    with pytest.raises(SignatureError):
        parse_signatures(text)


def test_print_signatures_round_trips(sigs):
    again = parse_signatures(print_signatures(sigs))
    assert again.sigs == sigs.sigs
    assert again.types == sigs.types
    assert again.subtypes == sigs.subtypes


# -- properties -------------------------------------------------------------

@settings(max_examples=200, deadline=None)
@given(items=st.lists(st.integers(-100, 100), max_size=40))
def test_length_matches_element_count(items):
    assert size_of(make_list([Int(i) for i in items]), SizeMetric.LIST_LENGTH) == len(items)


def _nested(depth):
    if depth == 0:
        return "listnum"
    return f"l{depth}"


@settings(max_examples=30, deadline=None)
@given(depth=st.integers(0, 6))
def test_schema_variables_are_distinct(depth):
    decls = ["listnum := [] | [num|listnum]."]
    for d in range(1, depth + 1):
        decls.append(f"l{d} := [] | [{_nested(d - 1)}|l{d}].")
    sigs = parse_signatures("\n".join(decls))
    s = sigs.schema(_nested(depth))
    names = s.variables()
    assert len(names) == len(set(names))
    # every list level and the numeric leaf contribute one pair
    assert len(s.pairs()) == depth + 2


@settings(max_examples=100, deadline=None)
@given(t=st.recursive(st.integers(0, 9).map(Int),
                      lambda c: st.lists(c, min_size=1, max_size=3).map(
                          lambda xs: Struct("f", tuple(xs))), max_leaves=10))
def test_depth_matches_brute_force(t):
    def depth(x):
        return 0 if isinstance(x, Int) else 1 + max(depth(a) for a in x.args)
    assert size_of(t, SizeMetric.TERM_DEPTH) == depth(t)
