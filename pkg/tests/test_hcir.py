import pytest
from hypothesis import given, settings, strategies as st

from conftest import fixture_text

from enverif.costmodel import load_model
from enverif.hcir import (Builtin, Call, Clause, HCParseError, Int, Program, Struct, Var,
                          call_graph_sccs, make_list, parse_clause, parse_program,
                          parse_term, print_program, validate)

APPEND = """
append([], S, S).
append([E|R], S, [E|T]) :-
    append(R, S, T).
"""

FACT = """
fact(N, Fact) :- N =< 0, Fact = 1.
fact(N, Fact) :- N > 0, N1 is N - 1, fact(N1, Fact1), Fact is N * Fact1.
"""


def test_parse_append():
    p = parse_program(APPEND)
    assert list(p.predicates) == ["append/3"]
    c1, c2 = p.clauses("append/3")
    assert c1.is_fact
    assert c2.body == (Call("append", (Var("R"), Var("S"), Var("T"))),)
    assert c2.params[0] == make_list([Var("E")], Var("R"))


def test_parse_empty_program():
    p = parse_program("")
    assert len(p) == 0
    assert print_program(p) == ""


def test_parse_fact_body_lengths():
    p = parse_program(FACT)
    assert [len(c.body) for c in p.clauses("fact/2")] == [2, 4]
    first = p.clauses("fact/2")[1].body
    assert first[0] == Builtin(">", (Var("N"), Int(0)))
    assert first[1] == Builtin("is", (Var("N1"), Struct("-", (Var("N"), Int(1)))))


def test_parse_keeps_positions_and_comments():
    p = parse_program("% header\np(X) :-\n    q(X). % trailing\nq(_).\n")
    clause = p.clauses("p/1")[0]
    assert clause.pos[0] == 2
    assert clause.body[0].pos[0] == 3


@pytest.mark.parametrize("text, line", [
    ("p(X) :- q(X)", 1),
    ("p(X) :- q(X.\n", 1),
    ("p(X).\nq(Y) :- , r.\n", 2),
    ("p(X) :- X is .\n", 1),
])
def test_syntax_errors_report_line(text, line):
    with pytest.raises(HCParseError) as info:
        parse_program(text)
    assert info.value.line == line


def test_interleaved_definitions_warn_but_parse():
    p = parse_program("p(1).\nq(2).\np(3).\n")
    assert len(p.clauses("p/1")) == 2
    assert p.warnings


def test_print_round_trips_fixtures():
    for name in ("append", "fact", "nrev", "biquad"):
        p = parse_program(fixture_text(f"{name}.hcir"))
        assert parse_program(print_program(p)) == p


def test_zero_arity_call_round_trips():
    p = parse_program("main :- init.\ninit.\n")
    assert p.clauses("main/0")[0].body == (Call("init", ()),)
    assert parse_program(print_program(p)) == p


def test_sccs_of_small_programs():
    (scc,) = call_graph_sccs(parse_program(APPEND))
    assert scc.preds == ("append/3",) and scc.recursive
    (scc,) = call_graph_sccs(parse_program(FACT))
    assert scc.recursive
    sccs = call_graph_sccs(parse_program("p :- q.\nq.\n"))
    assert [s.preds for s in sccs] == [("q/0",), ("p/0",)]
    assert not any(s.recursive for s in sccs)


def test_validate_examples():
    model = load_model('{"model_name": "t", "unit": "nJ", "instructions": {}}')
    assert validate(parse_program(APPEND), model) == []
    (d,) = validate(parse_program("p(X) :- foo(X)."), model)
    assert d.code == "undefined" and "foo/1" in d.message
    (d,) = validate(parse_program("p(X, X) :- q(X).\nq(_)."), model)
    assert d.code == "repeated-parameter"
    (d,) = validate(parse_program("p(X) :- q(X, X).\nq(_)."), model)
    assert d.code == "arity-mismatch"


def test_validate_accepts_model_leaves():
    model = load_model('{"model_name": "t", "unit": "nJ", '
                       '"instructions": {"add/3": {"cost": 2}}}')
    assert validate(parse_program("p(X, Y) :- add(X, 1, Y)."), model) == []


def test_builtins_are_a_fixed_set():
    with pytest.raises(ValueError):
        Builtin("foo", (Int(1), Int(2)))
    c = parse_clause("p(X) :- foo(X, 1), X >= 2.")
    assert isinstance(c.body[0], Call) and isinstance(c.body[1], Builtin)


def test_parse_term_lists():
    assert parse_term("[1,2|T]") == make_list([Int(1), Int(2)], Var("T"))
    assert parse_term("[]") == make_list([])


# -- properties -------------------------------------------------------------

VARS = ["X", "Y", "Z", "N1"]
PREDS = [f"p{i}" for i in range(8)]


def terms(depth=2):
    leaf = st.one_of(st.sampled_from(VARS).map(Var), st.integers(-50, 50).map(Int),
                     st.just(make_list([])))
    if depth == 0:
        return leaf
    sub = terms(depth - 1)
    return st.one_of(
        leaf,
        st.tuples(sub, sub).map(lambda t: make_list([t[0]], t[1])),
        st.tuples(st.sampled_from(["f", "g"]), st.lists(sub, min_size=1, max_size=2)).map(
            lambda t: Struct(t[0], tuple(t[1]))),
    )


arith = st.recursive(
    st.one_of(st.sampled_from(VARS).map(Var), st.integers(0, 9).map(Int)),
    lambda c: st.tuples(st.sampled_from(["+", "-", "*"]), c, c).map(
        lambda t: Struct(t[0], (t[1], t[2]))),
    max_leaves=4)

literals = st.one_of(
    st.tuples(st.sampled_from(PREDS), st.lists(terms(), max_size=3)).map(
        lambda t: Call(t[0], tuple(t[1]))),
    st.tuples(st.sampled_from(VARS), arith).map(lambda t: Builtin("is", (Var(t[0]), t[1]))),
    st.tuples(st.sampled_from(["<", "=<", ">", ">=", "==", "="]), st.sampled_from(VARS),
              st.integers(0, 9)).map(lambda t: Builtin(t[0], (Var(t[1]), Int(t[2])))),
)


@st.composite
def programs(draw):
    preds = {}
    for name in draw(st.lists(st.sampled_from(PREDS), min_size=1, max_size=6, unique=True)):
        arity = draw(st.integers(0, 3))
        clauses = []
        for _ in range(draw(st.integers(1, 3))):
            params = tuple(draw(terms()) for _ in range(arity))
            body = tuple(draw(st.lists(literals, max_size=4)))
            clauses.append(Clause(name, params, body))
        preds[f"{name}/{arity}"] = clauses
    return Program(preds)


@settings(max_examples=150, deadline=None)
@given(p=programs())
def test_print_parse_round_trip(p):
    assert parse_program(print_program(p)) == p


def _reaches(p, a, b):
    seen, todo = set(), [a]
    while todo:
        x = todo.pop()
        for c in p.clauses(x):
            for lit in c.calls():
                if p.defines(lit.key) and lit.key not in seen:
                    seen.add(lit.key)
                    todo.append(lit.key)
    return b in seen


@settings(max_examples=100, deadline=None)
@given(p=programs())
def test_scc_order_is_reverse_topological(p):
    sccs = call_graph_sccs(p)
    assert sorted(k for s in sccs for k in s.preds) == sorted(p.predicates)
    index = {k: i for i, s in enumerate(sccs) for k in s.preds}
    for a in p.predicates:
        for b in p.predicates:
            ab, ba = _reaches(p, a, b), _reaches(p, b, a)
            if a != b and ab and ba:
                assert index[a] == index[b]
            elif ab and index[a] != index[b]:
                # callees come first
                assert index[b] < index[a]
    for s in sccs:
        assert s.recursive == (len(s.preds) > 1 or _reaches(p, s.preds[0], s.preds[0]))
