"""Text rendering of HC IR programs (inverse of the parser)."""
from __future__ import annotations

import re

from .terms import (NIL, Builtin, Call, Clause, Int, Program, Struct,
                    Var, is_cons, is_nil)

_PREC = {"+": 500, "-": 500, "*": 400, "/": 400, "//": 400, "mod": 400}
_ATOM_RE = re.compile(r"[a-z][A-Za-z0-9_]*\Z")


def _atom(name: str) -> str:
    if _ATOM_RE.match(name) or name == NIL:
        return name
    return "'" + name.replace("\\", "\\\\").replace("'", "\\'") + "'"


def _prec(t) -> int:
    if isinstance(t, Struct) and len(t.args) == 2 and t.functor in _PREC:
        return _PREC[t.functor]
    if isinstance(t, Struct) and len(t.args) == 1 and t.functor == "-":
        return 200
    if isinstance(t, Int) and t.value < 0:
        return 200
    return 0


def _wrap(t, limit) -> str:
    s = term_text(t)
    return f"({s})" if _prec(t) > limit else s


def term_text(t) -> str:
    if isinstance(t, Var):
        return t.name
    if isinstance(t, Int):
        return str(t.value)
    if is_nil(t):
        return NIL
    if is_cons(t):
        items = []
        while is_cons(t):
            items.append(term_text(t.args[0]))
            t = t.args[1]
        tail = "" if is_nil(t) else "|" + term_text(t)
        return "[" + ",".join(items) + tail + "]"
    if isinstance(t, Struct):
        if len(t.args) == 2 and t.functor in _PREC:
            p = _PREC[t.functor]
            op = f" {t.functor} " if t.functor == "mod" else t.functor
            right = _wrap(t.args[1], p - 1)
            if right.startswith("-"):
                right = f"({right})"
            return _wrap(t.args[0], p) + op + right
        if len(t.args) == 1 and t.functor == "-":
            inner = term_text(t.args[0])
            if _prec(t.args[0]) or isinstance(t.args[0], Int):
                inner = f"({inner})"
            return "-" + inner
        if not t.args:
            return _atom(t.functor)
        return _atom(t.functor) + "(" + ",".join(term_text(a) for a in t.args) + ")"
    raise TypeError(f"not a term: {t!r}")


def literal_text(lit) -> str:
    if isinstance(lit, Builtin):
        sep = " is " if lit.op == "is" else lit.op
        return term_text(lit.args[0]) + sep + term_text(lit.args[1])
    if isinstance(lit, Call):
        if not lit.args:
            return _atom(lit.name)
        return _atom(lit.name) + "(" + ",".join(term_text(a) for a in lit.args) + ")"
    raise TypeError(f"not a literal: {lit!r}")


def clause_text(c: Clause) -> str:
    head = _atom(c.name)
    if c.params:
        head += "(" + ",".join(term_text(a) for a in c.params) + ")"
    if not c.body:
        return head + "."
    return head + " :-\n    " + ",\n    ".join(literal_text(b) for b in c.body) + "."


def print_program(p: Program) -> str:
    chunks = []
    if p.entries:
        chunks.append("\n".join(f":- entry {e}." for e in p.entries))
    for clauses in p.predicates.values():
        chunks.append("\n".join(clause_text(c) for c in clauses))
    return "\n\n".join(chunks) + ("\n" if chunks else "")
