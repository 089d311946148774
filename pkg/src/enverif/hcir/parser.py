"""Recursive-descent parser for the Prolog-like HC IR syntax.

Clauses end with ``.``; ``%`` starts a line comment; ``:- entry p/2.``
declares entry points.  Arithmetic operators are accepted inside terms so
that ``is/2`` and comparisons can carry expressions.
"""
from __future__ import annotations

import re
from dataclasses import dataclass

from .terms import (BUILTINS, Builtin, Call, Clause, Int, Program, Struct, Var,
                    make_list, nil)


class HCParseError(ValueError):
    def __init__(self, message, line, col):
        super().__init__(f"{line}:{col}: {message}")
        self.line = line
        self.col = col
        self.message = message


_TOKEN_RE = re.compile(r"""
    (?P<ws>\s+|%[^\n]*)
  | (?P<neck>:-)
  | (?P<op>=<|>=|==|//|[=<>+\-*/])
  | (?P<end>\.(?=\s|%|$))
  | (?P<punct>[(),\[\]|])
  | (?P<int>\d+)
  | (?P<var>[A-Z_][A-Za-z0-9_]*)
  | (?P<atom>[a-z][A-Za-z0-9_]*)
  | (?P<quoted>'(?:[^'\\]|\\.)*')
""", re.VERBOSE)


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int
    col: int


def tokenize(text: str):
    out = []
    i, line, line_start = 0, 1, 0
    while i < len(text):
        m = _TOKEN_RE.match(text, i)
        if not m:
            raise HCParseError(f"unexpected character {text[i]!r}", line, i - line_start + 1)
        kind = m.lastgroup
        tok_text = m.group()
        if kind != "ws":
            if kind == "quoted":
                kind, tok_text = "atom", re.sub(r"\\(.)", r"\1", tok_text[1:-1])
            out.append(Token(kind, tok_text, line, i - line_start + 1))
        newlines = m.group().count("\n")
        if newlines:
            line += newlines
            line_start = i + m.group().rfind("\n") + 1
        i = m.end()
    out.append(Token("eof", "", line, i - line_start + 1))
    return out


_ADD_OPS = ("+", "-")
_MUL_OPS = ("*", "/", "//", "mod")


class _Parser:
    def __init__(self, text):
        self.toks = tokenize(text)
        self.i = 0

    @property
    def tok(self):
        return self.toks[self.i]

    def error(self, msg, tok=None):
        tok = tok or self.tok
        raise HCParseError(msg, tok.line, tok.col)

    def next(self):
        t = self.tok
        self.i += 1
        return t

    def at(self, kind, text=None):
        t = self.tok
        return t.kind == kind and (text is None or t.text == text)

    def expect(self, kind, text=None):
        if not self.at(kind, text):
            want = text or {"end": ".", "neck": ":-"}.get(kind, kind)
            if self.tok.kind == "eof":
                self.error(f"unterminated clause: expected {want!r}")
            self.error(f"expected {want!r}, found {self.tok.text!r}")
        return self.next()

    # terms -----------------------------------------------------------------

    def expr(self):
        left = self.mul()
        while self.tok.kind == "op" and self.tok.text in _ADD_OPS:
            op = self.next().text
            left = Struct(op, (left, self.mul()))
        return left

    def _mul_op(self):
        t = self.tok
        return (t.kind == "op" and t.text in ("*", "/", "//")) or (t.kind == "atom" and t.text == "mod")

    def mul(self):
        left = self.unary()
        while self._mul_op():
            op = self.next().text
            left = Struct(op, (left, self.unary()))
        return left

    def unary(self):
        if self.at("op", "-"):
            self.next()
            if self.at("int"):
                return Int(-int(self.next().text))
            return Struct("-", (self.unary(),))
        if self.at("op", "+"):
            self.next()
            return self.unary()
        return self.primary()

    def primary(self):
        t = self.tok
        if t.kind == "int":
            self.next()
            return Int(int(t.text))
        if t.kind == "var":
            self.next()
            return Var(t.text)
        if t.kind == "atom":
            self.next()
            if self.at("punct", "("):
                return Struct(t.text, self.args())
            return Struct(t.text)
        if self.at("punct", "["):
            return self.list_term()
        if self.at("punct", "("):
            self.next()
            e = self.expr()
            self.expect("punct", ")")
            return e
        if t.kind == "eof":
            self.error("unterminated clause")
        self.error(f"unexpected {t.text!r}")

    def args(self):
        self.expect("punct", "(")
        out = [self.expr()]
        while self.at("punct", ","):
            self.next()
            out.append(self.expr())
        self.expect("punct", ")")
        return tuple(out)

    def list_term(self):
        self.expect("punct", "[")
        if self.at("punct", "]"):
            self.next()
            return nil()
        items = [self.expr()]
        while self.at("punct", ","):
            self.next()
            items.append(self.expr())
        tail = None
        if self.at("punct", "|"):
            self.next()
            tail = self.expr()
        self.expect("punct", "]")
        return make_list(items, tail)

    # clauses ---------------------------------------------------------------

    def literal(self):
        start = self.tok
        if start.kind == "atom" and start.text == "is":
            self.error("'is' needs a left operand")
        left = self.expr()
        t = self.tok
        if (t.kind == "op" and t.text in BUILTINS) or (t.kind == "atom" and t.text == "is"):
            self.next()
            right = self.expr()
            return Builtin(t.text, (left, right), pos=(start.line, start.col))
        if isinstance(left, Struct) and (left.functor not in ("+", "-", "*", "/", "//", "mod")
                                         or len(left.args) != 2):
            if left.functor in ("[]", "."):
                self.error("a list is not a goal", start)
            return Call(left.functor, left.args, pos=(start.line, start.col))
        self.error("expected a goal", start)

    def directive(self):
        start = self.expect("neck")
        name = self.expect("atom")
        if name.text != "entry":
            self.error(f"unknown directive {name.text!r}", name)
        keys = [self.pred_indicator()]
        while self.at("punct", ","):
            self.next()
            keys.append(self.pred_indicator())
        self.expect("end")
        return keys, start

    def pred_indicator(self):
        name = self.expect("atom").text
        self.expect("op", "/")
        arity = self.expect("int").text
        return f"{name}/{int(arity)}"

    def clause(self):
        start = self.tok
        if start.kind != "atom":
            self.error("clause head must start with a predicate name")
        self.next()
        params = self.args() if self.at("punct", "(") else ()
        body = []
        if self.at("neck"):
            self.next()
            body.append(self.literal())
            while self.at("punct", ","):
                self.next()
                body.append(self.literal())
        self.expect("end")
        return Clause(start.text, params, tuple(body), pos=(start.line, start.col))

    def program(self):
        preds: dict = {}
        entries = []
        warnings = []
        last_key = None
        while not self.at("eof"):
            if self.at("neck"):
                keys, _ = self.directive()
                entries += keys
                continue
            c = self.clause()
            if c.key in preds and last_key != c.key:
                warnings.append(f"{c.pos[0]}:{c.pos[1]}: clauses of {c.key} are not contiguous")
            preds.setdefault(c.key, []).append(c)
            last_key = c.key
        return Program(preds, tuple(entries), tuple(warnings))


def parse_program(text: str) -> Program:
    return _Parser(text).program()


def parse_term(text: str):
    p = _Parser(text)
    t = p.expr()
    p.expect("eof")
    return t


def parse_clause(text: str) -> Clause:
    p = _Parser(text)
    c = p.clause()
    p.expect("eof")
    return c
