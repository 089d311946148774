"""The ``#pragma`` energy assertion language.

::

    #pragma <status> <fn>(<args>) : [<precond> ==>] <cost-bounds>

``precond`` is ``g <= x``, ``x <= g`` or ``g <= x && y <= g`` where ``g``
mentions no scope argument.  ``cost-bounds`` is ``e <= energy``,
``energy <= e`` or both joined by ``&&``.  Either group may be wrapped in
parentheses.  The status token may be omitted and defaults to ``check``.
"""
from __future__ import annotations

import enum
import re
from dataclasses import dataclass

from ..costfn.expr import (Add, ArrayMax, ArrayMin, Const, Div, Expr, Log, Mul,
                           Power, Prod, Sub, Sum, Var, free_vars, render)

ENERGY = "energy"
_FUNCTIONS = ("sum", "prod", "power", "log", "min", "max")


class PragmaSyntaxError(ValueError):
    def __init__(self, message, col=None):
        where = f"column {col}: " if col is not None else ""
        super().__init__(where + message)
        self.col = col


class Status(enum.Enum):
    CHECK = "check"
    TRUST = "trust"
    TRUE_ = "true"
    CHECKED = "checked"
    FALSE_ = "false"

    def __str__(self):
        return self.value


_STATUS_WORDS = {s.value: s for s in Status}

_TOKEN_RE = re.compile(r"""
    (?P<ws>\s+)
  | (?P<pragma>\#pragma\b)
  | (?P<op>==>|<=|&&|[-+*/(),:])
  | (?P<int>\d+)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
""", re.VERBOSE)


@dataclass(frozen=True)
class Tok:
    kind: str
    text: str
    col: int


def _tokenize(text):
    out, i = [], 0
    while i < len(text):
        m = _TOKEN_RE.match(text, i)
        if not m:
            raise PragmaSyntaxError(f"unexpected character {text[i]!r}", i + 1)
        if m.lastgroup != "ws":
            out.append(Tok(m.lastgroup, m.group(), i + 1))
        i = m.end()
    return out


class _ExprParser:
    """Expression sub-language over a token slice."""

    def __init__(self, toks, end_col=None):
        self.toks = toks
        self.i = 0
        self.end_col = end_col

    def peek(self, text=None, kind=None):
        if self.i >= len(self.toks):
            return False
        t = self.toks[self.i]
        return (text is None or t.text == text) and (kind is None or t.kind == kind)

    def next(self):
        if self.i >= len(self.toks):
            raise PragmaSyntaxError("unexpected end of expression", self.end_col)
        t = self.toks[self.i]
        self.i += 1
        return t

    def expect(self, text):
        t = self.next()
        if t.text != text:
            raise PragmaSyntaxError(f"expected {text!r}, found {t.text!r}", t.col)
        return t

    def ident(self):
        t = self.next()
        if t.kind != "ident":
            raise PragmaSyntaxError(f"expected an identifier, found {t.text!r}", t.col)
        if t.text == ENERGY:
            raise PragmaSyntaxError("'energy' cannot be used inside an expression", t.col)
        return t.text

    def expr(self):
        left = self.mult()
        while self.peek("+") or self.peek("-"):
            op = self.next().text
            right = self.mult()
            left = Add(left, right) if op == "+" else Sub(left, right)
        return left

    def mult(self):
        left = self.unary()
        while self.peek("*") or self.peek("/"):
            op = self.next().text
            right = self.unary()
            if op == "*":
                left = Mul(left, right)
            else:
                if right == Const(0):
                    raise PragmaSyntaxError("division by the constant 0")
                left = Div(left, right)
        return left

    def unary(self):
        t = self.next()
        if t.text == "+":
            return self.unary()
        if t.text == "-":
            if self.peek(kind="int"):
                return Const(-int(self.next().text))
            return Mul(Const(-1), self.unary())
        if t.kind == "int":
            return Const(int(t.text))
        if t.text == "(":
            e = self.expr()
            self.expect(")")
            return e
        if t.kind == "ident":
            if t.text in _FUNCTIONS and self.peek("("):
                return self.call(t.text)
            self.i -= 1
            return Var(self.ident())
        raise PragmaSyntaxError(f"unexpected {t.text!r}", t.col)

    def call(self, name):
        self.expect("(")
        if name in ("min", "max"):
            arr = self.ident()
            self.expect(")")
            return ArrayMin(arr) if name == "min" else ArrayMax(arr)
        if name in ("sum", "prod"):
            index = self.ident()
            self.expect(",")
            lo = self.expr()
            self.expect(",")
            hi = self.expr()
            self.expect(",")
            body = self.expr()
            self.expect(")")
            try:
                return (Sum if name == "sum" else Prod)(index, lo, hi, body)
            except ValueError as exc:
                raise PragmaSyntaxError(str(exc)) from exc
        a = self.expr()
        self.expect(",")
        b = self.expr()
        self.expect(")")
        return Power(a, b) if name == "power" else Log(a, b)

    def done(self):
        if self.i < len(self.toks):
            t = self.toks[self.i]
            raise PragmaSyntaxError(f"unexpected {t.text!r}", t.col)


def parse_expr(text: str) -> Expr:
    """Parse a cost expression in the assertion grammar."""
    p = _ExprParser(_tokenize(text), len(text) + 1)
    e = p.expr()
    p.done()
    return e


@dataclass(frozen=True)
class Precond:
    """``lower <= lower_id`` and/or ``upper_id <= upper``."""

    lower: Expr | None = None
    lower_id: str | None = None
    upper_id: str | None = None
    upper: Expr | None = None

    def __post_init__(self):
        if (self.lower is None) != (self.lower_id is None):
            raise ValueError("lower condition needs both an expression and an identifier")
        if (self.upper is None) != (self.upper_id is None):
            raise ValueError("upper condition needs both an expression and an identifier")
        if self.lower is None and self.upper is None:
            raise ValueError("empty precondition")

    def conjuncts(self):
        out = []
        if self.lower is not None:
            out.append(f"{render(self.lower)} <= {self.lower_id}")
        if self.upper is not None:
            out.append(f"{self.upper_id} <= {render(self.upper)}")
        return out

    def __str__(self):
        return " && ".join(self.conjuncts())


@dataclass(frozen=True)
class CostBounds:
    lower: Expr | None = None
    upper: Expr | None = None

    def __post_init__(self):
        if self.lower is None and self.upper is None:
            raise ValueError("at least one cost bound is required")

    def conjuncts(self):
        out = []
        if self.lower is not None:
            out.append(f"{render(self.lower)} <= {ENERGY}")
        if self.upper is not None:
            out.append(f"{ENERGY} <= {render(self.upper)}")
        return out

    def __str__(self):
        return " && ".join(self.conjuncts())


@dataclass(frozen=True)
class XCAssertion:
    status: Status
    name: str
    args: tuple
    bounds: CostBounds
    precond: Precond | None = None

    def __post_init__(self):
        object.__setattr__(self, "args", tuple(self.args))
        if len(set(self.args)) != len(self.args):
            raise ValueError(f"scope of {self.name} repeats an argument")
        if ENERGY in self.args:
            raise ValueError("'energy' cannot be a scope argument")
        if self.precond is not None:
            for e, ident in ((self.precond.lower, self.precond.lower_id),
                             (self.precond.upper, self.precond.upper_id)):
                if e is None:
                    continue
                if ident not in self.args:
                    raise ValueError(f"precondition names {ident}, which is not in the scope")
                used = (free_vars(e) | _arrays(e)) & set(self.args)
                if used:
                    raise ValueError("precondition bound mentions scope argument "
                                     + ", ".join(sorted(used)))

    @property
    def scope(self):
        return self.name, self.args

    def with_status(self, status):
        return XCAssertion(status, self.name, self.args, self.bounds, self.precond)


def _arrays(e):
    from ..costfn.expr import array_refs
    return array_refs(e)


# ---------------------------------------------------------------------------
# pragma parsing

def _matching(toks, start):
    depth = 0
    for j in range(start, len(toks)):
        if toks[j].text == "(":
            depth += 1
        elif toks[j].text == ")":
            depth -= 1
            if depth == 0:
                return j
    return None


def _strip_parens(toks):
    while toks and toks[0].text == "(" and _matching(toks, 0) == len(toks) - 1:
        toks = toks[1:-1]
    return toks


def _split_top(toks, text):
    parts, cur, depth = [], [], 0
    for t in toks:
        if t.text == "(":
            depth += 1
        elif t.text == ")":
            depth -= 1
        if t.text == text and depth == 0:
            parts.append(cur)
            cur = []
        else:
            cur.append(t)
    parts.append(cur)
    return parts


def _parse_slice(toks, end_col):
    if not toks:
        raise PragmaSyntaxError("missing expression", end_col)
    p = _ExprParser(toks, end_col)
    e = p.expr()
    p.done()
    return e


def _single_ident(toks):
    return toks[0].text if len(toks) == 1 and toks[0].kind == "ident" else None


def _conditions(toks, what, end_col):
    toks = _strip_parens(toks)
    if not toks:
        raise PragmaSyntaxError(f"empty {what}", end_col)
    out = []
    for part in _split_top(toks, "&&"):
        part = _strip_parens(part)
        sides = _split_top(part, "<=")
        if len(sides) != 2:
            col = part[0].col if part else end_col
            raise PragmaSyntaxError(f"each {what} conjunct must be a single '<=' comparison", col)
        out.append((sides[0], sides[1], part[0].col if part else end_col))
    return out


def _parse_bounds(toks, end_col) -> CostBounds:
    lower = upper = None
    for left, right, col in _conditions(toks, "cost bound", end_col):
        if _single_ident(right) == ENERGY and _single_ident(left) != ENERGY:
            if lower is not None or upper is not None:
                raise PragmaSyntaxError("the lower cost bound must come first", col)
            lower = _parse_slice(left, col)
        elif _single_ident(left) == ENERGY and _single_ident(right) != ENERGY:
            if upper is not None:
                raise PragmaSyntaxError("duplicate upper cost bound", col)
            upper = _parse_slice(right, col)
        else:
            raise PragmaSyntaxError("cost bound must compare an expression with 'energy'", col)
    return CostBounds(lower, upper)


def _parse_precond(toks, args, end_col) -> Precond:
    lower = lower_id = upper = upper_id = None
    for left, right, col in _conditions(toks, "precondition", end_col):
        l_id, r_id = _single_ident(left), _single_ident(right)
        if r_id in args and l_id not in args:
            if lower is not None or upper is not None:
                raise PragmaSyntaxError("the lower precondition must come first", col)
            lower, lower_id = _parse_slice(left, col), r_id
            bound = lower
        elif l_id in args and r_id not in args:
            if upper is not None:
                raise PragmaSyntaxError("duplicate upper precondition", col)
            upper, upper_id = _parse_slice(right, col), l_id
            bound = upper
        elif l_id in args and r_id in args:
            raise PragmaSyntaxError("precondition bound mentions a scope argument", col)
        else:
            raise PragmaSyntaxError("precondition must bound a scope argument", col)
        used = (free_vars(bound) | _arrays(bound)) & set(args)
        if used:
            raise PragmaSyntaxError("precondition bound mentions scope argument "
                                    + ", ".join(sorted(used)), col)
    return Precond(lower, lower_id, upper_id, upper)


def parse_pragma(line: str) -> XCAssertion:
    toks = _tokenize(line)
    end_col = len(line) + 1
    if not toks or toks[0].kind != "pragma":
        raise PragmaSyntaxError("assertion must start with #pragma", 1)
    i = 1
    status = Status.CHECK
    if (i + 1 < len(toks) and toks[i].kind == "ident" and toks[i].text in _STATUS_WORDS
            and toks[i + 1].kind == "ident"):
        status = _STATUS_WORDS[toks[i].text]
        i += 1
    if i >= len(toks) or toks[i].kind != "ident":
        raise PragmaSyntaxError("expected the function name", toks[i].col if i < len(toks) else end_col)
    name = toks[i].text
    i += 1
    if i >= len(toks) or toks[i].text != "(":
        raise PragmaSyntaxError("expected '(' after the function name",
                                toks[i].col if i < len(toks) else end_col)
    close = _matching(toks, i)
    if close is None:
        raise PragmaSyntaxError("unbalanced parentheses in the scope", toks[i].col)
    args = []
    for part in _split_top(toks[i + 1:close], ","):
        if not part and close == i + 1:
            break
        if len(part) != 1 or part[0].kind != "ident":
            raise PragmaSyntaxError("scope arguments must be identifiers", toks[i].col)
        args.append(part[0].text)
    i = close + 1
    if i >= len(toks) or toks[i].text != ":":
        raise PragmaSyntaxError("expected ':' after the scope", toks[i].col if i < len(toks) else end_col)
    body = toks[i + 1:]
    if not body:
        raise PragmaSyntaxError("missing assertion body", end_col)
    arrows = [k for k, t in enumerate(body) if t.text == "==>"]
    if len(arrows) > 1:
        raise PragmaSyntaxError("more than one '==>'", body[arrows[1]].col)
    precond = None
    if arrows:
        k = arrows[0]
        precond = _parse_precond(body[:k], args, body[k].col)
        body = body[k + 1:]
    bounds = _parse_bounds(body, end_col)
    try:
        return XCAssertion(status, name, tuple(args), bounds, precond)
    except ValueError as exc:
        raise PragmaSyntaxError(str(exc)) from exc


def print_pragma(a: XCAssertion) -> str:
    head = f"#pragma {a.status} {a.name}({','.join(a.args)}) : "
    body = f"({a.bounds})"
    if a.precond is not None:
        body = f"({a.precond}) ==> {body}"
    return head + body
