"""Symbolic cost expressions.

Nodes are frozen dataclasses so they hash and compare structurally.  The
text rendering produced by :func:`render` uses the same concrete syntax the
``#pragma`` assertion parser accepts (``+ - * /``, ``power``, ``log``,
``sum``, ``prod``, ``min``, ``max``).
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Union

Number = Union[int, Fraction]


class Expr:
    """Base class of all expression nodes."""

    __slots__ = ()

    # Operator sugar keeps test fixtures and analysis code readable.
    def __add__(self, other):
        return Add(self, as_expr(other))

    def __radd__(self, other):
        return Add(as_expr(other), self)

    def __sub__(self, other):
        return Sub(self, as_expr(other))

    def __rsub__(self, other):
        return Sub(as_expr(other), self)

    def __mul__(self, other):
        return Mul(self, as_expr(other))

    def __rmul__(self, other):
        return Mul(as_expr(other), self)

    def __truediv__(self, other):
        return Div(self, as_expr(other))

    def __rtruediv__(self, other):
        return Div(as_expr(other), self)

    def __str__(self):
        return render(self)


@dataclass(frozen=True, eq=True)
class Const(Expr):
    value: Fraction

    def __post_init__(self):
        if not isinstance(self.value, Fraction):
            object.__setattr__(self, "value", Fraction(self.value))

    def __repr__(self):
        return f"Const({self.value})"


@dataclass(frozen=True, eq=True)
class Var(Expr):
    name: str

    def __repr__(self):
        return f"Var({self.name!r})"


@dataclass(frozen=True, eq=True)
class Add(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True, eq=True)
class Sub(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True, eq=True)
class Mul(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True, eq=True)
class Div(Expr):
    left: Expr
    right: Expr

    def __post_init__(self):
        if isinstance(self.right, Const) and self.right.value == 0:
            raise ZeroDivisionError("division by the constant 0")


@dataclass(frozen=True, eq=True)
class Power(Expr):
    base: Expr
    exponent: Expr


@dataclass(frozen=True, eq=True)
class Log(Expr):
    base: Expr
    arg: Expr


@dataclass(frozen=True, eq=True)
class Sum(Expr):
    index: str
    lower: Expr
    upper: Expr
    body: Expr

    def __post_init__(self):
        _check_binder(self)


@dataclass(frozen=True, eq=True)
class Prod(Expr):
    index: str
    lower: Expr
    upper: Expr
    body: Expr

    def __post_init__(self):
        _check_binder(self)


@dataclass(frozen=True, eq=True)
class ArrayMin(Expr):
    name: str


@dataclass(frozen=True, eq=True)
class ArrayMax(Expr):
    name: str


@dataclass(frozen=True, eq=True)
class Inf(Expr):
    """+inf when ``positive`` else -inf."""

    positive: bool = True

    def __repr__(self):
        return "Inf()" if self.positive else "Inf(False)"


POS_INF = Inf(True)
NEG_INF = Inf(False)
ZERO = Const(0)
ONE = Const(1)

BINARY = (Add, Sub, Mul, Div)
BINDERS = (Sum, Prod)


def _check_binder(node):
    if node.index in free_vars(node.lower) or node.index in free_vars(node.upper):
        raise ValueError(f"index {node.index!r} occurs in its own bounds")


def as_expr(x) -> Expr:
    if isinstance(x, Expr):
        return x
    if isinstance(x, (int, Fraction)):
        return Const(Fraction(x))
    if isinstance(x, str):
        return Var(x)
    raise TypeError(f"cannot convert {x!r} to an expression")


def children(e: Expr) -> tuple:
    if isinstance(e, BINARY):
        return (e.left, e.right)
    if isinstance(e, Power):
        return (e.base, e.exponent)
    if isinstance(e, Log):
        return (e.base, e.arg)
    if isinstance(e, BINDERS):
        return (e.lower, e.upper, e.body)
    return ()


def walk(e: Expr) -> Iterator[Expr]:
    yield e
    for c in children(e):
        yield from walk(c)


def free_vars(e: Expr) -> frozenset:
    """Free size variables.  ``min(a)``/``max(a)`` contribute nothing here;
    see :func:`array_refs`."""
    if isinstance(e, Var):
        return frozenset((e.name,))
    if isinstance(e, BINDERS):
        return free_vars(e.lower) | free_vars(e.upper) | (free_vars(e.body) - {e.index})
    out = frozenset()
    for c in children(e):
        out |= free_vars(c)
    return out


def array_refs(e: Expr) -> frozenset:
    return frozenset(n.name for n in walk(e) if isinstance(n, (ArrayMin, ArrayMax)))


def env_key(e: Expr) -> str:
    """Environment key used by ``evaluate`` for a leaf that needs a binding."""
    if isinstance(e, Var):
        return e.name
    if isinstance(e, ArrayMin):
        return f"min({e.name})"
    if isinstance(e, ArrayMax):
        return f"max({e.name})"
    raise TypeError(e)


def subst(e: Expr, mapping: dict) -> Expr:
    """Capture-avoiding substitution of variables by expressions."""
    if not mapping:
        return e
    if isinstance(e, Var):
        return mapping.get(e.name, e)
    if isinstance(e, BINARY):
        return type(e)(subst(e.left, mapping), subst(e.right, mapping))
    if isinstance(e, Power):
        return Power(subst(e.base, mapping), subst(e.exponent, mapping))
    if isinstance(e, Log):
        return Log(subst(e.base, mapping), subst(e.arg, mapping))
    if isinstance(e, BINDERS):
        inner = {k: v for k, v in mapping.items() if k != e.index}
        index = e.index
        body = e.body
        clash = any(index in free_vars(v) for v in inner.values())
        if clash:
            taken = set(free_vars(body))
            for v in inner.values():
                taken |= free_vars(v)
            fresh = index
            while fresh in taken:
                fresh += "_"
            body = subst(body, {index: Var(fresh)})
            index = fresh
        return type(e)(index, subst(e.lower, mapping), subst(e.upper, mapping),
                       subst(body, inner))
    return e


def rename(e: Expr, names: dict) -> Expr:
    """Rename variables and array identifiers."""
    e = subst(e, {k: Var(v) for k, v in names.items()})

    def go(n):
        if isinstance(n, ArrayMin):
            return ArrayMin(names.get(n.name, n.name))
        if isinstance(n, ArrayMax):
            return ArrayMax(names.get(n.name, n.name))
        if isinstance(n, BINARY):
            return type(n)(go(n.left), go(n.right))
        if isinstance(n, Power):
            return Power(go(n.base), go(n.exponent))
        if isinstance(n, Log):
            return Log(go(n.base), go(n.arg))
        if isinstance(n, BINDERS):
            return type(n)(n.index, go(n.lower), go(n.upper), go(n.body))
        return n

    return go(e)


# ---------------------------------------------------------------------------
# rendering

_PREC = {Add: 1, Sub: 1, Mul: 2, Div: 2}


def _fraction_text(v: Fraction) -> str:
    if v.denominator == 1:
        return str(v.numerator)
    return f"{v.numerator}/{v.denominator}"


def render(e: Expr) -> str:
    """Canonical concrete syntax; ``parse_expr(render(e))`` evaluates like ``e``
    and is structurally equal to ``e`` for every tree the parser can produce."""
    if isinstance(e, Const):
        return _fraction_text(e.value)
    if isinstance(e, Var):
        return e.name
    if isinstance(e, Inf):
        return "inf" if e.positive else "-inf"
    if isinstance(e, BINARY):
        op = {Add: "+", Sub: "-", Mul: "*", Div: "/"}[type(e)]
        p = _PREC[type(e)]
        left = _wrap(e.left, p, right_side=False)
        right = _wrap(e.right, p, right_side=True)
        return f"{left} {op} {right}"
    if isinstance(e, Power):
        return f"power({render(e.base)}, {render(e.exponent)})"
    if isinstance(e, Log):
        return f"log({render(e.base)}, {render(e.arg)})"
    if isinstance(e, Sum):
        return f"sum({e.index}, {render(e.lower)}, {render(e.upper)}, {render(e.body)})"
    if isinstance(e, Prod):
        return f"prod({e.index}, {render(e.lower)}, {render(e.upper)}, {render(e.body)})"
    if isinstance(e, ArrayMin):
        return f"min({e.name})"
    if isinstance(e, ArrayMax):
        return f"max({e.name})"
    raise TypeError(f"not an expression: {e!r}")


def _wrap(e: Expr, parent_prec: int, right_side: bool) -> str:
    text = render(e)
    if isinstance(e, BINARY):
        p = _PREC[type(e)]
        # left-associative grammar: equal precedence on the right needs parens
        if p < parent_prec or (right_side and p == parent_prec):
            return f"({text})"
        return text
    if isinstance(e, Const) and e.value.denominator != 1:
        # a bare p/q would re-associate with its neighbours
        return f"({text})"
    return text
