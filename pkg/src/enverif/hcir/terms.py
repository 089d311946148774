"""Terms, literals, clauses and programs of the Horn-clause IR."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

NIL = "[]"
CONS = "."

BUILTINS = ("is", "=<", "<", ">", ">=", "=", "==")
COMPARISONS = ("=<", "<", ">", ">=")
ARITH_OPS = ("+", "-", "*", "/", "//", "mod")


class Term:
    __slots__ = ()


@dataclass(frozen=True)
class Var(Term):
    name: str

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class Int(Term):
    value: int

    def __str__(self):
        return str(self.value)


@dataclass(frozen=True)
class Struct(Term):
    functor: str
    args: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "args", tuple(self.args))

    @property
    def arity(self):
        return len(self.args)

    def __str__(self):
        from .printer import term_text
        return term_text(self)


def nil() -> Struct:
    return Struct(NIL)


def cons(head: Term, tail: Term) -> Struct:
    return Struct(CONS, (head, tail))


def make_list(items, tail: Term | None = None) -> Term:
    out = tail if tail is not None else nil()
    for x in reversed(list(items)):
        out = cons(x, out)
    return out


def is_nil(t) -> bool:
    return isinstance(t, Struct) and t.functor == NIL and not t.args


def is_cons(t) -> bool:
    return isinstance(t, Struct) and t.functor == CONS and len(t.args) == 2


def term_vars(t: Term):
    """Variables of a term in first-occurrence order."""
    out = []

    def go(x):
        if isinstance(x, Var):
            if x not in out:
                out.append(x)
        elif isinstance(x, Struct):
            for a in x.args:
                go(a)

    go(t)
    return out


def is_ground(t: Term) -> bool:
    return not term_vars(t)


class Literal:
    __slots__ = ()


@dataclass(frozen=True)
class Call(Literal):
    name: str
    args: tuple = ()
    pos: tuple | None = field(default=None, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "args", tuple(self.args))

    @property
    def key(self):
        return f"{self.name}/{len(self.args)}"


@dataclass(frozen=True)
class Builtin(Literal):
    op: str
    args: tuple = ()
    pos: tuple | None = field(default=None, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "args", tuple(self.args))
        if self.op not in BUILTINS:
            raise ValueError(f"unknown builtin {self.op}")
        if len(self.args) != 2:
            raise ValueError(f"builtin {self.op} takes two arguments")

    @property
    def key(self):
        return f"{self.op}/2"


@dataclass(frozen=True)
class Clause:
    name: str
    params: tuple
    body: tuple = ()
    pos: tuple | None = field(default=None, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "params", tuple(self.params))
        object.__setattr__(self, "body", tuple(self.body))

    @property
    def key(self):
        return f"{self.name}/{len(self.params)}"

    @property
    def is_fact(self):
        return not self.body

    def calls(self):
        return [lit for lit in self.body if isinstance(lit, Call)]


def pred_key(name: str, arity: int) -> str:
    return f"{name}/{arity}"


def split_key(key: str):
    name, _, arity = key.rpartition("/")
    if not name or not arity.isdigit():
        raise ValueError(f"bad predicate key {key!r}")
    return name, int(arity)


@dataclass(frozen=True)
class Program:
    """Predicates in first-definition order, each with its clauses in order."""

    predicates: Mapping = field(default_factory=dict)
    entries: tuple = ()
    warnings: tuple = field(default=(), compare=False)

    def __post_init__(self):
        object.__setattr__(self, "predicates",
                           {k: tuple(v) for k, v in dict(self.predicates).items()})
        object.__setattr__(self, "entries", tuple(self.entries))
        object.__setattr__(self, "warnings", tuple(self.warnings))

    def __hash__(self):
        return hash((tuple(self.predicates), self.entries))

    def clauses(self, key: str):
        return self.predicates.get(key, ())

    def defines(self, key: str) -> bool:
        return key in self.predicates

    def all_clauses(self):
        for cls in self.predicates.values():
            yield from cls

    def __len__(self):
        return len(self.predicates)
