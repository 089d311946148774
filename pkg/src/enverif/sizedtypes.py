"""Regular types, sized type schemas, size metrics and predicate signatures.

Signature files declare types and per-predicate argument modes::

    % comments start with a percent sign
    listnum := [] | [num|listnum].
    :- subtype nat < num.
    :- sig append(A: in listnum length, B: in listnum length, C: out listnum length).
    :- sig fact(N: in num value, F: out num).

An argument is ``Name: mode type [metric]`` with mode ``in``/``out`` and
metric ``value``, ``length``, ``depth`` or ``none``.  The metric defaults to
``value`` for numeric types, ``length`` for recursive types and ``none``
otherwise.  The argument name doubles as its size variable.
"""
from __future__ import annotations

import enum
import re
from dataclasses import dataclass, field
from typing import Mapping

import networkx as nx

from .hcir.parser import HCParseError, parse_term
from .hcir.terms import Int, Struct, Var, is_cons, is_nil

NUMERIC = ("num", "int", "nat")
PRIMITIVES = NUMERIC + ("any",)
_BUILTIN_SUBTYPES = {("nat", "int"), ("int", "num"), ("nat", "num")}
_GREEK = "αβγδεζηθικλμνξοπρστυφχψω"


class SignatureError(ValueError):
    pass


class UnsupportedType(SignatureError):
    pass


class SizeError(ValueError):
    pass


class SizeMetric(enum.Enum):
    INT_VALUE = "value"
    LIST_LENGTH = "length"
    TERM_DEPTH = "depth"

    def __str__(self):
        return self.value


class Mode(enum.Enum):
    IN = "in"
    OUT = "out"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class RegularType:
    """``name := alt | alt``; each alternative is a constructor pattern whose
    arguments are type names (``[num|listnum]`` is ``'.'(num, listnum)``)."""

    name: str
    alternatives: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "alternatives", tuple(self.alternatives))
        heads = [(a.functor, len(a.args)) for a in self.alternatives]
        if len(set(heads)) != len(heads):
            raise SignatureError(f"type {self.name} has two alternatives with the same constructor")

    def referenced(self):
        out = []
        for alt in self.alternatives:
            for a in alt.args:
                if a.functor not in out:
                    out.append(a.functor)
        return out

    @property
    def recursive(self):
        return self.name in self.referenced()

    def __str__(self):
        from .hcir.printer import term_text
        return f"{self.name} := " + " | ".join(term_text(a) for a in self.alternatives) + "."


def _check_alternative(alt, type_name):
    if not isinstance(alt, Struct):
        raise SignatureError(f"type {type_name}: alternatives must be constructor patterns")
    for a in alt.args:
        if not (isinstance(a, Struct) and not a.args):
            raise SignatureError(f"type {type_name}: constructor arguments must be type names")
    return alt


@dataclass(frozen=True)
class SizedSchema:
    """A type annotated with (lower, upper) size variables.  ``bounds`` is
    None for non-recursive compound types, which have no size of their own."""

    type_name: str
    bounds: tuple | None = None
    children: tuple = ()

    def pairs(self):
        out = [self.bounds] if self.bounds else []
        for c in self.children:
            out += c.pairs()
        return out

    def variables(self):
        return [v for pair in self.pairs() for v in pair]

    def __str__(self):
        s = self.type_name
        if self.bounds:
            s += f"^({self.bounds[0]},{self.bounds[1]})"
        if self.children:
            s += "".join(f"({c})" for c in self.children)
        return s


class _Fresh:
    def __init__(self):
        self.n = 0

    def __call__(self):
        i, self.n = self.n, self.n + 1
        base = _GREEK[i % len(_GREEK)]
        return base if i < len(_GREEK) else f"{base}{i // len(_GREEK)}"


def _check_recursion(types: Mapping):
    g = nx.DiGraph()
    for t in types.values():
        g.add_node(t.name)
        for r in t.referenced():
            if r in types:
                g.add_edge(t.name, r)
    for comp in nx.strongly_connected_components(g):
        if len(comp) > 1:
            raise UnsupportedType("mutually recursive types: " + ", ".join(sorted(comp)))


def derive_schema(t, types: Mapping | None = None, fresh=None) -> SizedSchema:
    """Sized schema with fresh variable pairs, e.g. listnum^(α,β)(num^(γ,δ))."""
    types = dict(types or {})
    if isinstance(t, RegularType):
        types.setdefault(t.name, t)
        name = t.name
    else:
        name = t
    _check_recursion(types)
    fresh = fresh or _Fresh()

    def build(n, stack):
        if n in PRIMITIVES:
            return SizedSchema(n, (fresh(), fresh()))
        if n not in types:
            raise SignatureError(f"undeclared type {n}")
        rt = types[n]
        bounds = (fresh(), fresh()) if rt.recursive else None
        kids = tuple(build(r, stack | {n}) for r in rt.referenced() if r != n)
        return SizedSchema(n, bounds, kids)

    return build(name, frozenset())


def size_of(term, metric: SizeMetric) -> int:
    """Size of a ground term under ``metric``."""
    if isinstance(term, Var):
        raise SizeError("term is not ground")
    if metric is SizeMetric.INT_VALUE:
        if not isinstance(term, Int):
            raise SizeError("value metric needs an integer")
        return abs(term.value)
    if metric is SizeMetric.LIST_LENGTH:
        n = 0
        while is_cons(term):
            n += 1
            term = term.args[1]
        if isinstance(term, Var):
            raise SizeError("list tail is not ground")
        if not is_nil(term):
            raise SizeError("length metric needs a proper list")
        return n
    if metric is SizeMetric.TERM_DEPTH:
        def depth(x):
            if isinstance(x, Var):
                raise SizeError("term is not ground")
            if isinstance(x, Struct) and x.args:
                return 1 + max(depth(a) for a in x.args)
            return 0
        return depth(term)
    raise ValueError(f"unknown metric {metric}")


@dataclass(frozen=True)
class ArgSig:
    name: str
    mode: Mode
    type_name: str
    metric: SizeMetric | None = None

    def __str__(self):
        m = str(self.metric) if self.metric else "none"
        return f"{self.name}: {self.mode} {self.type_name} {m}"


@dataclass(frozen=True)
class PredicateSignature:
    name: str
    args: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "args", tuple(self.args))
        names = [a.name for a in self.args]
        if len(set(names)) != len(names):
            raise SignatureError(f"signature of {self.name} repeats an argument name")
        if not any(a.mode is Mode.OUT for a in self.args):
            raise SignatureError(f"signature of {self.name} has no output argument")

    @property
    def arity(self):
        return len(self.args)

    @property
    def key(self):
        return f"{self.name}/{self.arity}"

    def inputs(self):
        return [a for a in self.args if a.mode is Mode.IN]

    def outputs(self):
        return [a for a in self.args if a.mode is Mode.OUT]

    def size_vars(self):
        """Size variables of the measured input arguments, in order."""
        return [a.name for a in self.inputs() if a.metric is not None]

    def input_p(self, args):
        """The input arguments of a call tuple."""
        return tuple(x for x, a in zip(args, self.args) if a.mode is Mode.IN)

    def size_p(self, args):
        """Sizes of the measured inputs of a ground call tuple."""
        return tuple(size_of(x, a.metric) for x, a in zip(args, self.args)
                     if a.mode is Mode.IN and a.metric is not None)

    def index(self, name):
        for i, a in enumerate(self.args):
            if a.name == name:
                return i
        raise KeyError(name)

    def __str__(self):
        return f":- sig {self.name}(" + ", ".join(str(a) for a in self.args) + ")."


@dataclass(frozen=True)
class Signatures:
    types: Mapping = field(default_factory=dict)
    sigs: Mapping = field(default_factory=dict)
    subtypes: frozenset = frozenset()

    def get(self, key):
        return self.sigs.get(key)

    def by_name(self, name):
        found = [s for s in self.sigs.values() if s.name == name]
        return found[0] if len(found) == 1 else None

    def subsumed(self, t1: str, t2: str) -> bool:
        """t1 ⊑ t2 by equality or the declared/builtin subtype order."""
        if t1 == t2 or t2 == "any":
            return True
        edges = set(self.subtypes) | _BUILTIN_SUBTYPES
        seen, todo = {t1}, [t1]
        while todo:
            x = todo.pop()
            for a, b in edges:
                if a == x and b not in seen:
                    if b == t2:
                        return True
                    seen.add(b)
                    todo.append(b)
        return False

    def schema(self, type_name: str) -> SizedSchema:
        return derive_schema(type_name, self.types)


_STMT_END = re.compile(r"\.(?=\s|%|$)")
_SIG_RE = re.compile(r":-\s*sig\s+([a-z][A-Za-z0-9_]*)\s*\((.*)\)\s*\Z", re.S)
_SUB_RE = re.compile(r":-\s*subtype\s+([a-z][A-Za-z0-9_]*)\s*<\s*([a-z][A-Za-z0-9_]*)\s*\Z")
_TYPE_RE = re.compile(r"([a-z][A-Za-z0-9_]*)\s*:=\s*(.*)\Z", re.S)
_ARG_RE = re.compile(r"([A-Za-z_][A-Za-z0-9_]*)\s*:\s*(in|out)\s+([a-z][A-Za-z0-9_]*)"
                     r"(?:\s+(value|length|depth|none))?\s*\Z")


def _strip_comments(text):
    return "\n".join(line.split("%", 1)[0] for line in text.splitlines())


def _split_top(s, sep):
    parts, depth, cur = [], 0, ""
    for ch in s:
        if ch in "([":
            depth += 1
        elif ch in ")]":
            depth -= 1
        if ch == sep and depth == 0:
            parts.append(cur)
            cur = ""
        else:
            cur += ch
    parts.append(cur)
    return [p.strip() for p in parts]


def _default_metric(type_name, types):
    if type_name in NUMERIC:
        return SizeMetric.INT_VALUE
    t = types.get(type_name)
    if t is not None and t.recursive:
        return SizeMetric.LIST_LENGTH
    return None


def parse_signatures(text: str) -> Signatures:
    body = _strip_comments(text)
    stmts = [s.strip() for s in _STMT_END.split(body)]
    if stmts and stmts[-1]:
        raise SignatureError(f"unterminated statement: {stmts[-1][:40]!r}")
    types, raw_sigs, subtypes = {}, [], set()
    for s in stmts[:-1]:
        if not s:
            continue
        if m := _SUB_RE.match(s):
            subtypes.add((m.group(1), m.group(2)))
        elif m := _SIG_RE.match(s):
            raw_sigs.append((m.group(1), m.group(2)))
        elif m := _TYPE_RE.match(s):
            name = m.group(1)
            if name in types or name in PRIMITIVES:
                raise SignatureError(f"type {name} declared twice")
            alts = []
            for a in _split_top(m.group(2), "|"):
                try:
                    alts.append(_check_alternative(parse_term(a), name))
                except HCParseError as exc:
                    raise SignatureError(f"type {name}: {exc}") from exc
            types[name] = RegularType(name, tuple(alts))
        else:
            raise SignatureError(f"cannot parse statement {s[:40]!r}")
    for t in types.values():
        for r in t.referenced():
            if r not in types and r not in PRIMITIVES:
                raise SignatureError(f"type {t.name} refers to undeclared type {r}")
    _check_recursion(types)
    sigs = {}
    for name, arg_text in raw_sigs:
        args = []
        for a in _split_top(arg_text, ","):
            m = _ARG_RE.match(a)
            if not m:
                raise SignatureError(f"bad argument declaration {a!r} in {name}")
            arg, mode, tname, metric = m.groups()
            if tname not in types and tname not in PRIMITIVES:
                raise SignatureError(f"{name}: undeclared type {tname}")
            if metric is None:
                met = _default_metric(tname, types)
            else:
                met = None if metric == "none" else SizeMetric(metric)
            args.append(ArgSig(arg, Mode(mode), tname, met))
        sig = PredicateSignature(name, tuple(args))
        if sig.key in sigs:
            raise SignatureError(f"two signatures for {sig.key}")
        sigs[sig.key] = sig
    return Signatures(types, sigs, frozenset(subtypes))


def print_signatures(s: Signatures) -> str:
    lines = [str(t) for t in s.types.values()]
    lines += [f":- subtype {a} < {b}." for a, b in sorted(s.subtypes)]
    lines += [str(sig) for sig in s.sigs.values()]
    return "\n".join(lines) + ("\n" if lines else "")
