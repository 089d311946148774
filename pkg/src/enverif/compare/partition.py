"""Sign partitions of bound-function differences over integer domains.

Every relation label comes from exact evaluation at an integer (or a
rigorous enclosure that excludes zero).  Roots only propose where the
labels may change.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

from ..costfn.evaluate import EvalError, evaluate, sign_of
from ..costfn.expr import Inf, free_vars
from ..costfn.poly import (BoundFn, DomainSet, classify, normalize, subtract,
                           to_poly)
from .roots import (DEFAULT_MAX_DEGREE, EVERYWHERE_ZERO, Root,
                    UnsupportedComparison, polynomial_roots)
from .tail import dominance_threshold

DEFAULT_SCAN_LIMIT = 10_000


class Rel(enum.Enum):
    LT = "lt"
    EQ = "eq"
    GT = "gt"
    UNKNOWN = "unknown"

    def __str__(self):
        return self.value

    def flip(self):
        return {Rel.LT: Rel.GT, Rel.GT: Rel.LT}.get(self, self)


_SIGN_REL = {-1: Rel.LT, 0: Rel.EQ, 1: Rel.GT, None: Rel.UNKNOWN}


@dataclass(frozen=True)
class Piece:
    lo: int
    hi: int | float
    rel: Rel

    def __contains__(self, n):
        return self.lo <= n <= self.hi

    def __str__(self):
        hi = "inf" if self.hi == math.inf else str(self.hi)
        return f"[{self.lo},{hi}]:{self.rel}"


@dataclass(frozen=True)
class SignPartition:
    var: str
    domain: DomainSet
    pieces: tuple = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "pieces", tuple(_merge(self.pieces)))
        lo, hi = self.domain.get(self.var)
        if self.pieces:
            if self.pieces[0].lo != lo or self.pieces[-1].hi != hi:
                raise ValueError("partition does not cover the domain")
            for a, b in zip(self.pieces, self.pieces[1:]):
                if b.lo != a.hi + 1:
                    raise ValueError("partition has gaps or overlaps")

    def relation_at(self, n) -> Rel:
        for p in self.pieces:
            if n in p:
                return p.rel
        raise KeyError(n)

    def __iter__(self):
        return iter(self.pieces)

    def __len__(self):
        return len(self.pieces)

    def __str__(self):
        return " ".join(str(p) for p in self.pieces)

    def flipped(self):
        return SignPartition(self.var, self.domain,
                             tuple(Piece(p.lo, p.hi, p.rel.flip()) for p in self.pieces))


def _merge(pieces):
    out = []
    for p in pieces:
        if out and out[-1].rel == p.rel and out[-1].hi + 1 == p.lo:
            out[-1] = Piece(out[-1].lo, p.hi, p.rel)
        else:
            out.append(p)
    return out


def _whole(var, domain, rel):
    lo, hi = domain.get(var)
    return SignPartition(var, domain, (Piece(lo, hi, rel),))


def _sign_at(expr, var, n):
    try:
        return sign_of(evaluate(expr, {var: n}))
    except (EvalError, ZeroDivisionError):
        return None


class DomainExhausted(ValueError):
    """No integer on the favourable side of a root lies in the domain."""


def safe_adjust(root: Root, f: BoundFn, direction: str, want: int, var=None):
    """Integer cut next to ``root`` with the favourable sign verified exactly.

    ``direction`` says which side of the root is favourable ("left" or
    "right") and ``want`` is the sign (-1 or +1) that side must have.  The
    candidate starts at the integer on the far edge of the enclosure and is
    moved one step at a time towards the favourable side until exact
    evaluation shows ``want``.  Returns that integer: the last favourable
    integer before the root (left) or the first after it (right).
    """
    if direction not in ("left", "right"):
        raise ValueError("direction must be 'left' or 'right'")
    var = var or (f.vars[0] if f.vars else "N")
    dlo, dhi = f.domain.get(var)
    step = -1 if direction == "left" else 1
    c = math.ceil(root.hi) if direction == "left" else math.floor(root.lo)
    budget = math.ceil(root.hi - root.lo) + 2
    for _ in range(budget + 1):
        if c < dlo or c > dhi:
            break
        if _sign_at(f.expr, var, c) == want:
            return c
        c += step
    raise DomainExhausted(f"no integer with sign {want} {direction} of the root")


def _critical_integers(roots, lo, hi):
    crit = set()
    for r in roots:
        a, b = math.floor(r.lo), math.ceil(r.hi)
        if b < lo or a > hi:
            continue
        for n in range(max(a, lo), min(b, hi) + 1):
            crit.add(n)
    return sorted(crit)


def _polynomial_partition(expr, var, domain, max_degree):
    lo, hi = domain.get(var)
    coeffs = to_poly(expr).univariate_coeffs(var)
    roots = polynomial_roots(coeffs, max_degree)
    if roots is EVERYWHERE_ZERO:
        return _whole(var, domain, Rel.EQ)
    crit = _critical_integers(roots, lo, hi)
    pieces = []
    cursor = lo
    for c in crit + [None]:
        gap_hi = (c - 1) if c is not None else hi
        if cursor <= gap_hi:
            # no root between consecutive critical integers: one sample decides
            sample = cursor
            pieces.append(Piece(cursor, gap_hi, _SIGN_REL[_sign_at(expr, var, sample)]))
        if c is None:
            break
        pieces.append(Piece(c, c, _SIGN_REL[_sign_at(expr, var, c)]))
        cursor = c + 1
    return SignPartition(var, domain, tuple(pieces))


def _scan_partition(expr, var, domain, scan_limit):
    lo, hi = domain.get(var)
    p = to_poly(expr)
    tail = dominance_threshold(p, var, lo)
    end = hi
    tail_piece = None
    if tail is not None and tail[0] < hi:
        end = tail[0]
        tail_piece = Piece(end + 1, hi, _SIGN_REL[tail[1]])
    pieces = []
    stop = end if end - lo <= scan_limit else lo + scan_limit
    for n in range(lo, int(stop) + 1):
        pieces.append(Piece(n, n, _SIGN_REL[_sign_at(expr, var, n)]))
    if stop < end:
        pieces.append(Piece(stop + 1, hi, Rel.UNKNOWN))
        tail_piece = None
    if tail_piece is not None:
        pieces.append(tail_piece)
    return SignPartition(var, domain, tuple(pieces))


def _pick_var(f: BoundFn, names):
    if names:
        return sorted(names)[0]
    if f.vars:
        return f.vars[0]
    if f.domain.vars():
        return f.domain.vars()[0]
    return "N"


def sign_partition(f: BoundFn, max_degree=DEFAULT_MAX_DEGREE,
                   scan_limit=DEFAULT_SCAN_LIMIT) -> SignPartition:
    """Split the domain of a univariate ``f`` into maximal lt/eq/gt runs."""
    try:
        expr = normalize(f.expr)
    except EvalError:
        expr = None
    names = free_vars(expr) if expr is not None else set(f.vars)
    var = _pick_var(f, names)
    domain = f.domain.intersect(DomainSet.full([var]))
    if expr is None or len(names) > 1:
        return _whole(var, domain, Rel.UNKNOWN)
    if not names:
        try:
            return _whole(var, domain, _SIGN_REL[sign_of(evaluate(expr, {}))])
        except (EvalError, ZeroDivisionError):
            return _whole(var, domain, Rel.UNKNOWN)
    cls = classify(expr)
    if cls.kind in ("constant", "polynomial"):
        return _polynomial_partition(expr, var, domain, max_degree)
    lo, hi = domain.get(var)
    if cls.kind == "unsupported" and hi - lo > scan_limit:
        return _whole(var, domain, Rel.UNKNOWN)
    return _scan_partition(expr, var, domain, scan_limit)


def _inf_sign(e):
    if isinstance(e, Inf):
        return 1 if e.positive else -1
    return 0


def compare_fns(f1: BoundFn, f2: BoundFn, max_degree=DEFAULT_MAX_DEGREE,
                scan_limit=DEFAULT_SCAN_LIMIT) -> SignPartition:
    """Partition of the shared domain by the relation of f1 to f2 (lt means
    f1 < f2 there).  Never raises for unsupported inputs: it answers
    ``unknown`` instead."""
    try:
        n1, n2 = normalize(f1.expr), normalize(f2.expr)
    except EvalError:
        n1 = n2 = None
    s1, s2 = (_inf_sign(n1), _inf_sign(n2)) if n1 is not None else (0, 0)
    if s1 or s2:
        names = tuple(dict.fromkeys(f1.vars + f2.vars))
        domain = f1.domain.intersect(f2.domain).intersect(DomainSet.full(names))
        var = _pick_var(BoundFn.of(0, names, domain), set())
        domain = domain.intersect(DomainSet.full([var]))
        if s1 == s2:
            return _whole(var, domain, Rel.EQ)
        return _whole(var, domain, Rel.GT if s1 > s2 else Rel.LT)
    return sign_partition(subtract(f1, f2), max_degree, scan_limit)


__all__ = ["Rel", "Piece", "SignPartition", "DomainExhausted", "safe_adjust",
           "sign_partition", "compare_fns", "UnsupportedComparison"]
