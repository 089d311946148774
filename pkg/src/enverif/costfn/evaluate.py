"""Exact evaluation of cost expressions.

Values are ``Fraction`` for finite exact results, ``math.inf``/``-math.inf``
for the infinite specials, and :class:`Enclosure` when an irrational number
(a logarithm, a non-integral power) enters.  Enclosures are rigorous: their
endpoints are rationals obtained from mpmath's outward-rounded interval
arithmetic at :data:`ENCLOSURE_PREC` bits.
"""
from __future__ import annotations

import math
import threading
from contextlib import contextmanager
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Union

from mpmath import iv
from mpmath.libmp import to_rational

from .expr import (Add, ArrayMax, ArrayMin, Const, Div, Expr, Inf, Log, Mul,
                   Power, Prod, Sub, Sum, Var, env_key)

ENCLOSURE_PREC = 160
MAX_EXPANSION = 100_000


_IV_LOCK = threading.RLock()


@contextmanager
def _iv_prec():
    # mpmath's interval context keeps its precision globally
    with _IV_LOCK:
        saved = iv.prec
        iv.prec = ENCLOSURE_PREC
        try:
            yield
        finally:
            iv.prec = saved


class EvalError(ArithmeticError):
    """Base class for evaluation failures."""


class UnboundVariable(EvalError, KeyError):
    pass


class Indeterminate(EvalError):
    """0*inf, inf-inf and friends."""


class DomainError(EvalError):
    """log of a nonpositive number, log base <= 1, and similar."""


@dataclass(frozen=True)
class Enclosure:
    """Closed interval [lo, hi] known to contain an irrational value."""

    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        if self.lo > self.hi:
            raise ValueError("empty enclosure")

    @property
    def width(self):
        return self.hi - self.lo

    @property
    def mid(self):
        return (self.lo + self.hi) / 2

    def sign(self):
        """+1/-1 when the enclosure excludes 0, else None."""
        if self.lo > 0:
            return 1
        if self.hi < 0:
            return -1
        return None

    def __contains__(self, x):
        return self.lo <= x <= self.hi

    def __float__(self):
        return float(self.mid)


ExtValue = Union[Fraction, float, Enclosure]


def sign_of(v: ExtValue):
    """Sign of a value, or None when an enclosure straddles zero."""
    if isinstance(v, Enclosure):
        return v.sign()
    if v > 0:
        return 1
    if v < 0:
        return -1
    return 0


def bounds(v: ExtValue):
    if isinstance(v, Enclosure):
        return v.lo, v.hi
    return v, v


def _pack(lo, hi) -> ExtValue:
    if lo == hi:
        if isinstance(lo, float):
            return lo
        return Fraction(lo)
    return Enclosure(lo if _is_inf(lo) else Fraction(lo),
                     hi if _is_inf(hi) else Fraction(hi))


# ---------------------------------------------------------------------------
# interval arithmetic over Fraction ∪ {±inf}

def _is_inf(x):
    return isinstance(x, float) and math.isinf(x)


def _add(a, b):
    alo, ahi = bounds(a)
    blo, bhi = bounds(b)
    for x, y in ((alo, blo), (ahi, bhi)):
        if _is_inf(x) and _is_inf(y) and x != y:
            raise Indeterminate("inf - inf")
    return _pack(alo + blo, ahi + bhi)


def _neg(a):
    lo, hi = bounds(a)
    return _pack(-hi, -lo)


def _mul_endpoint(x, y):
    if (_is_inf(x) and y == 0) or (_is_inf(y) and x == 0):
        raise Indeterminate("0 * inf")
    return x * y


def _mul(a, b):
    alo, ahi = bounds(a)
    blo, bhi = bounds(b)
    prods = [_mul_endpoint(x, y) for x in (alo, ahi) for y in (blo, bhi)]
    return _pack(min(prods), max(prods))


def _div(a, b):
    blo, bhi = bounds(b)
    if blo <= 0 <= bhi:
        raise ZeroDivisionError("division by zero")
    if _is_inf(blo) or _is_inf(bhi):
        alo, ahi = bounds(a)
        if _is_inf(alo) or _is_inf(ahi):
            raise Indeterminate("inf / inf")
        if blo == bhi:
            return Fraction(0)
    inv_lo = Fraction(0) if _is_inf(bhi) else 1 / Fraction(bhi)
    inv_hi = Fraction(0) if _is_inf(blo) else 1 / Fraction(blo)
    return _mul(a, _pack(inv_lo, inv_hi))


def _to_iv(v):
    lo, hi = bounds(v)
    if _is_inf(lo) or _is_inf(hi):
        raise EvalError("irrational operation on an infinite operand")
    return iv.mpf([iv.mpf(lo.numerator) / lo.denominator,
                   iv.mpf(hi.numerator) / hi.denominator])


def _from_iv(x) -> Enclosure:
    lo_t, hi_t = x._mpi_
    p, q = to_rational(lo_t)
    r, s = to_rational(hi_t)
    return Enclosure(Fraction(int(p), int(q)), Fraction(int(r), int(s)))


def ln_enclosure(x) -> Enclosure:
    """Rigorous enclosure of the natural logarithm of a positive rational."""
    x = Fraction(x)
    if x <= 0:
        raise DomainError("log of a nonpositive number")
    if x == 1:
        return Enclosure(Fraction(0), Fraction(0))
    with _iv_prec():
        return _from_iv(iv.log(_to_iv(x)))


def _iroot(n: int, k: int) -> int:
    """floor(n ** (1/k)) for n >= 0."""
    if n < 2:
        return n
    x = 1 << ((n.bit_length() + k - 1) // k)
    while True:
        y = ((k - 1) * x + n // x ** (k - 1)) // k
        if y >= x:
            break
        x = y
    while x ** k > n:
        x -= 1
    while (x + 1) ** k <= n:
        x += 1
    return x


def exact_root(x: Fraction, k: int):
    """The rational k-th root of x >= 0 when it exists, else None."""
    p, q = x.numerator, x.denominator
    rp, rq = _iroot(p, k), _iroot(q, k)
    if rp ** k == p and rq ** k == q:
        return Fraction(rp, rq)
    return None


def _exact_log(base: Fraction, arg: Fraction):
    """Rational log_base(arg) for the integer-exponent case, else None."""
    if arg == 1:
        return Fraction(0)
    # base**k == arg for some integer k (possibly negative)
    target, b = arg, base
    if arg < 1:
        target, b = 1 / arg, base
        sign = -1
    else:
        sign = 1
    acc, k = Fraction(1), 0
    while acc < target and k < 4096:
        acc *= b
        k += 1
    if acc == target:
        return Fraction(sign * k)
    # 1/k exponents: arg**k == base
    for k in range(2, 65):
        r = exact_root(base, k) if base > 0 else None
        if r is None:
            continue
        if r == arg:
            return Fraction(1, k)
        if r == 1 / arg:
            return Fraction(-1, k)
    return None


def _power(b, e):
    blo, bhi = bounds(b)
    elo, ehi = bounds(e)
    if blo == bhi and elo == ehi and not _is_inf(blo) and not _is_inf(elo):
        base, exp = Fraction(blo), Fraction(elo)
        if exp.denominator == 1:
            n = exp.numerator
            if base == 0 and n < 0:
                raise ZeroDivisionError("0 to a negative power")
            return base ** n
        if base < 0:
            raise DomainError("non-integral power of a negative number")
        root = exact_root(base, exp.denominator)
        if root is not None:
            return root ** exp.numerator
    if _is_inf(blo) or _is_inf(bhi) or _is_inf(elo) or _is_inf(ehi):
        # only the monotone cases that stay well defined
        if elo == ehi and not _is_inf(elo) and Fraction(elo).denominator == 1 and elo > 0:
            n = int(elo)
            cands = [x ** n for x in (blo, bhi)]
            if n % 2 == 0 and blo < 0 < bhi:
                cands.append(0)
            return _pack(min(cands), max(cands))
        if blo == bhi and not _is_inf(blo) and blo > 1 and elo == ehi:
            return math.inf if elo > 0 else Fraction(0)
        raise Indeterminate("power with infinite operands")
    if blo <= 0:
        if elo == ehi and Fraction(elo).denominator == 1:
            n = int(elo)
            cands = [Fraction(blo) ** n, Fraction(bhi) ** n]
            if n % 2 == 0 and blo < 0 < bhi:
                cands.append(Fraction(0))
            return _pack(min(cands), max(cands))
        raise DomainError("non-integral power of a possibly nonpositive base")
    with _iv_prec():
        return _from_iv(iv.power(_to_iv(b), _to_iv(e)))


def _log(b, a):
    blo, bhi = bounds(b)
    alo, ahi = bounds(a)
    if blo <= 1:
        raise DomainError("log base must be > 1")
    if alo <= 0:
        raise DomainError("log of a nonpositive number")
    if _is_inf(ahi):
        if alo == ahi:
            return math.inf
        raise Indeterminate("log of an unbounded enclosure")
    if _is_inf(bhi):
        raise Indeterminate("log with infinite base")
    if blo == bhi and alo == ahi:
        exact = _exact_log(Fraction(blo), Fraction(alo))
        if exact is not None:
            return exact
    with _iv_prec():
        return _from_iv(iv.log(_to_iv(a)) / iv.log(_to_iv(b)))


def _integer_bound(v, what):
    lo, hi = bounds(v)
    if lo != hi or _is_inf(lo) or Fraction(lo).denominator != 1:
        raise EvalError(f"{what} bound must evaluate to an integer")
    return int(lo)


def evaluate(e: Expr, env: Mapping | None = None) -> ExtValue:
    """Evaluate ``e`` exactly.

    ``env`` maps variable names (and ``"min(a)"``/``"max(a)"`` keys for array
    extrema) to ints, Fractions or ``±math.inf``.
    """
    env = {} if env is None else env
    if isinstance(e, Const):
        return e.value
    if isinstance(e, (Var, ArrayMin, ArrayMax)):
        key = env_key(e)
        if key not in env:
            raise UnboundVariable(key)
        v = env[key]
        if isinstance(v, Enclosure):
            return v
        if isinstance(v, float):
            if math.isinf(v):
                return v
            raise EvalError(f"binding for {key} is a non-integral float")
        return Fraction(v)
    if isinstance(e, Inf):
        return math.inf if e.positive else -math.inf
    if isinstance(e, Add):
        return _add(evaluate(e.left, env), evaluate(e.right, env))
    if isinstance(e, Sub):
        return _add(evaluate(e.left, env), _neg(evaluate(e.right, env)))
    if isinstance(e, Mul):
        return _mul(evaluate(e.left, env), evaluate(e.right, env))
    if isinstance(e, Div):
        return _div(evaluate(e.left, env), evaluate(e.right, env))
    if isinstance(e, Power):
        return _power(evaluate(e.base, env), evaluate(e.exponent, env))
    if isinstance(e, Log):
        return _log(evaluate(e.base, env), evaluate(e.arg, env))
    if isinstance(e, (Sum, Prod)):
        lo = _integer_bound(evaluate(e.lower, env), "summation")
        hi = _integer_bound(evaluate(e.upper, env), "summation")
        if hi - lo + 1 > MAX_EXPANSION:
            raise EvalError("summation range too large to evaluate")
        acc = Fraction(0) if isinstance(e, Sum) else Fraction(1)
        inner = dict(env)
        for i in range(lo, hi + 1):
            inner[e.index] = i
            v = evaluate(e.body, inner)
            acc = _add(acc, v) if isinstance(e, Sum) else _mul(acc, v)
        return acc
    raise TypeError(f"not an expression: {e!r}")


def evaluate_number(e: Expr, env: Mapping | None = None):
    """Like :func:`evaluate` but insists on an exact (non-enclosure) result."""
    v = evaluate(e, env)
    if isinstance(v, Enclosure):
        raise EvalError(f"{e} has no exact rational value")
    return v
