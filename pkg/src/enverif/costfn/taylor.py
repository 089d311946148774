"""Truncated Taylor series for exponential bound functions.

``a**x = exp(x * ln a) ~ sum_{n=0}^{order} (x ln a)^n / n!``.  ``ln a`` is
taken from a rigorous rational enclosure; the series coefficients use its
midpoint, whose error (below 2**-150 relative) is negligible next to the
truncation error.  The result only seeds root searches, so it never decides
a sign by itself.
"""
from __future__ import annotations

import math
import threading
from fractions import Fraction

from .evaluate import Enclosure, ln_enclosure
from .expr import Const, Expr, Power
from .poly import Poly, to_poly

DEFAULT_ORDER = 8

_FACT_LOCK = threading.Lock()
_FACTORIALS = [1]


def factorial(n: int) -> int:
    """n! from a shared table filled on first use."""
    if n < len(_FACTORIALS):
        return _FACTORIALS[n]
    with _FACT_LOCK:
        while len(_FACTORIALS) <= n:
            _FACTORIALS.append(_FACTORIALS[-1] * len(_FACTORIALS))
    return _FACTORIALS[n]


class UnsupportedShape(ValueError):
    pass


def exp_series(arg: Poly, order: int = DEFAULT_ORDER) -> Poly:
    """Degree-``order`` Taylor polynomial of exp(arg)."""
    if order < 0:
        raise ValueError("order must be >= 0")
    total = Poly()
    term = Poly.const(1)
    for n in range(order + 1):
        total = total + term.scale(Fraction(1, factorial(n)))
        term = term * arg
    return total


def _split_exponential(e: Expr):
    """Return (coefficient, ln-base enclosure, exponent Poly) for c*a**lin."""
    p = to_poly(e)
    if len(p.terms) != 1:
        raise UnsupportedShape("expected a single exponential term")
    (mono, coeff), = p.terms.items()
    if len(mono) != 1 or mono[0][1] != 1:
        raise UnsupportedShape("expected a single exponential term")
    atom = mono[0][0]
    if not (isinstance(atom, Power) and isinstance(atom.base, Const)):
        raise UnsupportedShape(f"{atom} is not an exponential")
    a = atom.base.value
    if a <= 1:
        raise UnsupportedShape("exponential base must exceed 1")
    exponent = to_poly(atom.exponent)
    if not exponent.is_polynomial_in() or exponent.degree() > 1:
        raise UnsupportedShape("exponent must be linear in the size variables")
    return coeff, ln_enclosure(a), exponent


def taylor_expand(e: Expr, order: int = DEFAULT_ORDER) -> Expr:
    """Polynomial approximation of ``c * power(a, linear)``."""
    coeff, ln_a, exponent = _split_exponential(e)
    return exp_series(exponent.scale(ln_a.mid), order).scale(coeff).to_expr()


def taylor_exp(x: Expr, order: int = DEFAULT_ORDER) -> Expr:
    """Taylor polynomial of e**x (Euler's number has no literal in the
    expression grammar, so it gets its own entry point)."""
    return exp_series(to_poly(x), order).to_expr()


def remainder_bound(x, ln_a, order: int = DEFAULT_ORDER) -> float:
    """|x ln a|^(k+1)/(k+1)! * a^|x|, the Lagrange bound on the truncation error."""
    t = abs(float(x) * float(ln_a))
    return t ** (order + 1) / factorial(order + 1) * math.exp(t)


def ln_base(a) -> Enclosure:
    return ln_enclosure(a)


def linear_exponent(e: Expr, var: str):
    """Exponent of a ``power(a, s*var + t)`` atom as (s, t), else None."""
    if not isinstance(e, Power):
        return None
    p = to_poly(e.exponent)
    if not p.is_polynomial_in({var}) or p.degree(var) > 1:
        return None
    coeffs = p.univariate_coeffs(var) + [Fraction(0)]
    return coeffs[1], coeffs[0]

