"""Eventual-sign certificates for exp/log/polynomial mixtures.

Each term of a normalized univariate function is c * n^k * (log n)^m * e^(r n)
with a rate r built from the exponential atoms.  The dominant term D has the
largest (r, k, m).  For every other term g, d/dn log|g/D| is bounded above
by zero from an explicit T0 on, so |g/D| is non-increasing there.  Once a
threshold T >= max T0 has sum |g(T)| < |D(T)| (checked with rigorous
enclosures), the sign of f equals the sign of D's coefficient for every
n >= T.
"""
from __future__ import annotations

import math
from fractions import Fraction

from ..costfn.evaluate import EvalError, bounds, evaluate, ln_enclosure
from ..costfn.expr import Const, Log, Power, Var
from ..costfn.poly import Poly, to_poly

MAX_THRESHOLD = 1 << 16


def _term_shape(mono, var):
    """(k, m, signature) for one monomial, or None for unsupported atoms.
    ``signature`` maps exponential bases to their total rate multiplier."""
    k = m = 0
    sig = {}
    for atom, e in mono:
        if atom == Var(var):
            k += e
        elif (isinstance(atom, Log) and isinstance(atom.base, Const)
              and atom.base.value > 1 and atom.arg == Var(var)):
            m += e
        elif (isinstance(atom, Power) and isinstance(atom.base, Const)
              and atom.base.value > 0 and atom.base.value != 1):
            exp = to_poly(atom.exponent)
            if not exp.is_polynomial_in({var}) or exp.degree(var) > 1:
                return None
            coeffs = exp.univariate_coeffs(var) + [Fraction(0), Fraction(0)]
            if coeffs[1]:
                a = atom.base.value
                sig[a] = sig.get(a, Fraction(0)) + coeffs[1] * e
        else:
            return None
    return k, m, {a: s for a, s in sig.items() if s}


def _rate(sig):
    lo = hi = Fraction(0)
    for a, s in sig.items():
        ln = ln_enclosure(a)
        x, y = ln.lo * s, ln.hi * s
        lo, hi = lo + min(x, y), hi + max(x, y)
    return lo, hi


def _compare_rates(s1, s2):
    """-1/0/+1 for rate(s1) vs rate(s2), or None when undecided."""
    if s1 == s2:
        return 0
    lo1, hi1 = _rate(s1)
    lo2, hi2 = _rate(s2)
    if hi1 < lo2:
        return -1
    if hi2 < lo1:
        return 1
    return None


def _threshold(g, d):
    """T0 beyond which |g/D| is non-increasing, or None."""
    k_g, m_g, s_g = g
    k_d, m_d, s_d = d
    dk, dm = k_g - k_d, m_g - m_d
    cmp = _compare_rates(s_g, s_d)
    if cmp is None or cmp > 0:
        return None
    if cmp < 0:
        # diff(s_g) - diff(s_d), as a certified negative upper bound
        lo_g, hi_g = _rate(s_g)
        lo_d, hi_d = _rate(s_d)
        gap = hi_g - lo_d
        need = Fraction(abs(dk) + abs(dm)) / (-gap)
        return max(3, math.ceil(need))
    if dk > 0 or (dk == 0 and dm >= 0):
        return None
    if dk < 0:
        if dm <= 0:
            return 3
        return max(3, math.ceil(math.exp(dm / -dk)) + 1)
    return 3


def dominance_threshold(p: Poly, var: str, lo=0, limit=MAX_THRESHOLD):
    """(T, sign): f has constant nonzero ``sign`` for all integers n >= T.

    Returns None when no certificate is found below ``limit``."""
    if p.is_zero():
        return None
    terms = []
    for mono, c in p.terms.items():
        shape = _term_shape(mono, var)
        if shape is None:
            return None
        terms.append((shape, Poly({mono: c}), c))
    # dominant term: maximal (rate, k, m)
    dom = terms[0]
    for t in terms[1:]:
        cmp = _compare_rates(t[0][2], dom[0][2])
        if cmp is None:
            return None
        if cmp > 0 or (cmp == 0 and (t[0][0], t[0][1]) > (dom[0][0], dom[0][1])):
            dom = t
    t0 = max(3, int(lo))
    for t in terms:
        if t is dom:
            continue
        th = _threshold(t[0], dom[0])
        if th is None:
            return None
        t0 = max(t0, th)
    sign = 1 if dom[2] > 0 else -1
    n = t0
    while n <= limit:
        try:
            d_lo, d_hi = bounds(evaluate(dom[1].to_expr(), {var: n}))
            low_d = min(abs(d_lo), abs(d_hi)) if d_lo * d_hi > 0 else 0
            total = Fraction(0)
            for t in terms:
                if t is dom:
                    continue
                g_lo, g_hi = bounds(evaluate(t[1].to_expr(), {var: n}))
                total += max(abs(g_lo), abs(g_hi))
        except (EvalError, ZeroDivisionError):
            return None
        if total < low_d:
            return n, sign
        n *= 2
    return None
