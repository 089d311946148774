"""Dense univariate polynomials over Q (coefficient lists, lowest degree first)."""
from __future__ import annotations

import math
from fractions import Fraction


def strip(p):
    p = [Fraction(c) for c in p]
    while p and p[-1] == 0:
        p.pop()
    return p


def degree(p):
    return len(p) - 1


def peval(p, x):
    acc = Fraction(0)
    for c in reversed(p):
        acc = acc * x + c
    return acc


def sign(x):
    return (x > 0) - (x < 0)


def derivative(p):
    return strip([c * i for i, c in enumerate(p)][1:])


def neg(p):
    return [-c for c in p]


def sub(p, q):
    n = max(len(p), len(q))
    return strip([(p[i] if i < len(p) else 0) - (q[i] if i < len(q) else 0) for i in range(n)])


def mul(p, q):
    if not p or not q:
        return []
    out = [Fraction(0)] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        for j, b in enumerate(q):
            out[i + j] += a * b
    return strip(out)


def pdivmod(p, q):
    q = strip(q)
    if not q:
        raise ZeroDivisionError("polynomial division by zero")
    p = strip(p)
    quot = [Fraction(0)] * max(len(p) - len(q) + 1, 1)
    rem = list(p)
    lead = q[-1]
    while len(rem) >= len(q) and rem:
        k = len(rem) - len(q)
        c = rem[-1] / lead
        quot[k] = c
        for i, b in enumerate(q):
            rem[i + k] -= c * b
        rem = strip(rem)
    return strip(quot), rem


def monic(p):
    p = strip(p)
    if not p:
        return p
    return [c / p[-1] for c in p]


def gcd(p, q):
    p, q = strip(p), strip(q)
    while q:
        p, q = q, pdivmod(p, q)[1]
    return monic(p)


def squarefree_decomposition(p):
    """Yun's algorithm: [(factor, multiplicity), ...] with squarefree,
    pairwise coprime monic factors."""
    p = strip(p)
    if degree(p) < 1:
        return []
    out = []
    dp = derivative(p)
    a = gcd(p, dp)
    b = pdivmod(p, a)[0]
    c = pdivmod(dp, a)[0]
    d = sub(c, derivative(b))
    i = 1
    while degree(b) >= 1:
        a = gcd(b, d)
        if degree(a) >= 1:
            out.append((monic(a), i))
        b = pdivmod(b, a)[0]
        c = pdivmod(d, a)[0]
        d = sub(c, derivative(b))
        i += 1
    return out


def sturm_sequence(p):
    seq = [strip(p), derivative(p)]
    while seq[-1]:
        r = pdivmod(seq[-2], seq[-1])[1]
        seq.append(neg(r))
    return seq[:-1]


def _variations(values):
    signs = [s for s in (sign(v) for v in values) if s]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def _at_inf(p, positive):
    if not p:
        return 0
    lead = sign(p[-1])
    if positive or degree(p) % 2 == 0:
        return lead
    return -lead


def variations_at(seq, x):
    if x == math.inf:
        return _variations([_at_inf(p, True) for p in seq])
    if x == -math.inf:
        return _variations([_at_inf(p, False) for p in seq])
    return _variations([peval(p, x) for p in seq])


def count_roots(seq, a, b):
    """Distinct real roots in (a, b] of the squarefree head of ``seq``."""
    return variations_at(seq, a) - variations_at(seq, b)


def cauchy_bound(p):
    p = strip(p)
    lead = abs(p[-1])
    return 1 + max((abs(c) / lead for c in p[:-1]), default=Fraction(0))


def clear_denominators(p):
    den = math.lcm(*(Fraction(c).denominator for c in p)) if p else 1
    return [int(c * den) for c in p]
