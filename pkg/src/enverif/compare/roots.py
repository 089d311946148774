"""Real roots of univariate bound-function differences.

Polynomials of degree <= ``max_degree`` (default 4) go through the closed
forms (linear, quadratic, Cardano, Ferrari).  The radicals are computed in
high precision and then turned into rational enclosures that are
*certified*: each enclosure must show a sign change of the squarefree part,
and the number of enclosures must equal the Sturm count of real roots.  A
failed certificate falls back to Sturm isolation, which is also the route
for higher degrees.  Roots are reported per squarefree factor, so the
multiplicity hint is exact for polynomials.

Non-polynomial functions (exponentials, logarithms) are handled by scanning
integer points for sign changes and bisecting with rigorous enclosures.
"""
from __future__ import annotations

import math
import threading
from dataclasses import dataclass
from fractions import Fraction

import mpmath
from mpmath.libmp import to_rational

from ..costfn.evaluate import EvalError, evaluate, sign_of
from ..costfn.expr import Const, Expr, Power, Var, free_vars
from ..costfn.poly import BoundFn, Poly, classify, normalize, to_poly
from ..costfn.taylor import DEFAULT_ORDER, UnsupportedShape, taylor_expand
from . import upoly

ROOT_WIDTH = Fraction(1, 2 ** 32)
DEFAULT_MAX_DEGREE = 4
_MP_LOCK = threading.RLock()
_MP_DPS = 80


class UnsupportedComparison(ValueError):
    """The function class is outside what the comparison can decide."""


class _EverywhereZero:
    def __repr__(self):
        return "EVERYWHERE_ZERO"

    def __bool__(self):
        return False


EVERYWHERE_ZERO = _EverywhereZero()


@dataclass(frozen=True)
class Root:
    lo: Fraction
    hi: Fraction
    exact: bool = False
    multiplicity: int = 1

    def __post_init__(self):
        if self.lo > self.hi:
            raise ValueError("empty root enclosure")
        if self.exact and self.lo != self.hi:
            raise ValueError("exact roots have zero width")

    @property
    def value(self):
        return (self.lo + self.hi) / 2

    def __contains__(self, x):
        return self.lo <= x <= self.hi

    def __float__(self):
        return float(self.value)


# ---------------------------------------------------------------------------
# polynomial roots

def _exact_candidate(p_int, approx: Fraction, tol=None):
    lead = abs(p_int[-1])
    cand = Fraction(round(approx * lead), lead)
    if tol is None:
        tol = Fraction(1, 2 ** 40) * max(1, abs(approx))
    if abs(cand - approx) > tol:
        return None
    return cand if upoly.peval(p_int, cand) == 0 else None


def _refine(seq, lo, hi):
    """Narrow an isolating interval (lo, hi] by Sturm-count bisection."""
    g = seq[0]
    while hi - lo >= ROOT_WIDTH:
        mid = (lo + hi) / 2
        if upoly.peval(g, mid) == 0:
            return mid, mid
        if upoly.count_roots(seq, lo, mid) == 1:
            hi = mid
        else:
            lo = mid
    if upoly.peval(g, hi) == 0:
        return hi, hi
    return lo, hi


def sturm_isolate(g):
    """Isolate all real roots of a squarefree polynomial by Sturm bisection."""
    g = upoly.strip(g)
    if upoly.degree(g) < 1:
        return []
    seq = upoly.sturm_sequence(g)
    bound = upoly.cauchy_bound(g)
    pending = [(-bound, bound)]
    found = []
    while pending:
        a, b = pending.pop()
        n = upoly.count_roots(seq, a, b)
        if n == 0:
            continue
        if n == 1:
            found.append(_refine(seq, a, b))
            continue
        m = (a + b) / 2
        pending.append((a, m))
        pending.append((m, b))
    g_int = upoly.clear_denominators(g)
    out = []
    for lo, hi in sorted(found):
        if lo == hi:
            out.append((lo, hi, True))
            continue
        cand = _exact_candidate(g_int, (lo + hi) / 2, (hi - lo) / 2)
        if cand is not None and lo <= cand <= hi:
            out.append((cand, cand, True))
        else:
            out.append((lo, hi, False))
    return out


def _mp_fraction(x) -> Fraction:
    p, q = to_rational(mpmath.mpf(x)._mpf_)
    return Fraction(int(p), int(q))


def _cbrt(z):
    if z == 0:
        return mpmath.mpc(0)
    return mpmath.exp(mpmath.log(z) / 3)


def _cubic(a, b, c, d):
    d0 = b * b - 3 * a * c
    d1 = 2 * b ** 3 - 9 * a * b * c + 27 * a * a * d
    disc = mpmath.sqrt(mpmath.mpc(d1 * d1 - 4 * d0 ** 3))
    big = (d1 + disc) / 2
    if abs(big) < abs((d1 - disc) / 2):
        big = (d1 - disc) / 2
    cc = _cbrt(big)
    if cc == 0:
        return [-b / (3 * a)] * 3
    xi = mpmath.mpc(-0.5, mpmath.sqrt(3) / 2)
    out = []
    for k in range(3):
        ck = cc * xi ** k
        out.append(-(b + ck + d0 / ck) / (3 * a))
    return out


def _quartic(a, b, c, d, e):
    b, c, d, e = b / a, c / a, d / a, e / a
    shift = -b / 4
    p = c - 3 * b * b / 8
    q = d - b * c / 2 + b ** 3 / 8
    r = e - b * d / 4 + b * b * c / 16 - 3 * b ** 4 / 256
    if abs(q) < mpmath.mpf(10) ** (-_MP_DPS + 10):
        ys = []
        disc = mpmath.sqrt(mpmath.mpc(p * p - 4 * r))
        for z in ((-p + disc) / 2, (-p - disc) / 2):
            s = mpmath.sqrt(mpmath.mpc(z))
            ys += [s, -s]
        return [y + shift for y in ys]
    ms = _cubic(mpmath.mpf(8), 8 * p, 2 * p * p - 8 * r, -q * q)
    m = max(ms, key=abs)
    s = mpmath.sqrt(2 * m)
    ys = []
    for sgn in (1, -1):
        # y^2 - sgn*s*y + (p/2 + m + sgn*q/(2s)) = 0
        bb = -sgn * s
        cc = p / 2 + m + sgn * q / (2 * s)
        disc = mpmath.sqrt(bb * bb - 4 * cc)
        ys += [(-bb + disc) / 2, (-bb - disc) / 2]
    return [y + shift for y in ys]


def _polish(coeffs_mp, z, steps=8):
    for _ in range(steps):
        f = mpmath.polyval(coeffs_mp[::-1], z)
        df = mpmath.polyval([c * i for i, c in enumerate(coeffs_mp)][1:][::-1], z)
        if df == 0:
            break
        z = z - f / df
    return z


def _isqrt_bounds(x: Fraction, bits=80):
    """Rational lo <= sqrt(x) <= hi for x >= 0."""
    p, q = x.numerator, x.denominator
    scale = 1 << bits
    n = p * q * scale * scale
    s = math.isqrt(n)
    lo = Fraction(s, q * scale)
    hi = lo if s * s == n else Fraction(s + 1, q * scale)
    return lo, hi


def _quadratic_roots(g):
    c, b, a = g
    disc = b * b - 4 * a * c
    if disc < 0:
        return []
    if disc == 0:
        r = -b / (2 * a)
        return [(r, r, True)]
    lo, hi = _isqrt_bounds(disc)
    if lo == hi:
        return sorted([((-b - lo) / (2 * a),) * 2 + (True,), ((-b + lo) / (2 * a),) * 2 + (True,)])
    out = []
    for sgn in (1, -1):
        e1 = (-b + sgn * lo) / (2 * a)
        e2 = (-b + sgn * hi) / (2 * a)
        out.append((min(e1, e2), max(e1, e2), False))
    return sorted(out)


def analytic_roots(g):
    """Closed-form roots of a squarefree polynomial of degree <= 4, as
    (lo, hi, exact) triples.  Returns None when certification fails."""
    g = upoly.strip(g)
    deg = upoly.degree(g)
    if deg < 1:
        return []
    if deg == 1:
        r = -g[0] / g[1]
        return [(r, r, True)]
    if deg == 2:
        return _quadratic_roots(g)
    if deg > 4:
        raise ValueError("closed forms exist only up to degree four")
    with _MP_LOCK, mpmath.workdps(_MP_DPS):
        cm = [mpmath.mpf(c.numerator) / c.denominator for c in g]
        zs = _cubic(*cm[::-1]) if deg == 3 else _quartic(*cm[::-1])
        zs = [_polish(cm, mpmath.mpc(z)) for z in zs]
        tol = mpmath.mpf(10) ** (-_MP_DPS // 3)
        approx = sorted({_mp_fraction(z.real) for z in zs
                         if abs(z.imag) <= tol * (1 + abs(z.real))})
    g_int = upoly.clear_denominators(g)
    out = []
    for r in approx:
        cand = _exact_candidate(g_int, r)
        if cand is not None:
            out.append((cand, cand, True))
            continue
        r = Fraction(round(r * 2 ** 64), 2 ** 64)
        delta = Fraction(1, 2 ** 60) * max(1, math.ceil(abs(r)))
        for _ in range(6):
            lo, hi = r - delta, r + delta
            if upoly.sign(upoly.peval(g, lo)) * upoly.sign(upoly.peval(g, hi)) < 0:
                out.append((lo, hi, False))
                break
            delta *= 2 ** 10
        else:
            return None
    out = sorted(set(out))
    return out if _certify(g, out) else None


def _certify(g, roots):
    for (lo1, hi1, _), (lo2, hi2, _) in zip(roots, roots[1:]):
        if hi1 >= lo2:
            return False
    seq = upoly.sturm_sequence(g)
    total = upoly.count_roots(seq, -math.inf, math.inf)
    return total == len(roots)


def polynomial_roots(coeffs, max_degree=DEFAULT_MAX_DEGREE):
    """All real roots of a nonzero rational polynomial, with multiplicities."""
    coeffs = upoly.strip(coeffs)
    if not coeffs:
        return EVERYWHERE_ZERO
    out = []
    for factor, mult in upoly.squarefree_decomposition(coeffs):
        triples = None
        if upoly.degree(factor) <= max_degree:
            triples = analytic_roots(factor)
        if triples is None:
            triples = sturm_isolate(factor)
        out += [Root(lo, hi, exact, mult) for lo, hi, exact in triples]
    return sorted(out, key=lambda r: (r.lo, r.hi))


# ---------------------------------------------------------------------------
# generic functions: integer scan + bisection

def _sign_at(expr, var, x):
    try:
        return sign_of(evaluate(expr, {var: x}))
    except (EvalError, ZeroDivisionError):
        return None


def bisect_root(expr: Expr, var: str, lo, hi, seed=None):
    """Shrink a sign-changing bracket [lo, hi] to width < 2**-32.

    Stops early (returning the current bracket) when the enclosure of the
    value at the midpoint straddles zero."""
    lo, hi = Fraction(lo), Fraction(hi)
    s_lo = _sign_at(expr, var, lo)
    first = True
    while hi - lo >= ROOT_WIDTH:
        if first and seed is not None and lo < seed < hi:
            mid = Fraction(seed)
        else:
            mid = (lo + hi) / 2
        first = False
        s = _sign_at(expr, var, mid)
        if s == 0:
            return Root(mid, mid, True)
        if s is None:
            break
        if s == s_lo:
            lo = mid
        else:
            hi = mid
    return Root(lo, hi, False)


def scan_roots(expr: Expr, var: str, lo: int, hi: int, seeds=()):
    """Roots detected by exact evaluation at the integers lo..hi: integer
    zeros are exact roots, sign changes between neighbours are bisected."""
    out = []
    prev = None
    seeds = sorted(Fraction(s) for s in seeds)
    for k in range(lo, hi + 1):
        s = _sign_at(expr, var, k)
        if s == 0:
            out.append(Root(Fraction(k), Fraction(k), True))
        elif prev is not None and s is not None and prev[1] not in (0, None) and s != prev[1]:
            seed = next((x for x in seeds if k - 1 < x < k), None)
            out.append(bisect_root(expr, var, k - 1, k, seed))
        prev = (k, s)
    return out


def taylor_seeds(expr: Expr, var: str, order=DEFAULT_ORDER, max_degree=DEFAULT_MAX_DEGREE):
    """Approximate roots of ``expr`` with every exponential atom replaced by
    its Taylor polynomial.  Only used to pick bisection midpoints."""
    p = to_poly(expr)
    approx = Poly()
    for mono, c in p.terms.items():
        term = Poly.const(c)
        for atom, e in mono:
            if isinstance(atom, Power) and not isinstance(atom.exponent, Const):
                try:
                    atom_poly = to_poly(taylor_expand(atom, order))
                except UnsupportedShape:
                    return []
            elif atom == Var(var):
                atom_poly = Poly.atom(atom)
            else:
                return []
            term = term * atom_poly ** e
        approx = approx + term
    if not approx.is_polynomial_in({var}):
        return []
    roots = polynomial_roots(approx.univariate_coeffs(var), max_degree)
    if roots is EVERYWHERE_ZERO:
        return []
    return [r.value for r in roots]


def find_roots(f: BoundFn, max_degree=DEFAULT_MAX_DEGREE, taylor_order=DEFAULT_ORDER,
               scan_limit=None):
    """Real roots of a univariate bound function.

    Returns ``EVERYWHERE_ZERO`` for the zero function.  Polynomials get every
    real root (inside or outside the domain).  Other supported classes get
    the roots visible from integer sign changes over the scanned part of the
    domain, which is what integer-domain sign decisions need.
    """
    from .tail import dominance_threshold

    expr = normalize(f.expr)
    names = free_vars(expr)
    if len(names) > 1:
        raise UnsupportedComparison("multivariate function")
    cls = classify(expr)
    if cls.kind == "constant":
        if not names:
            v = evaluate(expr, {})
            return EVERYWHERE_ZERO if v == 0 else []
    var = next(iter(names)) if names else (f.vars[0] if f.vars else "_")
    p = to_poly(expr)
    if cls.kind in ("constant", "polynomial"):
        return polynomial_roots(p.univariate_coeffs(var), max_degree)
    if cls.kind == "unsupported":
        raise UnsupportedComparison(f"cannot find roots of {cls} function")
    lo, hi = f.domain.get(var)
    tail = dominance_threshold(p, var, lo)
    if tail is not None:
        hi = min(hi, tail[0])
    if hi == math.inf:
        raise UnsupportedComparison("no finite scan range for this function")
    if scan_limit is not None and hi - lo > scan_limit:
        raise UnsupportedComparison("scan range exceeds the limit")
    seeds = taylor_seeds(expr, var, taylor_order, max_degree)
    return scan_roots(expr, var, int(lo), int(hi), seeds)


def is_everywhere_zero(x):
    return x is EVERYWHERE_ZERO


__all__ = ["Root", "EVERYWHERE_ZERO", "UnsupportedComparison", "find_roots",
           "polynomial_roots", "analytic_roots", "sturm_isolate", "scan_roots",
           "bisect_root", "taylor_seeds"]
