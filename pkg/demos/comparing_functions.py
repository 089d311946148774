"""Partitioning a size domain by the sign of f - g.

Run from the repository root:  python3 demos/comparing_functions.py
"""
import math

from enverif.assertlang import parse_expr
from enverif.compare import UnsupportedComparison, compare_fns, find_roots
from enverif.costfn import BoundFn, DomainSet, render, subtract


def fn(text, lo=0, hi=math.inf):
    return BoundFn(parse_expr(text), ("N",), DomainSet((("N", lo, hi),)))


def show(f_text, g_text, lo=0, hi=math.inf):
    f, g = fn(f_text, lo, hi), fn(g_text, lo, hi)
    print(f"f = {f_text}")
    print(f"g = {g_text}")
    try:
        diff = subtract(f, g)
        roots = find_roots(diff)
        if isinstance(roots, list):
            print(f"  f - g = {render(diff.expr)}")
            for r in roots:
                kind = "exact" if r.exact else f"within {float(r.hi - r.lo):.1e}"
                print(f"  root near {float(r.lo):.6g} ({kind})")
    except UnsupportedComparison:
        print("  no analytic roots; the partition comes from scanning")
    for piece in compare_fns(f, g):
        hi_txt = "inf" if piece.hi == math.inf else str(piece.hi)
        print(f"  N in {piece.lo}..{hi_txt}: f {piece.rel} g")
    print()


# polynomial against a constant budget: one crossing, found analytically
show("16502087*N + 5445103", "125000000", lo=1)

# two crossings, one of them at an integer
show("power(N, 2)", "2*N + 3")

# exponential against polynomial: 2^N dips below N^2 only at N = 3
show("power(2, N)", "power(N, 2)")

# logarithm on a bounded range is compared by exact evaluation
show("log(2, N + 1)", "3", hi=100)
