"""Resolution-step bounds for classic list and arithmetic predicates, checked
against a reference interpreter.

Run from the repository root:  python3 demos/steps_analysis.py
"""
from pathlib import Path

from enverif.analysis import analyze_program
from enverif.costfn import evaluate, render
from enverif.hcir import Int, Var, make_list, measure, parse_program
from enverif.sizedtypes import parse_signatures

FIX = Path(__file__).resolve().parent.parent / "fixtures"
sigs = parse_signatures((FIX / "lists.sig").read_text())


def int_list(n):
    return make_list([Int(i) for i in range(n)])


CASES = [
    ("append", "append/3", "A", lambda n: [int_list(n), int_list(2), Var("C")]),
    ("nrev", "nrev/2", "A", lambda n: [int_list(n), Var("R")]),
    ("fact", "fact/2", "N", lambda n: [Int(n), Var("F")]),
]

for name, key, var, args in CASES:
    program = parse_program((FIX / f"{name}.hcir").read_text())
    result = analyze_program(program, sigs, None, "steps")
    pred = result.preds[key]
    cost = pred.cost
    print(f"{key}: steps in [{render(cost.lower.expr)}, {render(cost.upper.expr)}]")
    for out, sb in pred.sizes.items():
        print(f"  size of {out}: [{render(sb.lo)}, {render(sb.hi)}]")

    # the interpreter counts one step per clause entered
    print(f"  {var:>3} {'measured':>9} {'inferred':>9}")
    for n in (0, 1, 2, 5, 10, 20):
        env = {v: 2 for v in cost.upper.vars}
        env[var] = n
        got = measure(program, name, args(n))
        want = evaluate(cost.upper.expr, env)
        print(f"  {n:>3} {int(got):>9} {int(want):>9}")
    print()
