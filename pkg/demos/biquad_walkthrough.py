"""Walk through verification of an energy budget for a biquad filter cascade.

Run from the repository root:  python3 demos/biquad_walkthrough.py
"""
from pathlib import Path

from enverif.analysis import analyze_program
from enverif.assertlang import print_pragma, read_spec
from enverif.costfn import evaluate, render
from enverif.costmodel import load_model
from enverif.hcir import parse_program, print_program
from enverif.sizedtypes import parse_signatures
from enverif.verifier import entries_from_spec, split_to_assertions, verify_program

FIX = Path(__file__).resolve().parent.parent / "fixtures"


def banner(title):
    print()
    print(f"== {title} " + "=" * (60 - len(title)))


# %% The program: a prologue followed by a loop over N filter sections.
program = parse_program((FIX / "biquad.hcir").read_text())
sigs = parse_signatures((FIX / "biquad.sig").read_text())
model = load_model((FIX / "biquad.json").read_text())

banner("program")
print(print_program(program))
print(f"energy model: {len(model.entries)} instructions, unit {model.unit}")

# %% Cost inference.  The loop's cost is a recurrence in N; its closed form
# is the inferred interval, exact here because every leaf cost is a point.
banner("inferred energy")
result = analyze_program(program, sigs, model, "energy")
for key in ("biquad_loop/4", "biquadCascade/4"):
    cost = result.cost(key)
    print(f"{key:18} [{render(cost.lower.expr)}, {render(cost.upper.expr)}]")
for rec in result.recurrences:
    print("  " + str(rec).replace("\n", "\n  "))

# %% Verification against a 125 mJ budget (in nJ).
banner("specification")
spec = read_spec((FIX / "biquad.spec").read_text(), "biquad.spec")
print("\n".join(spec.lines))

report = verify_program(program, sigs, model, entries_from_spec(spec, sigs))
(outcome,) = report.outcomes

banner("verdicts")
for region in outcome.verdicts:
    print(f"  N in {region.lo}..{region.hi}: {region.status}")
for a in split_to_assertions(outcome):
    print(print_pragma(a))

# %% Where does the budget run out?  Evaluate the cost around the cut.
banner("around the cut")
upper = result.cost("biquadCascade/4").upper.expr
for n in range(6, 10):
    e = evaluate(upper, {"N": n})
    print(f"  N={n}: {int(e):>11} nJ  {'within' if e <= 125_000_000 else 'over'} budget")
