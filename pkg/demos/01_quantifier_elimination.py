"""Eliminating quantifiers over (R, +, [0, 1]).

Run with ``python3 demos/01_quantifier_elimination.py``.
"""

# %% Parsing and printing
from fractions import Fraction

from intervalqe import decide, parse, qe, solve_qf, to_text
from intervalqe.oracle import equiv_test
from intervalqe.rewrite import to_l

f = parse("E y. (I(y) & I(x - y))")
print("formula:      ", to_text(f))

# %% qe returns an equivalent quantifier-free formula over the width atoms R[r]
q = qe(f)
print("eliminated:   ", to_text(q))
print("back in I-form:", to_text(to_l(q)))

# the one-variable solution set is an exact finite union of intervals
print("x ranges over:", solve_qf(q, "x"))

# %% Checking the answer against an independent decision procedure
report = equiv_test(f, q, cases=1000, seed=0)
print(f"sampled agreement: {report.agreements}/{report.cases}")

# %% The number 1 is definable without parameters
one = parse("I(x) & A y. (I(y) -> I(x - y))")
print("1 as a solution set:", solve_qf(qe(one), "x"))

# %% A window of width 2*eps around 0, with eps supplied as a parameter
window = parse("I(x + y) & I(x - y + 1)")
for e in (Fraction(1, 4), Fraction(1, 10), Fraction(1, 2)):
    print(f"eps = {e}:", solve_qf(qe(window), "x", {"y": e}))

# %% Sentences are decided outright
for text in [
    "A x. (I(x) -> I(x))",
    "E x. (I(x) & I(x - 2))",
    "E x. (I(x) & ~(x = 0) & ~(x = 1))",
    "A x. E y. (2*y = x)",
    "E x. A y. (I(y) -> I(x + 2*y))",
]:
    print(f"{decide(parse(text))!s:5}  {text}")
