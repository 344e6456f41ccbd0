"""Arithmetic in a lexicographic Q-vector space with infinite and infinitesimal scales.

Elements are finite sums of scales W1 > W2 > ... > 1 > e1 > e2 > ... with
rational coefficients, ordered by the leading nonzero coefficient.
"""

# %% Building elements
from intervalqe.formula import parse
from intervalqe.semantics import NsElt, eval_ns, eval_q, ns_cmp, parse_ns

a = parse_ns("2*W1 + 3/2 - 1/7*e2")
h = parse_ns("e1")
one = NsElt.rational(1)
print("a =", a, "  a/3 =", a / 3, "  -a =", -a)

# %% Ordering: infinite beats every rational, infinitesimals sit below every positive rational
print(ns_cmp(parse_ns("W1"), NsElt.rational(10**6)))  # 1
print(ns_cmp(one - h, one))                            # -1
print(ns_cmp(h, parse_ns("e2")))                       # 1

# %% The atoms I and R[r] make sense verbatim
unit = parse("I(x)")
print("e1 in [0,1]:", eval_ns(unit, {"x": h}))
print("W1 in [0,1]:", eval_ns(unit, {"x": parse_ns("W1")}))
print("n*e1 in [0,1] for n <= 100:", all(eval_ns(parse(f"I({n}*x)"), {"x": h}) for n in range(1, 101)))

# %% Rationals embed: quantifier-free formulas keep their truth value
f = parse("R[2](x, 3*x) & ~x = y")
env = {"x": 1, "y": 2}
print(eval_q(f, env), eval_ns(f, {k: NsElt.rational(v) for k, v in env.items()}))
