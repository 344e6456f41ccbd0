"""Classifying elements over a finite parameter set.

Over parameters A, an element either lands in a coset of the span of
A and 1 modulo infinitesimals (described by coordinates), or is generic.
Generic elements cannot be told apart by any atom with parameters from A.
"""

# %% Spans and cosets
from intervalqe.formula import to_text
from intervalqe.semantics import parse_ns
from intervalqe.types import classify_coset, classify_empty, span_reduce, type_equal_sampled

A = [parse_ns("W1"), parse_ns("2*W1 + 1")]
print("basis:", [str(v) for v in span_reduce(A).vectors])

for text in ["W1 + e1", "3*W1 - 1/2", "W2", "W2 + W1"]:
    print(f"{text:12} ->", classify_coset(parse_ns(text), A).to_json())

# %% Shifting by an infinitesimal never changes the coset
a = parse_ns("3*W1 - 1/2")
print(classify_coset(a, A) == classify_coset(a + parse_ns("5*e1 - e3"), A))

# %% Two generic elements agree on every sampled atom
check = type_equal_sampled(parse_ns("W2"), parse_ns("-7*W3 + 1/2*W2 + e1"), A, budget=1000, seed=0)
print("generic pair consistent on", check.samples, "atoms:", check.consistent)

# %% Distinct rationals are separated, and the separating atom is reported
check = type_equal_sampled(parse_ns("1"), parse_ns("2"), [], budget=1000, seed=0)
print("witness:", to_text(check.witness))

# %% Types over the empty set
for text in ["W1 - 100", "-W2", "2", "1 - e3", "1/3 + e1"]:
    print(f"{text:10} ->", classify_empty(parse_ns(text)).to_json())
