"""Finite certificates: medians, order-property chains, alternations, shattering."""

# %% Median of 2n-1 values equals the max over n-subsets of their minimum
import itertools
from fractions import Fraction

import numpy as np

from intervalqe.clstats import alternation_count, is_shattered, med, order_property

v = [3, 0, Fraction(1, 2), 7, 1]
brute = max(min(s) for s in itertools.combinations(v, 3))
print("med:", med(v), " brute force:", brute)

# %% A value matrix that is far from symmetric along a long chain
n = 12
upper = (np.arange(n)[:, None] < np.arange(n)[None, :]).astype(int)
w = order_property(upper.tolist(), 1)
print("chain:", w.chain, "length", len(w.chain))

# a symmetric matrix has no witness at all
rng = np.random.default_rng(0)
m = rng.integers(0, 5, size=(8, 8))
print("symmetric:", order_property((m + m.T).tolist(), Fraction(1, 10)))

# a noisy matrix: the longest eps-asymmetric chain found by branch and bound
noisy = rng.integers(0, 4, size=(15, 15))
print("noisy chain:", order_property(noisy.tolist(), 2).chain)

# %% Alternations between a low band and a high band
seq = [0, 1, Fraction(1, 2), 0, 0, 1, 1, 0]
print("alternations:", alternation_count(seq, r=1, s=0))

# %% Shattering: every column pattern must appear as a row
cube = list(itertools.product((0, 1), repeat=3))
print(is_shattered(cube), is_shattered(cube[:-1]))
