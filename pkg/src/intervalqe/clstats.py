"""Finite certificates for stability-style properties of value matrices."""

from __future__ import annotations

import csv
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .semantics import parse_rat

__all__ = [
    "med", "OrderWitness", "order_property", "max_asymmetry",
    "alternation_count", "is_shattered", "read_matrix",
]


def med(values: Sequence) -> Fraction:
    """Median of an odd-length list (the median value connective)."""
    n = len(values)
    if n == 0 or n % 2 == 0:
        raise ValueError(f"med needs an odd, nonzero number of values, got {n}")
    return sorted(Fraction(v) for v in values)[n // 2]


@dataclass(frozen=True)
class OrderWitness:
    chain: tuple[int, ...]
    budget_exhausted: bool = False

    def to_json(self) -> dict:
        return {"chain": list(self.chain), "length": len(self.chain),
                "budget_exhausted": self.budget_exhausted}


def max_asymmetry(matrix: Sequence[Sequence]) -> Fraction:
    n = len(matrix)
    best = Fraction(0)
    for i in range(n):
        for j in range(i + 1, n):
            best = max(best, abs(Fraction(matrix[i][j]) - Fraction(matrix[j][i])))
    return best


def order_property(matrix: Sequence[Sequence], epsilon, budget: int = 100_000) -> OrderWitness | None:
    """Longest index chain whose every pair ``p < q`` has
    ``|M[p][q] - M[q][p]| >= epsilon``.

    This is a maximum clique in the graph of epsilon-asymmetric pairs, found
    by branch and bound.  ``budget`` caps the number of search nodes; when it
    binds the best chain so far is returned with ``budget_exhausted`` set.
    Returns None when no pair is epsilon-asymmetric.
    """
    epsilon = Fraction(epsilon)
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    n = len(matrix)
    if any(len(row) != n for row in matrix):
        raise ValueError("order_property needs a square matrix")
    vals = [[Fraction(v) for v in row] for row in matrix]
    adj = [set() for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            if abs(vals[i][j] - vals[j][i]) >= epsilon:
                adj[i].add(j)
                adj[j].add(i)
    if not any(adj):
        return None

    best: list[int] = []
    nodes = 0
    exhausted = False

    def extend(chain: list[int], candidates: list[int]) -> None:
        nonlocal best, nodes, exhausted
        if len(chain) > len(best):
            best = list(chain)
        for pos, v in enumerate(candidates):
            if len(chain) + len(candidates) - pos <= len(best):
                return
            nodes += 1
            if nodes > budget:
                exhausted = True
                return
            chain.append(v)
            extend(chain, [w for w in candidates[pos + 1:] if w in adj[v]])
            chain.pop()
            if exhausted:
                return

    # greedy seed: highest-degree vertices first
    order = sorted(range(n), key=lambda v: -len(adj[v]))
    greedy: list[int] = []
    for v in order:
        if all(v in adj[u] for u in greedy):
            greedy.append(v)
    best = greedy
    extend([], list(range(n)))
    return OrderWitness(tuple(sorted(best)), exhausted)


def alternation_count(values: Iterable, r, s) -> int:
    """Switches between the ``<= s`` and ``>= r`` bands, skipping values in between."""
    r, s = Fraction(r), Fraction(s)
    if s >= r:
        raise ValueError("alternation_count needs s < r")
    last = None
    count = 0
    for v in values:
        v = Fraction(v)
        band = "low" if v <= s else "high" if v >= r else None
        if band is None:
            continue
        if last is not None and band != last:
            count += 1
        last = band
    return count


def is_shattered(matrix: Sequence[Sequence]) -> bool:
    """True iff the set of rows is exactly ``{0,1}^cols``."""
    if not matrix:
        return False
    cols = len(matrix[0])
    if len(matrix) < 1 << cols:
        return False
    rows = set(map(tuple, matrix))
    if any(len(row) != cols for row in rows):
        raise ValueError("ragged boolean matrix")
    # 0/1 entries compare equal to False/True, so the set counts patterns directly
    return len(rows) == 1 << cols and all(v in (0, 1) for row in rows for v in row)


def read_matrix(path) -> list[list[Fraction]]:
    """CSV of rationals ``p/q`` or decimals (read exactly)."""
    out = []
    with open(path, newline="") as fh:
        for row in csv.reader(fh):
            cells = [c for c in row if c.strip()]
            if cells:
                out.append([parse_rat(c) for c in cells])
    return out
