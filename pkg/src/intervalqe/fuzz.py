"""Seeded random formulas and rational assignments for differential testing."""

from __future__ import annotations

import random
from fractions import Fraction
from typing import Sequence

from .formula import (
    And, Equal, Exists, Forall, Formula, Iff, Implies, InUnit, Not, Or, Term,
    Within, L, LP,
)

__all__ = ["random_rational", "random_assignment", "random_term", "random_formula"]

FREE_VARS = ("x", "u")
BOUND_VARS = ("y", "w", "v", "s")


def random_rational(rng: random.Random) -> Fraction:
    """40% integers in [-5, 5], 40% dyadics (denominator <= 64), 20% denominators up to 10**4."""
    p = rng.random()
    if p < 0.4:
        return Fraction(rng.randint(-5, 5))
    if p < 0.8:
        den = 2 ** rng.randint(1, 6)
    else:
        den = rng.randint(1, 10**4)
    return Fraction(rng.randint(-5 * den, 5 * den), den)


def random_assignment(rng: random.Random, names: Sequence[str]) -> dict[str, Fraction]:
    return {v: random_rational(rng) for v in sorted(names)}


def random_term(rng: random.Random, scope: Sequence[str], must: str | None = None) -> Term:
    coeffs = {}
    for v in scope:
        if v == must or rng.random() < 0.35:
            c = rng.choice((1, 1, 1, -1, -1, 2, -2, 3))
            coeffs[v] = c
    return Term.of(coeffs, rng.randint(-2, 2))


def _random_atom(rng: random.Random, lang: str, scope: Sequence[str], must: str | None):
    roll = rng.random()
    if roll < 0.25:
        return Equal(random_term(rng, scope, must), random_term(rng, scope))
    if lang == L:
        return InUnit(random_term(rng, scope, must))
    lhs = random_term(rng, scope, must) if rng.random() < 0.5 else Term.constant(rng.randint(-1, 1))
    return Within(rng.randint(1, 3), lhs, random_term(rng, scope, must))


def random_formula(rng: random.Random, depth: int = 3, atoms: int = 6,
                   lang: str | None = None, free: Sequence[str] = FREE_VARS) -> Formula:
    """A formula with quantifier depth <= ``depth`` and at most ``atoms`` atoms.

    ``lang`` is ``"L"`` or ``"Lp"``; ``None`` picks one at random.
    """
    if lang is None:
        lang = rng.choice((L, LP))
    n_atoms = rng.randint(1, atoms)
    return _gen(rng, lang, n_atoms, depth, list(free), None)


def _gen(rng, lang, n_atoms, depth, scope, must) -> Formula:
    if depth > 0 and rng.random() < 0.45:
        var = next(v for v in BOUND_VARS if v not in scope)
        body = _gen(rng, lang, n_atoms, depth - 1, scope + [var], var)
        return (Exists if rng.random() < 0.5 else Forall)(var, body)
    if n_atoms == 1:
        atom = _random_atom(rng, lang, scope, must)
        return Not(atom) if rng.random() < 0.3 else atom
    k = rng.randint(1, n_atoms - 1)
    # only one side inherits the obligation to mention the latest bound variable
    left_must, right_must = (must, None) if rng.random() < 0.5 else (None, must)
    left = _gen(rng, lang, k, depth, scope, left_must)
    right = _gen(rng, lang, n_atoms - k, depth, scope, right_must)
    roll = rng.random()
    if roll < 0.4:
        f = And((left, right))
    elif roll < 0.75:
        f = Or((left, right))
    elif roll < 0.9:
        f = Implies(left, right)
    else:
        f = Iff(left, right)
    return Not(f) if rng.random() < 0.1 else f
