"""Translations between the ``I`` and ``R[r]`` signatures."""

from __future__ import annotations

from .formula import (
    And, Bottom, Equal, Exists, Forall, Formula, Iff, Implies, InUnit, Literal,
    Not, Or, Term, Top, Within,
)

__all__ = ["to_lprime", "to_l", "normalize_r", "map_atoms"]

_ZERO = Term()


def map_atoms(f: Formula, fn) -> Formula:
    """Rebuild ``f`` with every atom replaced by ``fn(atom)``."""
    if isinstance(f, (Equal, Within, InUnit)):
        return fn(f)
    if isinstance(f, (Top, Bottom)):
        return f
    if isinstance(f, Not):
        return Not(map_atoms(f.arg, fn))
    if isinstance(f, (And, Or)):
        return type(f)(tuple(map_atoms(a, fn) for a in f.args))
    if isinstance(f, (Implies, Iff)):
        return type(f)(map_atoms(f.lhs, fn), map_atoms(f.rhs, fn))
    if isinstance(f, (Exists, Forall)):
        return type(f)(f.var, map_atoms(f.body, fn))
    raise TypeError(f"unknown formula node {f!r}")


def _i_to_r(a):
    return Within(1, _ZERO, a.term) if isinstance(a, InUnit) else a


def _r_to_i(a):
    if not isinstance(a, Within):
        return a
    d = a.rhs - a.lhs
    parts = tuple(InUnit(d - k) for k in range(a.width))
    return parts[0] if len(parts) == 1 else Or(parts)


def to_lprime(f: Formula) -> Formula:
    """Replace each ``I(t)`` by ``R[1](0, t)``."""
    return map_atoms(f, _i_to_r)


def to_l(f: Formula) -> Formula:
    """Replace each ``R[r](s, t)`` by ``I(t-s) | I(t-s-1) | ... | I(t-s-(r-1))``."""
    return map_atoms(f, _r_to_i)


def normalize_r(lit: Literal) -> Literal:
    """Move an R-literal to the form ``R[r](0, t)``, keeping its polarity."""
    a = lit.atom
    if not isinstance(a, Within):
        raise TypeError("normalize_r expects an R-literal")
    return Literal(lit.positive, Within(a.width, _ZERO, a.rhs - a.lhs))
