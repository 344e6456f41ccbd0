"""Exact evaluation of quantifier-free formulas.

Rationals are :class:`fractions.Fraction`.  The nonstandard model is the
finitely supported lexicographic Q-vector space over the scales

    W1 > W2 > ... > 1 > e1 > e2 > ...

An element with a nonzero ``W`` coordinate is infinite, one supported only on
``e`` scales is infinitesimal.  As a divisible ordered abelian group with a
distinguished positive element it is elementarily equivalent to the reals
with ``+, <=, 1``, hence a model of the same theory in ``+`` and ``I``/``R``.
"""

from __future__ import annotations

import re
from fractions import Fraction
from functools import total_ordering
from typing import Iterable, Mapping, Union

from .formula import (
    And, Bottom, Equal, Exists, Forall, Formula, Iff, Implies, InUnit, Not,
    Or, Top, Within, free_vars,
)

__all__ = [
    "Scale", "UNIT", "NsElt", "EvaluationError", "eval_q", "eval_ns",
    "ns_cmp", "parse_rat", "parse_ns", "parse_assignment",
]

Rat = Fraction
Scale = tuple[int, int]
"""Scale key: ``(0, k)`` is ``Wk``, ``(1, 0)`` the unit, ``(2, k)`` is ``ek``.

Keys sort in decreasing order of magnitude, so lexicographic comparison
scans support keys in ascending order.
"""

UNIT: Scale = (1, 0)


def W(k: int) -> Scale:
    return (0, k)


def eps(k: int) -> Scale:
    return (2, k)


def scale_name(s: Scale) -> str:
    cls, k = s
    return "1" if cls == 1 else (f"W{k}" if cls == 0 else f"e{k}")


class EvaluationError(ValueError):
    pass


@total_ordering
class NsElt:
    """Element of the lexicographic nonstandard model (immutable)."""

    __slots__ = ("_items", "_hash")

    def __init__(self, coords: Mapping[Scale, Rat] | Iterable[tuple[Scale, Rat]] = ()):
        items = coords.items() if isinstance(coords, Mapping) else coords
        acc: dict[Scale, Fraction] = {}
        for s, c in items:
            if s[0] not in (0, 1, 2) or (s[0] != 1 and s[1] < 1):
                raise ValueError(f"bad scale {s!r}")
            acc[s] = acc.get(s, Fraction(0)) + Fraction(c)
        self._items = tuple(sorted((s, c) for s, c in acc.items() if c))
        self._hash = None

    @classmethod
    def _raw(cls, items: tuple) -> NsElt:
        obj = cls.__new__(cls)
        obj._items = items
        obj._hash = None
        return obj

    @classmethod
    def rational(cls, q) -> NsElt:
        q = Fraction(q)
        return cls._raw(((UNIT, q),) if q else ())

    @property
    def items(self) -> tuple[tuple[Scale, Fraction], ...]:
        """Nonzero coordinates sorted from the largest scale down."""
        return self._items

    @property
    def support(self) -> tuple[Scale, ...]:
        return tuple(s for s, _ in self._items)

    def coeff(self, s: Scale) -> Fraction:
        for t, c in self._items:
            if t == s:
                return c
        return Fraction(0)

    def sign(self) -> int:
        if not self._items:
            return 0
        return 1 if self._items[0][1] > 0 else -1

    def is_zero(self) -> bool:
        return not self._items

    def __add__(self, other) -> NsElt:
        if not isinstance(other, NsElt):
            if isinstance(other, (int, Fraction)):
                other = NsElt.rational(other)
            else:
                return NotImplemented
        a, b = self._items, other._items
        if not a:
            return other
        if not b:
            return self
        out = []
        i = j = 0
        while i < len(a) and j < len(b):
            sa, sb = a[i][0], b[j][0]
            if sa == sb:
                c = a[i][1] + b[j][1]
                if c:
                    out.append((sa, c))
                i += 1
                j += 1
            elif sa < sb:
                out.append(a[i])
                i += 1
            else:
                out.append(b[j])
                j += 1
        out.extend(a[i:])
        out.extend(b[j:])
        return NsElt._raw(tuple(out))

    __radd__ = __add__

    def __neg__(self) -> NsElt:
        return NsElt._raw(tuple((s, -c) for s, c in self._items))

    def __sub__(self, other) -> NsElt:
        return self + (-other)

    def __rsub__(self, other) -> NsElt:
        return (-self) + other

    def __mul__(self, k) -> NsElt:
        if not isinstance(k, (int, Fraction)):
            return NotImplemented
        if not k:
            return NsElt._raw(())
        return NsElt._raw(tuple((s, c * k) for s, c in self._items))

    __rmul__ = __mul__

    def __truediv__(self, k) -> NsElt:
        if not isinstance(k, (int, Fraction)):
            return NotImplemented
        if not k:
            raise ZeroDivisionError("NsElt division by zero")
        return self * (1 / Fraction(k))

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = NsElt.rational(other)
        if not isinstance(other, NsElt):
            return NotImplemented
        return self._items == other._items

    def __lt__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = NsElt.rational(other)
        if not isinstance(other, NsElt):
            return NotImplemented
        return (self - other).sign() < 0

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self._items)
        return self._hash

    def __repr__(self) -> str:
        return f"NsElt({str(self)!r})"

    def __str__(self) -> str:
        if not self._items:
            return "0"
        parts = []
        for s, c in self._items:
            mag = abs(c)
            if s == UNIT:
                body = str(mag)
            else:
                body = scale_name(s) if mag == 1 else f"{mag}*{scale_name(s)}"
            if not parts:
                parts.append(body if c > 0 else "-" + body)
            else:
                parts.append((" + " if c > 0 else " - ") + body)
        return "".join(parts)


def ns_cmp(a: NsElt, b: NsElt) -> int:
    """-1, 0 or 1 as ``a`` is less than, equal to, or greater than ``b``."""
    return (a - b).sign()


# ------------------------------------------------------------------- parsing

_RAT = re.compile(r"^\s*([+-]?\d+)(?:\s*/\s*(\d+))?\s*$")
_DEC = re.compile(r"^\s*[+-]?(\d+\.?\d*|\.\d+)\s*$")


def parse_rat(text: str) -> Fraction:
    """Exact rational from ``p/q``, an integer, or a decimal literal."""
    m = _RAT.match(text)
    if m:
        den = int(m.group(2)) if m.group(2) else 1
        if den == 0:
            raise ValueError(f"zero denominator in {text!r}")
        return Fraction(int(m.group(1)), den)
    if _DEC.match(text):
        return Fraction(text.strip())
    raise ValueError(f"not a rational number: {text!r}")


_NS_TERM = re.compile(
    r"\s*([+-])?\s*(?:(\d+(?:/\d+)?)\s*\*\s*)?(W\d+|e\d+|\d+(?:/\d+)?)\s*")


def parse_ns(text: str) -> NsElt:
    """Parse e.g. ``"2*W1 + 3/2 - 1/7*e2"``."""
    pos = 0
    coords: list[tuple[Scale, Fraction]] = []
    text = text.strip()
    if not text:
        raise ValueError("empty element")
    first = True
    while pos < len(text):
        m = _NS_TERM.match(text, pos)
        if not m or m.end() == pos or (not first and not m.group(1)):
            raise ValueError(f"cannot parse nonstandard element {text!r} at position {pos}")
        sign = -1 if m.group(1) == "-" else 1
        coef = parse_rat(m.group(2)) if m.group(2) else Fraction(1)
        sym = m.group(3)
        if sym[0] == "W":
            s = W(int(sym[1:]))
        elif sym[0] == "e":
            s = eps(int(sym[1:]))
        else:
            if m.group(2):
                raise ValueError(f"coefficient on a bare number in {text!r}")
            s, coef = UNIT, parse_rat(sym)
        if s[0] != 1 and s[1] < 1:
            raise ValueError(f"scale indices start at 1: {sym}")
        coords.append((s, sign * coef))
        pos = m.end()
        first = False
    return NsElt(coords)


def parse_assignment(text: str, model: str = "q") -> dict:
    """Parse ``"x=1/2,y=2*W1+e1"`` into a variable map."""
    out: dict = {}
    if not text.strip():
        return out
    for part in text.split(","):
        name, sep, value = part.partition("=")
        name = name.strip()
        if not sep or not re.fullmatch(r"[a-z][a-z0-9]*", name):
            raise ValueError(f"bad assignment entry {part!r}")
        out[name] = parse_rat(value) if model == "q" else parse_ns(value)
    return out


# ---------------------------------------------------------------- evaluation


def _eval(f: Formula, env: Mapping, one, zero) -> bool:
    if isinstance(f, Within):
        d = f.rhs.value(env, one) - f.lhs.value(env, one)
        return zero <= d <= f.width * one
    if isinstance(f, InUnit):
        v = f.term.value(env, one)
        return zero <= v <= one
    if isinstance(f, Equal):
        return f.lhs.value(env, one) == f.rhs.value(env, one)
    if isinstance(f, Not):
        return not _eval(f.arg, env, one, zero)
    if isinstance(f, And):
        return all(_eval(a, env, one, zero) for a in f.args)
    if isinstance(f, Or):
        return any(_eval(a, env, one, zero) for a in f.args)
    if isinstance(f, Implies):
        return (not _eval(f.lhs, env, one, zero)) or _eval(f.rhs, env, one, zero)
    if isinstance(f, Iff):
        return _eval(f.lhs, env, one, zero) == _eval(f.rhs, env, one, zero)
    if isinstance(f, Top):
        return True
    if isinstance(f, Bottom):
        return False
    if isinstance(f, (Exists, Forall)):
        raise EvaluationError("cannot evaluate a quantified formula directly; eliminate quantifiers first")
    raise TypeError(f"unknown formula node {f!r}")


def _check_env(f: Formula, env: Mapping) -> None:
    missing = free_vars(f) - env.keys()
    if missing:
        raise EvaluationError(f"assignment misses variables: {', '.join(sorted(missing))}")


def eval_q(f: Formula, assignment: Mapping[str, Union[int, Fraction]]) -> bool:
    """Truth value of a quantifier-free formula at a rational point."""
    _check_env(f, assignment)
    env = {k: Fraction(v) for k, v in assignment.items()}
    return _eval(f, env, Fraction(1), Fraction(0))


def eval_ns(f: Formula, assignment: Mapping[str, NsElt]) -> bool:
    """Truth value of a quantifier-free formula in the nonstandard model."""
    _check_env(f, assignment)
    env = {k: v if isinstance(v, NsElt) else NsElt.rational(v) for k, v in assignment.items()}
    return _eval(f, env, NsElt.rational(1), NsElt())
