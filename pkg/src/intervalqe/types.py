"""Type classification over finite parameter sets in the lexicographic model.

For parameters ``A`` let ``V_A`` be the Q-span of ``A`` together with 1.
Elements outside ``V_A + mu`` (``mu`` the infinitesimals) all satisfy
``k*x != t`` and ``~R[r](t, k*x)`` for every ``t`` in ``V_A``, so they share
one type over ``A``; elements inside are described by their mu-coset, i.e. by
coordinates in ``V_A / (V_A & mu)``.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from typing import Sequence

import numpy as np

from .formula import Equal, Formula, Term, Within
from .semantics import NsElt, UNIT, eval_ns

__all__ = [
    "EchelonBasis", "TypeDescriptor", "AtomBatch", "EmptyTypeClass", "TypeCheck",
    "span_reduce", "in_mu", "standard_projection", "classify_coset",
    "classify_empty", "sample_atoms", "type_equal_sampled",
]


@dataclass(frozen=True)
class EchelonBasis:
    """Reduced echelon basis: each vector has coefficient 1 at its pivot
    (its largest scale) and 0 at every other vector's pivot."""

    vectors: tuple[NsElt, ...]

    @property
    def pivots(self):
        return tuple(v.items[0][0] for v in self.vectors)

    def __len__(self) -> int:
        return len(self.vectors)

    def coordinates(self, v: NsElt) -> tuple[Fraction, ...] | None:
        """Coordinates of ``v`` in this basis, or None when ``v`` is outside the span."""
        coords = tuple(v.coeff(p) for p in self.pivots)
        rebuilt = NsElt()
        for c, b in zip(coords, self.vectors):
            rebuilt = rebuilt + c * b
        return coords if rebuilt == v else None

    def contains(self, v: NsElt) -> bool:
        return self.coordinates(v) is not None


def span_reduce(elements: Sequence[NsElt]) -> EchelonBasis:
    """Echelon basis of ``Lin_Q(elements + [1])``."""
    basis: list[NsElt] = []
    for v in [NsElt.rational(1), *elements]:
        for b in basis:
            c = v.coeff(b.items[0][0])
            if c:
                v = v - c * b
        if v.is_zero():
            continue
        v = v / v.items[0][1]
        p = v.items[0][0]
        basis = [b - b.coeff(p) * v if b.coeff(p) else b for b in basis]
        basis.append(v)
    basis.sort(key=lambda b: b.items[0][0])
    return EchelonBasis(tuple(basis))


def in_mu(a: NsElt) -> bool:
    """Infinitesimal: supported on ``e`` scales only (0 included)."""
    return all(s[0] == 2 for s in a.support)


def standard_projection(a: NsElt) -> NsElt:
    """``a`` with its infinitesimal coordinates dropped (a representative of ``a + mu``)."""
    return NsElt((s, c) for s, c in a.items if s[0] != 2)


@dataclass(frozen=True)
class TypeDescriptor:
    kind: str  # "generic" or "coset"
    coords: tuple[Fraction, ...] | None = None

    def to_json(self) -> dict:
        if self.kind == "generic":
            return {"kind": "generic"}
        return {"kind": "coset", "coords": [str(c) for c in self.coords]}


def classify_coset(a: NsElt, params: Sequence[NsElt]) -> TypeDescriptor:
    basis = span_reduce([standard_projection(p) for p in params])
    coords = basis.coordinates(standard_projection(a))
    if coords is None:
        return TypeDescriptor("generic")
    return TypeDescriptor("coset", coords)


@dataclass(frozen=True)
class EmptyTypeClass:
    kind: str  # positive_infinite, negative_infinite, rational, rational_plus, rational_minus, generic_mu_coset
    value: Fraction | None = None

    def to_json(self) -> dict:
        out = {"kind": self.kind}
        if self.value is not None:
            out["value"] = str(self.value)
        return out


def classify_empty(a: NsElt) -> EmptyTypeClass:
    """Type of ``a`` over the empty set.

    Infinite elements of one sign share a type; rationals are definable;
    ``q + h`` for positive (negative) infinitesimal ``h`` realise one type each.
    Irrational standard parts are not representable, so ``generic_mu_coset``
    never occurs here.
    """
    if a.items and a.items[0][0][0] == 0:
        return EmptyTypeClass("positive_infinite" if a.sign() > 0 else "negative_infinite")
    q = a.coeff(UNIT)
    h = a - NsElt.rational(q)
    if h.is_zero():
        return EmptyTypeClass("rational", q)
    return EmptyTypeClass("rational_plus" if h.sign() > 0 else "rational_minus", q)


# ------------------------------------------------------------ atom sampling


@dataclass(frozen=True)
class SampledAtom:
    kind: str  # "eq": k*x = t, "left": R[r](k*x, t), "right": R[r](t, k*x)
    k: int
    r: int
    coeffs: tuple[int, ...]  # on the parameters, in order
    const: int

    def formula(self, names: Sequence[str], var: str = "x") -> Formula:
        kx = Term.var(var) * self.k
        t = Term.of(zip(names, self.coeffs), self.const)
        if self.kind == "eq":
            return Equal(kx, t)
        if self.kind == "left":
            return Within(self.r, kx, t)
        return Within(self.r, t, kx)


@dataclass(frozen=True)
class TypeCheck:
    consistent: bool
    samples: int
    witness: Formula | None = None
    params: tuple[str, ...] = ()


def param_names(n: int) -> tuple[str, ...]:
    return tuple(f"p{i + 1}" for i in range(n))


@dataclass(frozen=True)
class AtomBatch:
    """Sampled atoms stored column-wise; ``kind`` codes 0 eq, 1 left, 2 right."""

    kind: np.ndarray
    k: np.ndarray
    r: np.ndarray
    coeffs: np.ndarray  # (n_atoms, n_params)
    const: np.ndarray

    def __len__(self) -> int:
        return len(self.kind)

    def __getitem__(self, i: int) -> SampledAtom:
        return SampledAtom(_KINDS[int(self.kind[i])], int(self.k[i]), int(self.r[i]),
                           tuple(int(c) for c in self.coeffs[i]), int(self.const[i]))

    def __iter__(self):
        return (self[i] for i in range(len(self)))


_KINDS = ("eq", "left", "right")


def sample_atoms(n_params: int, budget: int, seed: int, k_max: int = 10,
                 r_max: int = 10, coef_max: int = 5) -> AtomBatch:
    """``budget`` atoms with ``0 < |k| <= k_max``, ``1 <= r <= r_max`` and
    coefficients in ``[-coef_max, coef_max]``."""
    rng = np.random.default_rng(seed)
    k = rng.integers(1, k_max, size=budget, endpoint=True) * rng.choice((-1, 1), size=budget)
    return AtomBatch(
        kind=rng.integers(0, 3, size=budget),
        k=k.astype(np.int64),
        r=rng.integers(1, r_max, size=budget, endpoint=True),
        coeffs=rng.integers(-coef_max, coef_max, size=(budget, n_params), endpoint=True),
        const=rng.integers(-coef_max, coef_max, size=budget, endpoint=True),
    )


def _truth_table(atoms: AtomBatch, x: NsElt, params: Sequence[NsElt]) -> np.ndarray | None:
    """Vectorised truth values of the sampled atoms at ``x``.

    Works on integer coordinates scaled by a common denominator; returns None
    if the int64 range could overflow.
    """
    elems = [x, NsElt.rational(1), *params]
    scales = sorted({s for e in elems for s in e.support} | {UNIT})
    den = reduce(math.lcm, (c.denominator for e in elems for _, c in e.items), 1)
    col = {s: j for j, s in enumerate(scales)}

    def vec(e: NsElt) -> list[int]:
        v = [0] * len(scales)
        for s, c in e.items:
            v[col[s]] = int(c * den)
        return v

    rows = [vec(p) for p in params] + [vec(NsElt.rational(1))]
    xv = vec(x)
    biggest = max(abs(a) for a in [*xv, *(a for r in rows for a in r), 1])
    if len(atoms) == 0:
        return np.zeros(0, dtype=bool)
    bound = (int(np.abs(atoms.k).max()) + int(np.abs(atoms.coeffs).max(initial=0)) * len(params)
             + int(np.abs(atoms.const).max()) + int(atoms.r.max()))
    if biggest * bound >= 2**62:
        return None
    pm = np.array(rows, dtype=np.int64)
    unit = pm[-1]
    coef = np.concatenate([atoms.coeffs.reshape(len(atoms), len(params)), atoms.const[:, None]], axis=1)
    t = coef.astype(np.int64) @ pm
    kx = atoms.k[:, None] * np.array(xv, dtype=np.int64)[None, :]
    diff = np.where((atoms.kind == 2)[:, None], kx - t, t - kx)

    def lexsign(d: np.ndarray) -> np.ndarray:
        nz = d != 0
        first = d[np.arange(len(d)), nz.argmax(axis=1)]
        return np.sign(first) * nz.any(axis=1)

    within = (lexsign(diff) >= 0) & (lexsign(diff - atoms.r[:, None] * unit[None, :]) <= 0)
    equal = ~(diff != 0).any(axis=1)
    return np.where(atoms.kind == 0, equal, within)


def type_equal_sampled(a: NsElt, b: NsElt, params: Sequence[NsElt], budget: int = 1000,
                       seed: int = 0, k_max: int = 10, r_max: int = 10,
                       coef_max: int = 5) -> TypeCheck:
    """Look for an atom ``k*x = t``, ``R[r](k*x, t)`` or ``R[r](t, k*x)``
    (``t`` a small integer combination of ``params`` and 1) separating ``a``
    from ``b``."""
    names = param_names(len(params))
    atoms = sample_atoms(len(params), budget, seed, k_max, r_max, coef_max)
    if not atoms:
        return TypeCheck(True, 0, None, names)
    env = dict(zip(names, params))
    ta = _truth_table(atoms, a, params)
    tb = _truth_table(atoms, b, params)
    if ta is None or tb is None:
        candidates = range(len(atoms))
    else:
        candidates = np.flatnonzero(ta != tb).tolist()
    for i in candidates:
        f = atoms[i].formula(names)
        if eval_ns(f, {**env, "x": a}) != eval_ns(f, {**env, "x": b}):
            return TypeCheck(False, len(atoms), f, names)
        if ta is not None:
            raise AssertionError(f"vectorised atom evaluation disagrees with eval_ns on atom {i}")
    return TypeCheck(True, len(atoms), None, names)
