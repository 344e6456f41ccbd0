"""Independent checkers for quantifier elimination.

* :class:`IntervalSet` and :func:`solve_primitive`/:func:`solve_qf` compute
  exact one-variable solution sets.
* :func:`vs_decide` decides formulas by virtual substitution in the theory of
  ordered divisible abelian groups with 1, after translating ``R[r](s, t)``
  to ``0 <= t - s <= r``.  It shares no code with :mod:`intervalqe.qe`.
* :func:`equiv_test` compares two formulas on sampled rational points.
"""

from __future__ import annotations

import bisect
import json
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Mapping, Optional

from .formula import (
    And, Bottom, Equal, Exists, Forall, Formula, Iff, Implies, InUnit, Not, Or,
    Term, Top, Within, free_vars, is_quantifier_free,
)
from .semantics import EvaluationError, eval_q

__all__ = [
    "Component", "IntervalSet", "solve_primitive", "solve_qf", "vs_decide",
    "vs_compile", "equiv_test", "EquivReport",
]

Bound = Optional[Fraction]  # None is an infinite endpoint


# ----------------------------------------------------------- interval sets


@dataclass(frozen=True, slots=True)
class Component:
    lo: Bound
    hi: Bound
    lo_closed: bool
    hi_closed: bool

    @property
    def is_point(self) -> bool:
        return self.lo is not None and self.lo == self.hi

    def to_json(self) -> dict:
        if self.is_point:
            return {"kind": "point", "at": str(self.lo)}
        return {
            "kind": "interval",
            "lo": "-inf" if self.lo is None else str(self.lo),
            "lo_closed": self.lo_closed,
            "hi": "+inf" if self.hi is None else str(self.hi),
            "hi_closed": self.hi_closed,
        }

    def __str__(self) -> str:
        if self.is_point:
            return "{" + str(self.lo) + "}"
        lo = "-inf" if self.lo is None else str(self.lo)
        hi = "+inf" if self.hi is None else str(self.hi)
        return ("[" if self.lo_closed else "(") + f"{lo}, {hi}" + ("]" if self.hi_closed else ")")


@dataclass(frozen=True, slots=True)
class IntervalSet:
    """Finite union of intervals and points of Q, in canonical form.

    Stored as sorted breakpoints with membership at each breakpoint and on
    each open gap between consecutive breakpoints (``len(gaps) ==
    len(points) + 1``).  Breakpoints whose membership matches both
    neighbouring gaps are removed, so equal sets have equal representations.
    """

    points: tuple[Fraction, ...] = ()
    at: tuple[bool, ...] = ()
    gaps: tuple[bool, ...] = (False,)

    @staticmethod
    def empty() -> IntervalSet:
        return IntervalSet()

    @staticmethod
    def full() -> IntervalSet:
        return IntervalSet((), (), (True,))

    @staticmethod
    def point(q) -> IntervalSet:
        return IntervalSet((Fraction(q),), (True,), (False, False))

    @staticmethod
    def interval(lo: Bound, hi: Bound, lo_closed: bool = True, hi_closed: bool = True) -> IntervalSet:
        if lo is not None and hi is not None:
            lo, hi = Fraction(lo), Fraction(hi)
            if lo > hi or (lo == hi and not (lo_closed and hi_closed)):
                return IntervalSet.empty()
            if lo == hi:
                return IntervalSet.point(lo)
        pts, at, gaps = [], [], [lo is None]
        if lo is not None:
            pts.append(Fraction(lo))
            at.append(lo_closed)
            gaps.append(True)
        if hi is not None:
            pts.append(Fraction(hi))
            at.append(hi_closed)
            gaps.append(False)
        return IntervalSet(tuple(pts), tuple(at), tuple(gaps))._canonical()

    @staticmethod
    def closed(lo, hi) -> IntervalSet:
        return IntervalSet.interval(Fraction(lo), Fraction(hi), True, True)

    def _canonical(self) -> IntervalSet:
        pts, at, gaps = [], [], [self.gaps[0]]
        for i, p in enumerate(self.points):
            if gaps[-1] == self.at[i] == self.gaps[i + 1]:
                continue
            pts.append(p)
            at.append(self.at[i])
            gaps.append(self.gaps[i + 1])
        return IntervalSet(tuple(pts), tuple(at), tuple(gaps))

    def __contains__(self, q) -> bool:
        q = Fraction(q)
        i = bisect.bisect_left(self.points, q)
        if i < len(self.points) and self.points[i] == q:
            return self.at[i]
        return self.gaps[i]

    def is_empty(self) -> bool:
        return not any(self.at) and not any(self.gaps)

    def _combine(self, other: IntervalSet, op: Callable[[bool, bool], bool]) -> IntervalSet:
        pts = sorted(set(self.points) | set(other.points))
        at = tuple(op(p in self, p in other) for p in pts)
        if pts:
            samples = [pts[0] - 1] + [(a + b) / 2 for a, b in zip(pts, pts[1:])] + [pts[-1] + 1]
        else:
            samples = [Fraction(0)]
        gaps = tuple(op(s in self, s in other) for s in samples)
        return IntervalSet(tuple(pts), at, gaps)._canonical()

    def __and__(self, other: IntervalSet) -> IntervalSet:
        return self._combine(other, lambda a, b: a and b)

    def __or__(self, other: IntervalSet) -> IntervalSet:
        return self._combine(other, lambda a, b: a or b)

    def __invert__(self) -> IntervalSet:
        return IntervalSet(self.points, tuple(not a for a in self.at), tuple(not g for g in self.gaps))

    def __sub__(self, other: IntervalSet) -> IntervalSet:
        return self & ~other

    intersection = __and__
    union = __or__
    complement = __invert__

    def components(self) -> list[Component]:
        # pieces: gap0, pt0, gap1, pt1, ..., gapk
        pieces: list[tuple[bool, str, int]] = []
        for i in range(len(self.points)):
            pieces.append((self.gaps[i], "gap", i))
            pieces.append((self.at[i], "pt", i))
        pieces.append((self.gaps[-1], "gap", len(self.points)))
        out = []
        start = None
        for k, (member, kind, i) in enumerate(pieces + [(False, "end", -1)]):
            if member and start is None:
                start = k
            elif not member and start is not None:
                _, skind, si = pieces[start]
                _, ekind, ei = pieces[k - 1]
                if skind == "pt":
                    lo, lo_closed = self.points[si], True
                else:
                    lo, lo_closed = (None, False) if si == 0 else (self.points[si - 1], False)
                if ekind == "pt":
                    hi, hi_closed = self.points[ei], True
                else:
                    hi, hi_closed = (None, False) if ei == len(self.points) else (self.points[ei], False)
                out.append(Component(lo, hi, lo_closed, hi_closed))
                start = None
        return out

    def to_json(self) -> dict:
        return {"components": [c.to_json() for c in self.components()]}

    def __str__(self) -> str:
        comps = self.components()
        return " u ".join(str(c) for c in comps) if comps else "{}"


# ------------------------------------------------------------ solving


def _value(t: Term, env: Mapping[str, Fraction]) -> Fraction:
    return t.value(env, Fraction(1))


def solve_primitive(pe, assignment: Mapping[str, Fraction]) -> IntervalSet:
    """Exact set of ``z`` satisfying every constraint of ``pe`` at ``assignment``."""
    env = {k: Fraction(v) for k, v in assignment.items()}
    missing = pe.params - env.keys()
    if missing:
        raise EvaluationError(f"assignment misses parameters: {', '.join(sorted(missing))}")
    acc = IntervalSet.full()
    for c in pe.constraints:
        t = _value(c.term, env)
        if c.kind == "eq":
            s = IntervalSet.point(t)
        elif c.kind == "ne":
            s = ~IntervalSet.point(t)
        elif c.kind == "in":
            s = IntervalSet.closed(t, t + c.width)
        else:
            s = ~IntervalSet.closed(t, t + c.width)
        acc = acc & s
    return acc


def _affine(t: Term, var: str, env: Mapping[str, Fraction]) -> tuple[Fraction, Fraction]:
    """``t`` as ``a*var + b`` with the other variables evaluated."""
    a = Fraction(t.coeff(var))
    b = _value(t.without(var), env)
    return a, b


def _band(a: Fraction, b: Fraction, width: int) -> IntervalSet:
    """``{x : 0 <= a*x + b <= width}``."""
    if a == 0:
        return IntervalSet.full() if 0 <= b <= width else IntervalSet.empty()
    lo, hi = -b / a, (width - b) / a
    return IntervalSet.closed(min(lo, hi), max(lo, hi))


def solve_qf(f: Formula, var: str, params: Mapping[str, Fraction] | None = None) -> IntervalSet:
    """Solution set in ``var`` of a quantifier-free formula.

    Every other free variable must be given a rational value in ``params``.
    """
    env = {k: Fraction(v) for k, v in (params or {}).items()}
    missing = free_vars(f) - {var} - env.keys()
    if missing:
        raise EvaluationError(f"unassigned parameters: {', '.join(sorted(missing))}")
    return _solve(f, var, env)


def _solve(f: Formula, var: str, env) -> IntervalSet:
    if isinstance(f, Equal):
        a, b = _affine(f.rhs - f.lhs, var, env)
        if a == 0:
            return IntervalSet.full() if b == 0 else IntervalSet.empty()
        return IntervalSet.point(-b / a)
    if isinstance(f, Within):
        return _band(*_affine(f.rhs - f.lhs, var, env), f.width)
    if isinstance(f, InUnit):
        return _band(*_affine(f.term, var, env), 1)
    if isinstance(f, Top):
        return IntervalSet.full()
    if isinstance(f, Bottom):
        return IntervalSet.empty()
    if isinstance(f, Not):
        return ~_solve(f.arg, var, env)
    if isinstance(f, And):
        acc = IntervalSet.full()
        for a in f.args:
            acc = acc & _solve(a, var, env)
        return acc
    if isinstance(f, Or):
        acc = IntervalSet.empty()
        for a in f.args:
            acc = acc | _solve(a, var, env)
        return acc
    if isinstance(f, Implies):
        return ~_solve(f.lhs, var, env) | _solve(f.rhs, var, env)
    if isinstance(f, Iff):
        a, b = _solve(f.lhs, var, env), _solve(f.rhs, var, env)
        return (a & b) | (~a & ~b)
    raise EvaluationError("solve_qf needs a quantifier-free formula")


# ------------------------------------------------- virtual substitution
#
# Linear forms are (coeffs, const) with coeffs a sorted tuple of
# (var, Fraction).  Atoms are (op, form) meaning ``form op 0`` with op in
# le/lt/eq/ne.  Formulas are True, False, ("and", parts), ("or", parts),
# atoms, and during translation ("ex"|"all", var, body).

_NEG_OP = {"le": "lt", "lt": "le", "eq": "ne", "ne": "eq"}


def _lin(t: Term, env: Mapping[str, Fraction]):
    coeffs = {}
    const = Fraction(t.const)
    for v, c in t.coeffs:
        if v in env:
            const += c * env[v]
        else:
            coeffs[v] = Fraction(c)
    return tuple(sorted(coeffs.items())), const


def _lin_sub(p, q):
    d = dict(p[0])
    for v, c in q[0]:
        d[v] = d.get(v, 0) - c
    return tuple(sorted((v, c) for v, c in d.items() if c)), p[1] - q[1]


def _lin_neg(p):
    return tuple((v, -c) for v, c in p[0]), -p[1]


def _lin_add_const(p, k):
    return p[0], p[1] + k


def _atom(op: str, form):
    coeffs, const = form
    if not coeffs:
        return {"le": const <= 0, "lt": const < 0, "eq": const == 0, "ne": const != 0}[op]
    lead = coeffs[0][1]
    k = abs(lead) if op in ("le", "lt") else lead
    if k != 1:
        form = tuple((v, c / k) for v, c in coeffs), const / k
    return (op, form)


def _and(parts) -> object:
    out, seen = [], set()
    for p in parts:
        if p is True:
            continue
        if p is False:
            return False
        for q in (p[1] if isinstance(p, tuple) and p[0] == "and" else (p,)):
            if q not in seen:
                seen.add(q)
                out.append(q)
    if not out:
        return True
    return out[0] if len(out) == 1 else ("and", tuple(out))


def _or(parts) -> object:
    out, seen = [], set()
    for p in parts:
        if p is False:
            continue
        if p is True:
            return True
        for q in (p[1] if isinstance(p, tuple) and p[0] == "or" else (p,)):
            if q not in seen:
                seen.add(q)
                out.append(q)
    if not out:
        return False
    return out[0] if len(out) == 1 else ("or", tuple(out))


def _negate(g):
    if g is True or g is False:
        return not g
    if g[0] == "and":
        return _or(_negate(p) for p in g[1])
    if g[0] == "or":
        return _and(_negate(p) for p in g[1])
    if g[0] in ("ex", "all"):
        return ("all" if g[0] == "ex" else "ex", g[1], _negate(g[2]))
    op, form = g
    if op in ("le", "lt"):
        return _atom(_NEG_OP[op], _lin_neg(form))
    return (_NEG_OP[op], form)


def _translate(f: Formula, pos: bool, scope):
    """Ordered-group NNF of ``f`` with rational values from ``scope`` plugged in."""
    if isinstance(f, (Within, InUnit)):
        if isinstance(f, InUnit):
            d, width = _lin(f.term, scope), 1
        else:
            d, width = _lin_sub(_lin(f.rhs, scope), _lin(f.lhs, scope)), f.width
        # 0 <= d <= width  as  -d <= 0 and d - width <= 0
        g = _and([_atom("le", _lin_neg(d)), _atom("le", _lin_add_const(d, -width))])
        return g if pos else _negate(g)
    if isinstance(f, Equal):
        d = _lin_sub(_lin(f.rhs, scope), _lin(f.lhs, scope))
        return _atom("eq" if pos else "ne", d)
    if isinstance(f, Top):
        return pos
    if isinstance(f, Bottom):
        return not pos
    if isinstance(f, Not):
        return _translate(f.arg, not pos, scope)
    if isinstance(f, (And, Or)):
        parts = [_translate(a, pos, scope) for a in f.args]
        return _and(parts) if isinstance(f, And) == pos else _or(parts)
    if isinstance(f, Implies):
        return _translate(Or((Not(f.lhs), f.rhs)), pos, scope)
    if isinstance(f, Iff):
        a1, b1 = _translate(f.lhs, True, scope), _translate(f.rhs, True, scope)
        a0, b0 = _negate(a1), _negate(b1)
        if pos:
            return _or([_and([a1, b1]), _and([a0, b0])])
        return _or([_and([a1, b0]), _and([a0, b1])])
    if isinstance(f, (Exists, Forall)):
        inner = scope if f.var not in scope else {k: v for k, v in scope.items() if k != f.var}
        body = _translate(f.body, pos, inner)
        existential = isinstance(f, Exists) == pos
        return ("ex" if existential else "all", f.var, body)
    raise TypeError(f"unknown formula node {f!r}")


def _collect_roots(g, var: str, out: dict):
    if g is True or g is False:
        return
    if g[0] in ("and", "or"):
        for p in g[1]:
            _collect_roots(p, var, out)
        return
    coeffs, const = g[1]
    a = dict(coeffs).get(var)
    if a:
        rest = tuple((v, -c / a) for v, c in coeffs if v != var), -const / a
        out[rest] = None


def _subst(g, var: str, point, mode: str):
    """Substitute ``var := point`` (mode "at"), ``point + eps`` ("eps"), or -inf ("minf")."""
    if g is True or g is False:
        return g
    if g[0] == "and":
        return _and(_subst(p, var, point, mode) for p in g[1])
    if g[0] == "or":
        return _or(_subst(p, var, point, mode) for p in g[1])
    op, (coeffs, const) = g
    d = dict(coeffs)
    a = d.pop(var, 0)
    if not a:
        return g
    if mode == "minf":
        if op == "eq":
            return False
        if op == "ne":
            return True
        return a > 0
    # value at point: a*point + rest
    for v, c in point[0]:
        d[v] = d.get(v, 0) + a * c
    form = tuple(sorted((v, c) for v, c in d.items() if c)), const + a * point[1]
    if mode == "at":
        return _atom(op, form)
    if op == "eq":
        return False
    if op == "ne":
        return True
    return _atom("lt" if a > 0 else "le", form)


def _exists(var: str, g):
    roots: dict = {}
    _collect_roots(g, var, roots)
    if not roots:
        return g
    parts = [_subst(g, var, None, "minf")]
    for r in roots:
        if parts[-1] is True:
            return True
        parts.append(_subst(g, var, r, "at"))
        parts.append(_subst(g, var, r, "eps"))
    return _or(parts)


def _eliminate(g):
    if g is True or g is False:
        return g
    tag = g[0]
    if tag == "and":
        return _and(_eliminate(p) for p in g[1])
    if tag == "or":
        return _or(_eliminate(p) for p in g[1])
    if tag == "ex":
        return _exists(g[1], _eliminate(g[2]))
    if tag == "all":
        return _negate(_exists(g[1], _negate(_eliminate(g[2]))))
    return g


def _lra_eval(g, env: Mapping[str, Fraction]) -> bool:
    if g is True or g is False:
        return g
    if g[0] == "and":
        return all(_lra_eval(p, env) for p in g[1])
    if g[0] == "or":
        return any(_lra_eval(p, env) for p in g[1])
    op, (coeffs, const) = g
    v = const + sum(c * env[x] for x, c in coeffs)
    return {"le": v <= 0, "lt": v < 0, "eq": v == 0, "ne": v != 0}[op]


def vs_decide(f: Formula, assignment: Mapping[str, Fraction]) -> bool:
    """Truth value of ``f`` at ``assignment`` in ``(R, +, [0, 1])``."""
    env = {k: Fraction(v) for k, v in assignment.items()}
    missing = free_vars(f) - env.keys()
    if missing:
        raise EvaluationError(f"assignment misses variables: {', '.join(sorted(missing))}")
    g = _eliminate(_translate(f, True, env))
    if not isinstance(g, bool):
        raise AssertionError("virtual substitution left a non-ground formula")
    return g


def vs_compile(f: Formula) -> Callable[[Mapping[str, Fraction]], bool]:
    """Eliminate quantifiers of ``f`` once; return an evaluator over its free variables."""
    g = _eliminate(_translate(f, True, {}))
    fv = free_vars(f)

    def evaluate(assignment: Mapping[str, Fraction]) -> bool:
        missing = fv - assignment.keys()
        if missing:
            raise EvaluationError(f"assignment misses variables: {', '.join(sorted(missing))}")
        return _lra_eval(g, {k: Fraction(v) for k, v in assignment.items()})

    return evaluate


# --------------------------------------------------------- equivalence


@dataclass
class EquivReport:
    cases: int
    agreements: int
    seed: int
    disagreements: list[dict] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.disagreements

    def to_json(self) -> dict:
        return {
            "cases": self.cases,
            "agreements": self.agreements,
            "disagreements": self.disagreements,
            "seed": self.seed,
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)


def _evaluator(f: Formula):
    if is_quantifier_free(f):
        return lambda env: eval_q(f, env)
    return vs_compile(f)


def equiv_test(f1: Formula, f2: Formula, cases: int = 1000, seed: int = 0) -> EquivReport:
    """Compare two formulas on ``cases`` sampled rational assignments.

    One free-variable set must contain the other (quantifier elimination
    may drop variables); samples cover the larger set.
    """
    from .fuzz import random_assignment

    fv1, fv2 = free_vars(f1), free_vars(f2)
    if not (fv1 <= fv2 or fv2 <= fv1):
        raise ValueError(f"free variables differ: {sorted(fv1)} vs {sorted(fv2)}")
    names = sorted(fv1 | fv2)
    ev1, ev2 = _evaluator(f1), _evaluator(f2)
    rng = random.Random(seed)
    report = EquivReport(cases=cases, agreements=0, seed=seed)
    for _ in range(cases):
        env = random_assignment(rng, names)
        lhs, rhs = ev1(env), ev2(env)
        if lhs == rhs:
            report.agreements += 1
        else:
            report.disagreements.append({
                "assignment": {k: str(v) for k, v in env.items()},
                "lhs": lhs,
                "rhs": rhs,
            })
    return report
