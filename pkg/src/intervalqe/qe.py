"""Quantifier elimination for the theory of ``(R, +, -, R[r])`` with constant 1.

Quantifiers are removed innermost first.  For ``E y. phi`` the matrix is
split into disjuncts (only the parts mentioning ``y`` are expanded), each
disjunct is rewritten as constraints on ``z = n*y``::

    z = t    z != t    z in [lo, lo + w]    z notin [lo, lo + w]

and the existential is replaced by a finite test over candidate points
(see :func:`eliminate_cases`).  ``A y. phi`` is handled as ``~E y. ~phi``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache, reduce

from .formula import (
    And, Bottom, BOTTOM, Equal, Exists, Forall, Formula, InUnit, Literal, Not,
    Or, Term, Top, TOP, Within, conj, disj, free_vars, is_quantifier_free, nnf,
    to_text,
)
from .rewrite import to_lprime
from .semantics import eval_q

__all__ = [
    "Constraint", "PrimitiveExistential", "GuardCase", "InvariantError",
    "simplify_atom", "to_primitive", "eliminate_cases", "eliminate_exists",
    "eliminate_var", "eliminate_var_direct", "qe", "decide",
]


class InvariantError(RuntimeError):
    """An internal postcondition failed."""


_ZERO = Term()


@dataclass(frozen=True, slots=True)
class Constraint:
    """One condition on the scaled variable ``z``.

    ``kind`` is ``"eq"``/``"ne"`` (``z`` equal/unequal to ``term``) or
    ``"in"``/``"out"`` (``z`` inside/outside ``[term, term + width]``).
    """

    kind: str
    term: Term
    width: int = 0

    def __post_init__(self):
        if self.kind not in ("eq", "ne", "in", "out"):
            raise ValueError(f"unknown constraint kind {self.kind!r}")
        if self.kind in ("in", "out") and self.width <= 0:
            raise ValueError("interval constraints need a positive width")

    @property
    def hi(self) -> Term:
        return self.term + self.width

    def __str__(self) -> str:
        if self.kind == "eq":
            return f"z = {self.term}"
        if self.kind == "ne":
            return f"z != {self.term}"
        op = "in" if self.kind == "in" else "notin"
        return f"z {op} [{self.term}, {self.hi}]"


@dataclass(frozen=True, slots=True)
class PrimitiveExistential:
    """``E var. /\\ constraints`` with every constraint stated on ``z = scale*var``."""

    var: str
    scale: int
    constraints: tuple[Constraint, ...]

    def __post_init__(self):
        if self.scale == 0:
            raise ValueError("scale must be nonzero")
        if not self.constraints:
            raise ValueError("a primitive existential needs at least one constraint")
        for c in self.constraints:
            if self.var in c.term.vars:
                raise ValueError(f"{self.var} occurs in constraint term {c.term}")

    @property
    def params(self) -> frozenset[str]:
        return frozenset().union(*(c.term.vars for c in self.constraints))

    def __str__(self) -> str:
        body = " & ".join(str(c) for c in self.constraints)
        return f"E {self.var}. [z = {self.scale}*{self.var}] {body}"


@dataclass(frozen=True, slots=True)
class GuardCase:
    guard: Formula
    satisfiable: bool


# ---------------------------------------------------------------- atoms


def _split_signs(u: Term) -> tuple[Term, Term]:
    """``u = pos - neg`` with both parts having positive coefficients."""
    pos = Term(tuple((v, c) for v, c in u.coeffs if c > 0), max(u.const, 0))
    negp = Term(tuple((v, -c) for v, c in u.coeffs if c < 0), max(-u.const, 0))
    return pos, negp


@lru_cache(maxsize=1 << 16)
def simplify_atom(a) -> Formula:
    """Canonical form of an atom, folding it to TOP/BOTTOM when ground.

    ``I`` atoms become ``R[1]`` atoms.  Equalities are written with the first
    variable's coefficient positive; ``R[r](0, u)`` picks between ``u`` and
    ``r - u`` the one whose first coefficient is positive, and divides out a
    common factor of coefficients, constant and width.
    """
    if isinstance(a, InUnit):
        a = Within(1, _ZERO, a.term)
    u = a.rhs - a.lhs
    if isinstance(a, Equal):
        if u.is_constant():
            return TOP if u.const == 0 else BOTTOM
        if u.coeffs[0][1] < 0:
            u = -u
        g = reduce(math.gcd, (c for _, c in u.coeffs), u.const)
        if g > 1:
            u = Term(tuple((v, c // g) for v, c in u.coeffs), u.const // g)
        lhs = Term(tuple((v, c) for v, c in u.coeffs if c > 0))
        rhs = Term(tuple((v, -c) for v, c in u.coeffs if c < 0), -u.const)
        return Equal(lhs, rhs)
    r = a.width
    if u.is_constant():
        return TOP if 0 <= u.const <= r else BOTTOM
    if u.coeffs[0][1] < 0:
        u = r - u
    g = reduce(math.gcd, (c for _, c in u.coeffs), math.gcd(u.const, r))
    if g > 1:
        u = Term(tuple((v, c // g) for v, c in u.coeffs), u.const // g)
        r //= g
    pos, negp = _split_signs(u)
    return Within(r, negp, pos)


def _lit(atom, positive: bool = True) -> Formula:
    s = simplify_atom(atom)
    if positive:
        return s
    if isinstance(s, Top):
        return BOTTOM
    if isinstance(s, Bottom):
        return TOP
    return Not(s)


# -------------------------------------------------------- primitive form


def to_primitive(var: str, literals) -> tuple[PrimitiveExistential | None, list[Literal]]:
    """Rewrite a conjunction of literals as constraints on ``z = n*var``.

    Returns the primitive existential (``None`` when no literal mentions
    ``var``) and the literals not mentioning ``var``, which stay outside the
    quantifier.
    """
    inside: list[tuple[Literal, Term, int]] = []
    outside: list[Literal] = []
    for lit in literals:
        a = lit.atom
        if isinstance(a, InUnit):
            u, width = a.term, 1
        else:
            u, width = a.rhs - a.lhs, getattr(a, "width", 0)
        if u.coeff(var):
            inside.append((lit, u, width))
        else:
            outside.append(lit)
    if not inside:
        return None, outside
    n = reduce(math.lcm, (abs(u.coeff(var)) for _, u, _ in inside))
    cons = []
    for lit, u, width in inside:
        c = u.coeff(var)
        m = n // abs(c)
        w = u.without(var)
        if isinstance(lit.atom, Equal):
            # c*y + w = 0  <=>  z = -sign(c)*m*w
            cons.append(Constraint("eq" if lit.positive else "ne", w * (-m if c > 0 else m)))
        elif c > 0:
            # 0 <= c*y + w <= r  <=>  z in [-m*w, -m*w + m*r]
            cons.append(Constraint("in" if lit.positive else "out", w * -m, m * width))
        else:
            # 0 <= w - |c|*y <= r  <=>  z in [m*(w - r), m*w]
            cons.append(Constraint("in" if lit.positive else "out", (w - width) * m, m * width))
    return PrimitiveExistential(var, n, tuple(dict.fromkeys(cons))), outside


# ------------------------------------------------------------ elimination


def _at(c: Constraint, e: Term) -> Formula:
    """The constraint with ``z := e``."""
    if c.kind == "eq":
        return _lit(Equal(e, c.term))
    if c.kind == "ne":
        return _lit(Equal(e, c.term), False)
    return _lit(Within(c.width, c.term, e), c.kind == "in")


def _right_of(c: Constraint, e: Term) -> Formula:
    """The constraint holds at every point of ``(e, e + d)`` for small ``d > 0``."""
    if c.kind == "eq":
        return BOTTOM
    if c.kind == "ne":
        return TOP
    # e + d in [lo, lo + w]  <=>  lo <= e < lo + w
    inside = conj([_lit(Within(c.width, c.term, e)), _lit(Equal(e, c.hi), False)])
    if c.kind == "in":
        return inside
    return disj([_lit(Within(c.width, c.term, e), False), _lit(Equal(e, c.hi))])


def eliminate_cases(pe: PrimitiveExistential) -> list[GuardCase]:
    """Exhaustive guard list for ``pe``: satisfiable cases, then the rest.

    With an equation ``z = t`` the only candidate is ``t``.  Without any
    equation or interval the solution set is cofinite, hence nonempty.
    Otherwise the solution set is bounded; if nonempty its infimum is the
    left end of an ``in`` interval (attained or not), the right end of an
    ``out`` interval, or a punctured point, and either the infimum itself or
    every point just right of it is a solution.
    """
    cons = pe.constraints
    eqs = [c for c in cons if c.kind == "eq"]
    if eqs:
        t = eqs[0].term
        guards = [conj(_at(c, t) for c in cons)]
    elif not any(c.kind == "in" for c in cons):
        guards = [TOP]
    else:
        points = [c.term for c in cons if c.kind == "in"]
        lefts = points + [c.hi for c in cons if c.kind == "out"] + [c.term for c in cons if c.kind == "ne"]
        guards = [conj(_at(c, e) for c in cons) for e in dict.fromkeys(points)]
        guards += [conj(_right_of(c, e) for c in cons) for e in dict.fromkeys(lefts)]
    sat = disj(guards)
    cases = [GuardCase(g, True) for g in guards if not isinstance(g, Bottom)]
    rest = nnf(Not(sat))
    if not isinstance(rest, Bottom):
        cases.append(GuardCase(rest, False))
    return cases


def eliminate_exists(pe: PrimitiveExistential) -> Formula:
    """Quantifier-free equivalent of a primitive existential."""
    return disj(c.guard for c in eliminate_cases(pe) if c.satisfiable)


def _is_literal(f: Formula) -> bool:
    return isinstance(f, (Equal, Within, InUnit)) or (
        isinstance(f, Not) and isinstance(f.arg, (Equal, Within, InUnit)))


def _branches(f: Formula, var: str) -> list[tuple[tuple[Formula, ...], frozenset[Literal]]]:
    """Disjunctive split of an NNF qf formula, expanding only ``var``-parts.

    Each branch is ``(side, lits)``: side formulas free of ``var`` and
    literals mentioning ``var``.
    """
    if var not in free_vars(f):
        return [((f,), frozenset())]
    if _is_literal(f):
        return [((), frozenset((Literal.from_formula(f),)))]
    if isinstance(f, Or):
        out = []
        for a in f.args:
            out.extend(_branches(a, var))
        return out
    if isinstance(f, And):
        acc = [((), frozenset())]
        for a in f.args:
            sub = _branches(a, var)
            nxt = []
            for side1, lits1 in acc:
                for side2, lits2 in sub:
                    lits = lits1 | lits2
                    if any(l.negate() in lits for l in lits2):
                        continue
                    nxt.append((side1 + side2, lits))
            acc = nxt
        return acc
    raise TypeError(f"expected an NNF quantifier-free formula, got {to_text(f)}")


BRANCH_LIMIT = 24


def _count_branches(f: Formula, var: str, limit: int) -> int:
    """Number of disjuncts :func:`_branches` would produce, capped past ``limit``."""
    if var not in free_vars(f) or _is_literal(f):
        return 1
    if isinstance(f, Or):
        return min(sum(_count_branches(a, var, limit) for a in f.args), limit + 1)
    if isinstance(f, And):
        n = 1
        for a in f.args:
            n = min(n * _count_branches(a, var, limit), limit + 1)
        return n
    raise TypeError(f"expected an NNF quantifier-free formula, got {to_text(f)}")


def _atom_constraint(a, var: str, n: int) -> Constraint:
    """Positive constraint on ``z = n*var`` equivalent to atom ``a``."""
    pe, _ = to_primitive(var, [Literal(True, a)])
    c = pe.constraints[0]
    k = n // pe.scale
    return Constraint(c.kind, c.term * k, c.width * k)


def _scale_of(f: Formula, var: str) -> int:
    coefs = []
    for a in _literal_atoms(f):
        u = a.term if isinstance(a, InUnit) else a.rhs - a.lhs
        if u.coeff(var):
            coefs.append(abs(u.coeff(var)))
    return reduce(math.lcm, coefs, 1)


def _literal_atoms(f: Formula):
    if isinstance(f, (Equal, Within, InUnit)):
        yield f
    elif isinstance(f, Not):
        yield from _literal_atoms(f.arg)
    elif isinstance(f, (And, Or)):
        for a in f.args:
            yield from _literal_atoms(a)


def _virtual(f: Formula, table: dict) -> Formula:
    """Replace atoms by the formulas recorded in ``table`` (others stay)."""
    if isinstance(f, (Equal, Within, InUnit)):
        return table.get(f, f)
    if isinstance(f, Not):
        inner = table.get(f.arg)
        return f if inner is None else nnf(Not(inner))
    if isinstance(f, And):
        return conj(_virtual(a, table) for a in f.args)
    if isinstance(f, Or):
        return disj(_virtual(a, table) for a in f.args)
    return f


def eliminate_var_direct(var: str, f: Formula, universal: bool = False) -> Formula:
    """Eliminate ``E var`` (or ``A var``) from an NNF qf formula without DNF.

    The truth set of ``f`` in ``z = n*var`` is a finite union of intervals
    whose endpoints are endpoints of the atoms' sets.  Hence ``E z. f`` holds
    iff ``f`` holds at -inf, at some endpoint, or just right of some endpoint;
    ``A z. f`` iff it holds at all of these test points.
    """
    n = _scale_of(f, var)
    cons = {}
    for a in _literal_atoms(f):
        if a not in cons and var in free_vars(a):
            cons[a] = _atom_constraint(a, var, n)
    if not cons:
        return f
    points: dict[Term, None] = {}
    for c in cons.values():
        points[c.term] = None
        if c.kind == "in":
            points[c.hi] = None
    instances = [_virtual(f, {a: BOTTOM for a in cons})]  # z -> -inf
    for e in points:
        instances.append(_virtual(f, {a: _at(c, e) for a, c in cons.items()}))
        instances.append(_virtual(f, {a: _right_of(c, e) for a, c in cons.items()}))
    return conj(instances) if universal else disj(instances)


def eliminate_var(var: str, f: Formula, branch_limit: int | None = None) -> Formula:
    """Quantifier-free equivalent of ``E var. f`` for quantifier-free ``f``.

    Splits ``f`` into primitive existentials when that yields at most
    ``branch_limit`` disjuncts, and otherwise tests candidate points on the
    whole matrix (:func:`eliminate_var_direct`).
    """
    if not is_quantifier_free(f):
        raise ValueError("eliminate_var expects a quantifier-free formula")
    return _eliminate_var(var, _elim(nnf(to_lprime(f))), branch_limit)


def _eliminate_var(var: str, f: Formula, branch_limit: int | None = None) -> Formula:
    limit = BRANCH_LIMIT if branch_limit is None else branch_limit
    if _count_branches(f, var, limit) > limit:
        return eliminate_var_direct(var, f)
    groups: dict[frozenset[Literal], list[Formula]] = {}
    for side, lits in _branches(f, var):
        groups.setdefault(lits, []).append(conj(side))
    out = []
    for lits, sides in groups.items():
        side = disj(sides)
        if isinstance(side, Bottom):
            continue
        if not lits:
            out.append(side)
            continue
        pe, _ = to_primitive(var, sorted(lits, key=repr))
        out.append(conj([side, eliminate_exists(pe)]))
    return disj(out)


def _eliminate_forall(var: str, f: Formula, branch_limit: int | None = None) -> Formula:
    limit = BRANCH_LIMIT if branch_limit is None else branch_limit
    negated = _negate(f)
    if _count_branches(negated, var, limit) > limit:
        return eliminate_var_direct(var, f, universal=True)
    return _negate(_eliminate_var(var, negated, limit))


def _negate(f: Formula) -> Formula:
    return nnf(Not(f))


def _elim(f: Formula) -> Formula:
    if isinstance(f, (Equal, Within, InUnit)):
        return _lit(f)
    if isinstance(f, Not):
        return _lit(f.arg, False)
    if isinstance(f, (Top, Bottom)):
        return f
    if isinstance(f, And):
        return conj(_elim(a) for a in f.args)
    if isinstance(f, Or):
        return disj(_elim(a) for a in f.args)
    if isinstance(f, Exists):
        return _eliminate_var(f.var, _elim(f.body))
    if isinstance(f, Forall):
        return _eliminate_forall(f.var, _elim(f.body))
    raise TypeError(f"unexpected node in NNF: {f!r}")


def qe(f: Formula) -> Formula:
    """Equivalent quantifier-free formula in the ``R[r]`` signature."""
    out = _elim(nnf(to_lprime(f)))
    if not is_quantifier_free(out):
        raise InvariantError("quantifier elimination left a quantifier")
    if not free_vars(out) <= free_vars(f):
        raise InvariantError("quantifier elimination introduced a free variable")
    return out


def decide(sentence: Formula) -> bool:
    """Truth value of a sentence in ``(R, +, [0, 1])``."""
    fv = free_vars(sentence)
    if fv:
        raise ValueError(f"not a sentence; free variables: {', '.join(sorted(fv))}")
    return eval_q(qe(sentence), {})
