"""Terms and first-order formulas over the additive group of the reals.

Two signatures share one AST:

* ``L``  -- ``+, -, 0, 1`` and the unary predicate ``I`` (membership in [0, 1]);
* ``Lp`` -- ``+, -, 0, 1`` and the binary predicates ``R[r]`` with
  ``R[r](s, t)`` iff ``0 <= t - s <= r``.

Text grammar::

    term := intlit | var | term "+" term | term "-" term | "-" term
          | intlit "*" term | "(" term ")"
    atom := term "=" term | "R[" intlit "]" "(" term "," term ")" | "I(" term ")"
    fml  := atom | "~" fml | fml "&" fml | fml "|" fml | fml "->" fml
          | fml "<->" fml | ("E"|"A") var "." fml | "(" fml ")"

Precedence ``~ > & > | > -> > <->``; a quantifier's scope extends as far
right as possible.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from typing import Callable, Iterable, Iterator, Mapping, Union

__all__ = [
    "Term", "Top", "Bottom", "TOP", "BOTTOM", "Equal", "Within", "InUnit",
    "Not", "And", "Or", "Implies", "Iff", "Exists", "Forall", "Literal",
    "Formula", "ParseError", "LanguageError", "parse", "parse_term",
    "to_text", "free_vars", "all_vars", "language", "is_atom",
    "is_quantifier_free", "nnf", "prenex", "substitute", "alpha_equal",
    "conj", "disj", "neg", "fresh_name", "atoms",
]

L = "L"
LP = "Lp"
_LANG_ALIASES = {"L": L, "Lp": LP, "L'": LP, "L′": LP, "LP": LP, "lp": LP}


class ParseError(ValueError):
    def __init__(self, message: str, pos: int = -1):
        self.pos = pos
        super().__init__(f"{message} at position {pos}" if pos >= 0 else message)


class LanguageError(ParseError):
    """An atom not belonging to the requested signature."""


# --------------------------------------------------------------------- terms


@dataclass(frozen=True, slots=True)
class Term:
    """Integer-linear combination of variables plus an integer constant.

    ``coeffs`` is kept sorted by variable name with zero coefficients dropped,
    so dataclass equality is equality of terms.
    """

    coeffs: tuple[tuple[str, int], ...] = ()
    const: int = 0

    @staticmethod
    def of(coeffs: Mapping[str, int] | Iterable[tuple[str, int]] = (), const: int = 0) -> Term:
        items = coeffs.items() if isinstance(coeffs, Mapping) else coeffs
        acc: dict[str, int] = {}
        for v, c in items:
            acc[v] = acc.get(v, 0) + int(c)
        return Term(tuple(sorted((v, c) for v, c in acc.items() if c)), int(const))

    @staticmethod
    def var(name: str) -> Term:
        return Term(((name, 1),), 0)

    @staticmethod
    def constant(value: int) -> Term:
        return Term((), int(value))

    @property
    def vars(self) -> frozenset[str]:
        return frozenset(v for v, _ in self.coeffs)

    def coeff(self, name: str) -> int:
        for v, c in self.coeffs:
            if v == name:
                return c
        return 0

    def is_constant(self) -> bool:
        return not self.coeffs

    def without(self, name: str) -> Term:
        """The term with the ``name`` summand removed."""
        return Term(tuple((v, c) for v, c in self.coeffs if v != name), self.const)

    def __add__(self, other: Term | int) -> Term:
        if isinstance(other, int):
            return Term(self.coeffs, self.const + other)
        return Term.of(itertools.chain(self.coeffs, other.coeffs), self.const + other.const)

    __radd__ = __add__

    def __neg__(self) -> Term:
        return Term(tuple((v, -c) for v, c in self.coeffs), -self.const)

    def __sub__(self, other: Term | int) -> Term:
        return self + (-other)

    def __rsub__(self, other: int) -> Term:
        return (-self) + other

    def __mul__(self, k: int) -> Term:
        if not isinstance(k, int):
            return NotImplemented
        if k == 0:
            return Term()
        return Term(tuple((v, c * k) for v, c in self.coeffs), self.const * k)

    __rmul__ = __mul__

    def substitute(self, name: str, term: Term) -> Term:
        c = self.coeff(name)
        if not c:
            return self
        return self.without(name) + term * c

    def rename(self, mapping: Mapping[str, str]) -> Term:
        return Term.of(((mapping.get(v, v), c) for v, c in self.coeffs), self.const)

    def value(self, env: Mapping[str, object], one: object):
        """Evaluate in any ordered group; ``one`` is the group's unit element."""
        acc = self.const * one
        for v, c in self.coeffs:
            acc = acc + c * env[v]
        return acc

    def __str__(self) -> str:
        return _term_text(self)


def _term_text(t: Term) -> str:
    parts: list[str] = []
    for v, c in t.coeffs:
        mag = abs(c)
        body = v if mag == 1 else f"{mag}*{v}"
        if not parts:
            parts.append(body if c > 0 else "-" + body)
        else:
            parts.append((" + " if c > 0 else " - ") + body)
    if not parts:
        return str(t.const)
    if t.const:
        parts.append((" + " if t.const > 0 else " - ") + str(abs(t.const)))
    return "".join(parts)


# ------------------------------------------------------------------- formulas


@dataclass(frozen=True, slots=True)
class Top:
    pass


@dataclass(frozen=True, slots=True)
class Bottom:
    pass


TOP = Top()
BOTTOM = Bottom()


@dataclass(frozen=True, slots=True)
class Equal:
    lhs: Term
    rhs: Term


@dataclass(frozen=True, slots=True)
class Within:
    """``0 <= rhs - lhs <= width``, written ``R[width](lhs, rhs)``."""

    width: int
    lhs: Term
    rhs: Term

    def __post_init__(self):
        if self.width <= 0:
            raise ValueError(f"R-index must be a positive integer, got {self.width}")


@dataclass(frozen=True, slots=True)
class InUnit:
    """``0 <= term <= 1``, written ``I(term)``."""

    term: Term


@dataclass(frozen=True, slots=True)
class Not:
    arg: "Formula"


@dataclass(frozen=True, slots=True)
class And:
    args: tuple["Formula", ...]


@dataclass(frozen=True, slots=True)
class Or:
    args: tuple["Formula", ...]


@dataclass(frozen=True, slots=True)
class Implies:
    lhs: "Formula"
    rhs: "Formula"


@dataclass(frozen=True, slots=True)
class Iff:
    lhs: "Formula"
    rhs: "Formula"


@dataclass(frozen=True, slots=True)
class Exists:
    var: str
    body: "Formula"


@dataclass(frozen=True, slots=True)
class Forall:
    var: str
    body: "Formula"


Atom = Union[Equal, Within, InUnit]
Formula = Union[Top, Bottom, Equal, Within, InUnit, Not, And, Or, Implies, Iff, Exists, Forall]
_ATOMS = (Equal, Within, InUnit)
_QUANTS = (Exists, Forall)


@dataclass(frozen=True, slots=True)
class Literal:
    """An atom or its negation."""

    positive: bool
    atom: Atom

    def to_formula(self) -> Formula:
        return self.atom if self.positive else Not(self.atom)

    def negate(self) -> Literal:
        return Literal(not self.positive, self.atom)

    @staticmethod
    def from_formula(f: Formula) -> Literal:
        if isinstance(f, _ATOMS):
            return Literal(True, f)
        if isinstance(f, Not) and isinstance(f.arg, _ATOMS):
            return Literal(False, f.arg)
        raise TypeError(f"not a literal: {to_text(f)}")


def is_atom(f: Formula) -> bool:
    return isinstance(f, _ATOMS)


def atom_terms(a: Atom) -> tuple[Term, ...]:
    if isinstance(a, InUnit):
        return (a.term,)
    return (a.lhs, a.rhs)


def map_atom_terms(a: Atom, fn: Callable[[Term], Term]) -> Atom:
    if isinstance(a, InUnit):
        return InUnit(fn(a.term))
    if isinstance(a, Equal):
        return Equal(fn(a.lhs), fn(a.rhs))
    return Within(a.width, fn(a.lhs), fn(a.rhs))


def conj(parts: Iterable[Formula]) -> Formula:
    """Flattening conjunction with unit/zero absorption and deduplication."""
    out: list[Formula] = []
    seen: set = set()
    for p in parts:
        if isinstance(p, Top):
            continue
        if isinstance(p, Bottom):
            return BOTTOM
        for q in p.args if isinstance(p, And) else (p,):
            if q not in seen:
                seen.add(q)
                out.append(q)
    if not out:
        return TOP
    return out[0] if len(out) == 1 else And(tuple(out))


def disj(parts: Iterable[Formula]) -> Formula:
    """Flattening disjunction, dual of :func:`conj`."""
    out: list[Formula] = []
    seen: set = set()
    for p in parts:
        if isinstance(p, Bottom):
            continue
        if isinstance(p, Top):
            return TOP
        for q in p.args if isinstance(p, Or) else (p,):
            if q not in seen:
                seen.add(q)
                out.append(q)
    if not out:
        return BOTTOM
    return out[0] if len(out) == 1 else Or(tuple(out))


def neg(f: Formula) -> Formula:
    """Negation in negation normal form (input assumed in NNF)."""
    return nnf(Not(f))


# ----------------------------------------------------------- variable queries


def free_vars(f: Formula) -> frozenset[str]:
    if isinstance(f, _ATOMS):
        return frozenset().union(*(t.vars for t in atom_terms(f)))
    if isinstance(f, (Top, Bottom)):
        return frozenset()
    if isinstance(f, Not):
        return free_vars(f.arg)
    if isinstance(f, (And, Or)):
        return frozenset().union(*(free_vars(a) for a in f.args))
    if isinstance(f, (Implies, Iff)):
        return free_vars(f.lhs) | free_vars(f.rhs)
    return free_vars(f.body) - {f.var}


def all_vars(f: Formula) -> frozenset[str]:
    """Free and bound variable names."""
    if isinstance(f, _QUANTS):
        return all_vars(f.body) | {f.var}
    if isinstance(f, Not):
        return all_vars(f.arg)
    if isinstance(f, (And, Or)):
        return frozenset().union(*(all_vars(a) for a in f.args))
    if isinstance(f, (Implies, Iff)):
        return all_vars(f.lhs) | all_vars(f.rhs)
    return free_vars(f)


def atoms(f: Formula) -> Iterator[Atom]:
    if isinstance(f, _ATOMS):
        yield f
    elif isinstance(f, Not):
        yield from atoms(f.arg)
    elif isinstance(f, (And, Or)):
        for a in f.args:
            yield from atoms(a)
    elif isinstance(f, (Implies, Iff)):
        yield from atoms(f.lhs)
        yield from atoms(f.rhs)
    elif isinstance(f, _QUANTS):
        yield from atoms(f.body)


def language(f: Formula) -> str | None:
    """``"L"``, ``"Lp"``, ``None`` when no signature-specific atom occurs.

    Raises LanguageError when both ``I`` and ``R`` atoms are present.
    """
    has_i = has_r = False
    for a in atoms(f):
        has_i |= isinstance(a, InUnit)
        has_r |= isinstance(a, Within)
    if has_i and has_r:
        raise LanguageError("formula mixes I-atoms and R-atoms")
    return L if has_i else LP if has_r else None


def is_quantifier_free(f: Formula) -> bool:
    if isinstance(f, _QUANTS):
        return False
    if isinstance(f, Not):
        return is_quantifier_free(f.arg)
    if isinstance(f, (And, Or)):
        return all(is_quantifier_free(a) for a in f.args)
    if isinstance(f, (Implies, Iff)):
        return is_quantifier_free(f.lhs) and is_quantifier_free(f.rhs)
    return True


def fresh_name(base: str, taken: Iterable[str]) -> str:
    taken = set(taken)
    stem = base.rstrip("0123456789") or "v"
    for i in itertools.count(1):
        cand = f"{stem}{i}"
        if cand not in taken:
            return cand
    raise AssertionError  # pragma: no cover


# --------------------------------------------------------------- substitution


def _map_terms(f: Formula, fn: Callable[[Term], Term]) -> Formula:
    """Apply ``fn`` to every term of a quantifier-free formula."""
    if isinstance(f, _ATOMS):
        return map_atom_terms(f, fn)
    if isinstance(f, (Top, Bottom)):
        return f
    if isinstance(f, Not):
        return Not(_map_terms(f.arg, fn))
    if isinstance(f, (And, Or)):
        return type(f)(tuple(_map_terms(a, fn) for a in f.args))
    if isinstance(f, (Implies, Iff)):
        return type(f)(_map_terms(f.lhs, fn), _map_terms(f.rhs, fn))
    raise TypeError("quantified formula")


def substitute(f: Formula, var: str, term: Term) -> Formula:
    """Capture-avoiding substitution of ``term`` for free ``var``."""
    if term == Term.var(var):
        return f
    return _subst(f, var, term, term.vars)


def _subst(f: Formula, var: str, term: Term, tvars: frozenset[str]) -> Formula:
    if isinstance(f, _ATOMS):
        return map_atom_terms(f, lambda t: t.substitute(var, term))
    if isinstance(f, (Top, Bottom)):
        return f
    if isinstance(f, Not):
        return Not(_subst(f.arg, var, term, tvars))
    if isinstance(f, (And, Or)):
        return type(f)(tuple(_subst(a, var, term, tvars) for a in f.args))
    if isinstance(f, (Implies, Iff)):
        return type(f)(_subst(f.lhs, var, term, tvars), _subst(f.rhs, var, term, tvars))
    if f.var == var or var not in free_vars(f.body):
        return f
    body, bound = f.body, f.var
    if bound in tvars:
        new = fresh_name(bound, all_vars(f.body) | tvars | {var})
        body = _subst(body, bound, Term.var(new), frozenset({new}))
        bound = new
    return type(f)(bound, _subst(body, var, term, tvars))


def alpha_equal(f: Formula, g: Formula) -> bool:
    """Structural equality up to renaming of bound variables."""
    return _alpha(f, g, {}, {}, 0)


def _alpha(f, g, fm: dict, gm: dict, depth: int) -> bool:
    if type(f) is not type(g):
        return False
    if isinstance(f, _ATOMS):
        rf = map_atom_terms(f, lambda t: t.rename(fm))
        rg = map_atom_terms(g, lambda t: t.rename(gm))
        return rf == rg
    if isinstance(f, (Top, Bottom)):
        return True
    if isinstance(f, Not):
        return _alpha(f.arg, g.arg, fm, gm, depth)
    if isinstance(f, (And, Or)):
        return len(f.args) == len(g.args) and all(
            _alpha(a, b, fm, gm, depth) for a, b in zip(f.args, g.args))
    if isinstance(f, (Implies, Iff)):
        return _alpha(f.lhs, g.lhs, fm, gm, depth) and _alpha(f.rhs, g.rhs, fm, gm, depth)
    # binders map to a depth index outside the variable grammar
    key = f"#{depth}"
    return _alpha(f.body, g.body, {**fm, f.var: key}, {**gm, g.var: key}, depth + 1)


# ------------------------------------------------------------- normal forms


def nnf(f: Formula) -> Formula:
    """Negation normal form: ``Not`` only on atoms, no ``->``/``<->``."""
    return _nnf(f, True)


def _nnf(f: Formula, pos: bool) -> Formula:
    if isinstance(f, _ATOMS):
        return f if pos else Not(f)
    if isinstance(f, Top):
        return TOP if pos else BOTTOM
    if isinstance(f, Bottom):
        return BOTTOM if pos else TOP
    if isinstance(f, Not):
        return _nnf(f.arg, not pos)
    if isinstance(f, And):
        args = tuple(_nnf(a, pos) for a in f.args)
        return And(args) if pos else Or(args)
    if isinstance(f, Or):
        args = tuple(_nnf(a, pos) for a in f.args)
        return Or(args) if pos else And(args)
    if isinstance(f, Implies):
        return _nnf(Or((Not(f.lhs), f.rhs)), pos)
    if isinstance(f, Iff):
        a, b = f.lhs, f.rhs
        if pos:
            return Or((And((_nnf(a, True), _nnf(b, True))), And((_nnf(a, False), _nnf(b, False)))))
        return Or((And((_nnf(a, True), _nnf(b, False))), And((_nnf(a, False), _nnf(b, True)))))
    if isinstance(f, Exists):
        return Exists(f.var, _nnf(f.body, pos)) if pos else Forall(f.var, _nnf(f.body, False))
    if isinstance(f, Forall):
        return Forall(f.var, _nnf(f.body, pos)) if pos else Exists(f.var, _nnf(f.body, False))
    raise TypeError(f"unknown formula node {f!r}")


def prenex(f: Formula) -> Formula:
    """Prenex form of an NNF formula, with every bound variable renamed fresh."""
    taken = set(all_vars(f))
    prefix, matrix = _prenex(nnf(f), taken)
    for q, v in reversed(prefix):
        matrix = q(v, matrix)
    return matrix


def _prenex(f: Formula, taken: set[str]) -> tuple[list, Formula]:
    if isinstance(f, _QUANTS):
        new = fresh_name(f.var, taken)
        taken.add(new)
        body = substitute(f.body, f.var, Term.var(new))
        prefix, matrix = _prenex(body, taken)
        return [(type(f), new)] + prefix, matrix
    if isinstance(f, (And, Or)):
        prefix: list = []
        parts = []
        for a in f.args:
            p, m = _prenex(a, taken)
            prefix += p
            parts.append(m)
        return prefix, type(f)(tuple(parts))
    return [], f


# ------------------------------------------------------------------- printing


def to_text(f: Formula) -> str:
    """Render in the text grammar; ``parse(to_text(f))`` gives back ``f``."""
    if isinstance(f, Equal):
        return f"{f.lhs} = {f.rhs}"
    if isinstance(f, Within):
        return f"R[{f.width}]({f.lhs}, {f.rhs})"
    if isinstance(f, InUnit):
        return f"I({f.term})"
    if isinstance(f, Top):
        return "0 = 0"
    if isinstance(f, Bottom):
        return "~0 = 0"
    if isinstance(f, Not):
        return "~" + _child(f.arg)
    if isinstance(f, And):
        return " & ".join(_child(a) for a in f.args)
    if isinstance(f, Or):
        return " | ".join(_child(a) for a in f.args)
    if isinstance(f, Implies):
        return f"{_child(f.lhs)} -> {_child(f.rhs)}"
    if isinstance(f, Iff):
        return f"{_child(f.lhs)} <-> {_child(f.rhs)}"
    q = "E" if isinstance(f, Exists) else "A"
    return f"{q} {f.var}. ({to_text(f.body)})"


def _child(f: Formula) -> str:
    if isinstance(f, _ATOMS + (Top,)) or (isinstance(f, Not) and isinstance(f.arg, _ATOMS)):
        return to_text(f)
    if isinstance(f, Not):
        return "~(" + to_text(f.arg) + ")"
    return "(" + to_text(f) + ")"


# -------------------------------------------------------------------- parsing

_TOKEN = re.compile(r"\s*(?:(<->|->|R\[|I\(|[~&|=+\-*(),.\]])|(\d+)|([a-z][a-z0-9]*)|([EA])(?![A-Za-z0-9]))")


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    toks = []
    pos = 0
    n = len(text)
    while pos < n:
        if text[pos].isspace():
            pos += 1
            continue
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected character {text[pos]!r}", pos)
        start = m.start(m.lastindex)
        if m.group(1):
            toks.append(("op", m.group(1), start))
        elif m.group(2):
            toks.append(("int", m.group(2), start))
        elif m.group(3):
            toks.append(("var", m.group(3), start))
        else:
            toks.append(("quant", m.group(4), start))
        pos = m.end()
    toks.append(("eof", "", n))
    return toks


class _Parser:
    def __init__(self, text: str, lang: str | None):
        self.toks = _tokenize(text)
        self.i = 0
        self.lang = lang

    def peek(self, k: int = 0):
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def at(self, value: str) -> bool:
        kind, val, _ = self.peek()
        return kind == "op" and val == value

    def expect(self, value: str):
        kind, val, pos = self.peek()
        if kind != "op" or val != value:
            raise ParseError(f"expected {value!r}, found {val or 'end of input'!r}", pos)
        self.i += 1

    def fail(self, what: str):
        _, val, pos = self.peek()
        raise ParseError(f"expected {what}, found {val or 'end of input'!r}", pos)

    # formulas, lowest precedence first
    def formula(self) -> Formula:
        lhs = self.implication()
        while self.at("<->"):
            self.i += 1
            lhs = Iff(lhs, self.implication())
        return lhs

    def implication(self) -> Formula:
        lhs = self.disjunction()
        if self.at("->"):
            self.i += 1
            return Implies(lhs, self.implication())
        return lhs

    def disjunction(self) -> Formula:
        parts = [self.conjunction()]
        while self.at("|"):
            self.i += 1
            parts.append(self.conjunction())
        return parts[0] if len(parts) == 1 else Or(tuple(parts))

    def conjunction(self) -> Formula:
        parts = [self.unary()]
        while self.at("&"):
            self.i += 1
            parts.append(self.unary())
        return parts[0] if len(parts) == 1 else And(tuple(parts))

    def unary(self) -> Formula:
        kind, val, pos = self.peek()
        if kind == "op" and val == "~":
            self.i += 1
            return Not(self.unary())
        if kind == "quant":
            self.i += 1
            vkind, var, vpos = self.peek()
            if vkind != "var":
                self.fail("a variable after quantifier")
            self.i += 1
            self.expect(".")
            body = self.formula()
            return (Exists if val == "E" else Forall)(var, body)
        if kind == "op" and val == "R[":
            return self.within_atom()
        if kind == "op" and val == "I(":
            return self.unit_atom()
        if kind == "op" and val == "(":
            # either a parenthesised formula or an equation starting with "(term"
            save = self.i
            try:
                return self.equation()
            except ParseError as term_err:
                self.i = save
                self.i += 1
                try:
                    inner = self.formula()
                    self.expect(")")
                except ParseError as fml_err:
                    raise max(term_err, fml_err, key=lambda e: e.pos)
                return inner
        return self.equation()

    def equation(self) -> Formula:
        lhs = self.term()
        self.expect("=")
        return Equal(lhs, self.term())

    def within_atom(self) -> Formula:
        _, _, pos = self.peek()
        if self.lang == L:
            raise LanguageError("R-atom not allowed in language L", pos)
        self.i += 1
        neg_sign = self.at("-")
        if neg_sign:
            self.i += 1
        kind, val, ipos = self.peek()
        if kind != "int":
            self.fail("an integer R-index")
        self.i += 1
        width = -int(val) if neg_sign else int(val)
        if width <= 0:
            raise ParseError(f"R-index must be positive, got {width}", ipos)
        self.expect("]")
        self.expect("(")
        lhs = self.term()
        self.expect(",")
        rhs = self.term()
        self.expect(")")
        return Within(width, lhs, rhs)

    def unit_atom(self) -> Formula:
        _, _, pos = self.peek()
        if self.lang == LP:
            raise LanguageError("I-atom not allowed in language Lp", pos)
        self.i += 1
        t = self.term()
        self.expect(")")
        return InUnit(t)

    # terms
    def term(self) -> Term:
        acc = self.product()
        while True:
            if self.at("+"):
                self.i += 1
                acc = acc + self.product()
            elif self.at("-"):
                self.i += 1
                acc = acc - self.product()
            else:
                return acc

    def product(self) -> Term:
        kind, val, _ = self.peek()
        if kind == "op" and val == "-":
            self.i += 1
            return -self.product()
        if kind == "int":
            self.i += 1
            if self.at("*"):
                self.i += 1
                return self.product() * int(val)
            return Term.constant(int(val))
        if kind == "var":
            self.i += 1
            return Term.var(val)
        if kind == "op" and val == "(":
            self.i += 1
            t = self.term()
            self.expect(")")
            return t
        self.fail("a term")


def _norm_lang(lang: str | None) -> str | None:
    if lang is None:
        return None
    try:
        return _LANG_ALIASES[lang]
    except KeyError:
        raise ValueError(f"unknown language {lang!r}; use 'L' or 'Lp'") from None


def parse(text: str, lang: str | None = None) -> Formula:
    """Parse a formula; ``lang=None`` accepts either signature but not both."""
    p = _Parser(text, _norm_lang(lang))
    f = p.formula()
    kind, val, pos = p.peek()
    if kind != "eof":
        raise ParseError(f"unexpected {val!r}", pos)
    if lang is None:
        language(f)
    return f


def parse_term(text: str) -> Term:
    p = _Parser(text, None)
    t = p.term()
    kind, val, pos = p.peek()
    if kind != "eof":
        raise ParseError(f"unexpected {val!r}", pos)
    return t
