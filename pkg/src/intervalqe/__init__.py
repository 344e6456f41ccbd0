"""Decision procedures for the additive reals with a unit-interval predicate."""

from .formula import parse, to_text, nnf, prenex, substitute, free_vars
from .qe import qe, decide
from .semantics import NsElt, eval_q, eval_ns
from .oracle import IntervalSet, vs_decide, equiv_test, solve_qf

__version__ = "0.1.0"

__all__ = [
    "parse", "to_text", "nnf", "prenex", "substitute", "free_vars",
    "qe", "decide", "NsElt", "eval_q", "eval_ns",
    "IntervalSet", "vs_decide", "equiv_test", "solve_qf",
]
