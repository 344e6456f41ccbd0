"""Command-line front end.

Exit codes: 0 success, 1 a sentence decided false, 2 usage or input error,
3 internal invariant violation (including a failed randomized check).
"""

from __future__ import annotations

import argparse
import json
import random
import sys
import time
from pathlib import Path

from . import clstats
from .formula import ParseError, free_vars, parse, to_text
from .fuzz import random_assignment, random_formula
from .oracle import solve_qf, vs_decide
from .qe import InvariantError, decide, qe
from .semantics import EvaluationError, eval_ns, eval_q, parse_assignment, parse_ns, parse_rat
from .types import classify_coset, classify_empty, type_equal_sampled

LANGS = {"L": "L", "Lp": "Lp"}


class UsageError(Exception):
    pass


def _formula_arg(text: str, lang: str | None):
    if text.startswith("@"):
        text = Path(text[1:]).read_text()
    return parse(text.strip(), lang)


def _emit(args, payload: dict, text: str) -> None:
    if args.out == "json":
        print(json.dumps(payload, sort_keys=True))
    else:
        print(text)


def _need_seed(args) -> None:
    if args.out == "json" and args.seed is None:
        raise UsageError("--seed is required for randomized subcommands with --out json")


def cmd_qe(args) -> int:
    f = _formula_arg(args.formula, args.lang)
    q = qe(f)
    _emit(args, {"qf": to_text(q), "free": sorted(free_vars(q))}, to_text(q))
    return 0


def cmd_decide(args) -> int:
    f = _formula_arg(args.sentence, args.lang)
    value = decide(f)
    _emit(args, {"value": value}, "true" if value else "false")
    return 0 if value else 1


def cmd_eval(args) -> int:
    f = _formula_arg(args.formula, args.lang)
    env = parse_assignment(args.assign or "", args.model)
    value = eval_q(f, env) if args.model == "q" else eval_ns(f, env)
    _emit(args, {"value": value, "model": args.model}, "true" if value else "false")
    return 0


def cmd_solve1(args) -> int:
    f = _formula_arg(args.formula, args.lang)
    params = parse_assignment(args.assign or "", "q")
    fv = sorted(free_vars(f) - params.keys())
    if len(fv) > 1:
        raise UsageError(f"solve1 needs one free variable, found {', '.join(fv)}")
    var = args.var or (fv[0] if fv else "x")
    q = qe(f)
    sol = solve_qf(q, var, params)
    _emit(args, {"var": var, "qf": to_text(q), **sol.to_json()}, str(sol))
    return 0


def cmd_randtest(args) -> int:
    _need_seed(args)
    seed = 0 if args.seed is None else args.seed
    rng = random.Random(seed)
    disagreements = []
    agreements = 0
    start = time.perf_counter()
    for index in range(args.cases):
        f = random_formula(rng, depth=args.depth, atoms=args.atoms)
        env = random_assignment(rng, sorted(free_vars(f)))
        lhs = eval_q(qe(f), env)
        rhs = vs_decide(f, env)
        if lhs == rhs:
            agreements += 1
        else:
            disagreements.append({"case": index, "formula": to_text(f),
                                  "assignment": {k: str(v) for k, v in env.items()},
                                  "lhs": lhs, "rhs": rhs})
    payload = {"cases": args.cases, "agreements": agreements,
               "disagreements": disagreements, "seed": seed}
    elapsed = time.perf_counter() - start
    _emit(args, payload, f"{agreements}/{args.cases} agree, {len(disagreements)} disagree "
                         f"(seed {seed}, {elapsed:.1f}s)")
    return 3 if disagreements else 0


def cmd_typecls(args) -> int:
    elt = parse_ns(args.elt)
    params = [parse_ns(p) for p in args.params.split(";") if p.strip()] if args.params else []
    desc = classify_coset(elt, params)
    payload = {
        "element": str(elt),
        "params": [str(p) for p in params],
        "descriptor": desc.to_json(),
        "empty_class": classify_empty(elt).to_json(),
        "samples": 0,
    }
    lines = [f"element {elt}", f"descriptor {desc.to_json()}",
             f"over the empty set {classify_empty(elt).to_json()}"]
    if args.other:
        _need_seed(args)
        other = parse_ns(args.other)
        check = type_equal_sampled(elt, other, params, budget=args.budget,
                                   seed=0 if args.seed is None else args.seed,
                                   k_max=args.k_max, r_max=args.r_max, coef_max=args.coef_max)
        payload["other"] = str(other)
        payload["samples"] = check.samples
        payload["consistent"] = check.consistent
        if check.witness is not None:
            payload["witness"] = to_text(check.witness)
        lines.append("consistent on sampled atoms" if check.consistent
                     else f"witness {to_text(check.witness)}")
    _emit(args, payload, "\n".join(lines))
    return 0


def cmd_stab(args) -> int:
    m = clstats.read_matrix(args.matrix)
    eps = parse_rat(args.epsilon)
    w = clstats.order_property(m, eps, budget=args.budget)
    payload = {"epsilon": str(eps), "max_asymmetry": str(clstats.max_asymmetry(m)),
               "witness": None if w is None else w.to_json()}
    text = "no epsilon-asymmetric pair" if w is None else f"chain {list(w.chain)} (length {len(w.chain)})"
    _emit(args, payload, text)
    return 0


def cmd_med(args) -> int:
    values = [parse_rat(v) for v in args.values.split(",")]
    m = clstats.med(values)
    _emit(args, {"median": str(m)}, str(m))
    return 0


def cmd_shatter(args) -> int:
    m = clstats.read_matrix(args.matrix)
    if any(v not in (0, 1) for row in m for v in row):
        raise UsageError("shatter expects a 0/1 matrix")
    value = clstats.is_shattered(m)
    _emit(args, {"shattered": value, "rows": len(m), "cols": len(m[0]) if m else 0},
          "true" if value else "false")
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="intervalqe", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, fn, help_):
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("--out", choices=("json", "text"), default="text")
        sp.set_defaults(func=fn)
        return sp

    def lang(sp):
        sp.add_argument("--lang", choices=tuple(LANGS), default=None,
                        help="signature; detected from the atoms when omitted")

    sp = add("qe", cmd_qe, "eliminate quantifiers")
    sp.add_argument("formula", help="formula text or @file")
    lang(sp)
    sp = add("decide", cmd_decide, "decide a sentence (exit 1 when false)")
    sp.add_argument("sentence")
    lang(sp)
    sp = add("eval", cmd_eval, "evaluate a quantifier-free formula")
    sp.add_argument("formula")
    sp.add_argument("--model", choices=("q", "ns"), default="q")
    sp.add_argument("--assign", default="", help='e.g. "x=1/2,y=2*W1+e1"')
    lang(sp)
    sp = add("solve1", cmd_solve1, "solution set of a one-variable formula")
    sp.add_argument("formula")
    sp.add_argument("--assign", default="", help="rational values for parameters")
    sp.add_argument("--var", default=None)
    lang(sp)
    sp = add("randtest", cmd_randtest, "differential test of qe against virtual substitution")
    sp.add_argument("--cases", type=int, required=True)
    sp.add_argument("--depth", type=int, default=3)
    sp.add_argument("--seed", type=int, default=None)
    sp.add_argument("--atoms", type=int, default=6)
    sp = add("typecls", cmd_typecls, "classify a nonstandard element over parameters")
    sp.add_argument("--elt", required=True)
    sp.add_argument("--params", default="")
    sp.add_argument("--other", default=None, help="compare against this element on sampled atoms")
    sp.add_argument("--budget", type=int, default=1000)
    sp.add_argument("--seed", type=int, default=None)
    sp.add_argument("--k-max", type=int, default=10)
    sp.add_argument("--r-max", type=int, default=10)
    sp.add_argument("--coef-max", type=int, default=5)
    sp = add("stab", cmd_stab, "order-property witness in a square value matrix")
    sp.add_argument("--matrix", required=True)
    sp.add_argument("--epsilon", required=True)
    sp.add_argument("--budget", type=int, default=100_000)
    sp = add("med", cmd_med, "median of 2n-1 values")
    sp.add_argument("--values", required=True)
    sp = add("shatter", cmd_shatter, "does a 0/1 matrix realise every column pattern")
    sp.add_argument("--matrix", required=True)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (UsageError, ParseError, EvaluationError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (InvariantError, AssertionError) as exc:
        print(f"invariant violation: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
