import json
import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from intervalqe.formula import Exists, InUnit, Term, free_vars, parse
from intervalqe.fuzz import random_assignment, random_formula
from intervalqe.oracle import (
    IntervalSet, equiv_test, solve_primitive, solve_qf, vs_compile, vs_decide,
)
from intervalqe.qe import Constraint, PrimitiveExistential, eliminate_exists
from intervalqe.semantics import eval_q

ZERO = Term()


def pe(*cons):
    return PrimitiveExistential("y", 1, cons)


class TestSolvePrimitive:
    def test_touching_intervals(self):
        s = solve_primitive(pe(Constraint("in", ZERO, 1), Constraint("in", Term.constant(1), 1)), {})
        assert s == IntervalSet.point(1)
        assert s.to_json() == {"components": [{"kind": "point", "at": "1"}]}

    def test_complement_is_open(self):
        s = solve_primitive(pe(Constraint("in", ZERO, 2), Constraint("out", ZERO, 1)), {})
        assert s == IntervalSet.interval(1, 2, lo_closed=False)
        assert 1 not in s and 2 in s

    def test_puncture(self):
        s = solve_primitive(pe(Constraint("ne", ZERO)), {})
        assert s == ~IntervalSet.point(0)
        assert [str(c) for c in s.components()] == ["(-inf, 0)", "(0, +inf)"]

    def test_scaled_variable(self):
        # solutions are reported for z = 2y
        s = solve_primitive(PrimitiveExistential("y", 2, (Constraint("in", ZERO, 1),)), {})
        assert s == IntervalSet.closed(0, 1)

    def test_agrees_with_vs(self):
        rng = random.Random(21)
        for _ in range(200):
            f = random_formula(rng, depth=0, atoms=4, free=("x", "y"))
            g = Exists("y", f)
            sol = solve_qf(f, "y", {"x": (xv := random_assignment(rng, ["x"])["x"])})
            assert (not sol.is_empty()) == vs_decide(g, {"x": xv})


class TestSolveQF:
    def test_window(self):
        f = parse("I(x + y) & I(x - y + 1)")
        sol = solve_qf(f, "x", {"y": Fraction(1, 4)})
        assert sol.to_json() == {"components": [
            {"kind": "interval", "lo": "-1/4", "lo_closed": True, "hi": "1/4", "hi_closed": True}]}

    def test_unbounded(self):
        sol = solve_qf(parse("~I(x)"), "x")
        assert sol == ~IntervalSet.closed(0, 1)
        assert sol.to_json()["components"][0]["lo"] == "-inf"

    def test_requires_all_params(self):
        with pytest.raises(ValueError):
            solve_qf(parse("I(x + y)"), "x")


intervals = st.builds(
    lambda a, b, lc, hc: IntervalSet.interval(min(a, b), max(a, b), lc, hc),
    st.integers(-6, 6), st.integers(-6, 6), st.booleans(), st.booleans())
sets = st.lists(intervals, max_size=3).map(
    lambda parts: sum_sets(parts))


def sum_sets(parts):
    out = IntervalSet.empty()
    for p in parts:
        out = out | p
    return out


probe = [Fraction(n, 4) for n in range(-30, 31)]


@given(sets, sets, sets)
def test_interval_algebra(a, b, c):
    assert a & b == b & a
    assert (a & b) & c == a & (b & c)
    assert ~~a == a
    assert a - b == a & ~b
    for q in probe:
        assert (q in a | b) == (q in a or q in b)
        assert (q in a & b) == (q in a and q in b)


def test_empty_full():
    assert IntervalSet.empty().is_empty()
    assert ~IntervalSet.empty() == IntervalSet.full()
    assert IntervalSet.closed(2, 1).is_empty()
    assert str(IntervalSet.empty()) == "{}"


class TestVS:
    @pytest.mark.parametrize("text, env, value", [
        ("E y. (I(y) & I(x-y))", {"x": Fraction(3, 2)}, True),
        ("A x.(I(x) -> I(x))", {}, True),
        ("E x.(I(x) & I(x-2))", {}, False),
        ("E y. I(y)", {}, True),
        ("A y. (~y = x)", {"x": 0}, False),
        ("E y. (R[1](0, 2*y - x) & ~2*y = x & ~2*y = x + 1)", {"x": 5}, True),
    ])
    def test_examples(self, text, env, value):
        assert vs_decide(parse(text), env) is value

    def test_compile_matches_decide(self):
        rng = random.Random(22)
        for _ in range(50):
            f = random_formula(rng, depth=2, atoms=4)
            ev = vs_compile(f)
            for _ in range(5):
                env = random_assignment(rng, sorted(free_vars(f)))
                assert ev(env) == vs_decide(f, env)

    def test_qf_matches_eval(self):
        rng = random.Random(23)
        for _ in range(300):
            f = random_formula(rng, depth=0, atoms=5)
            env = random_assignment(rng, ["u", "x"])
            assert vs_decide(f, env) == eval_q(f, env)


class TestEquiv:
    def test_agree(self):
        r = equiv_test(InUnit(Term.var("x")), parse("R[1](0, x)"), cases=1000, seed=3)
        assert r.ok and r.agreements == 1000

    def test_disagree(self):
        r = equiv_test(parse("I(x)"), parse("I(x - 1)"), cases=1000, seed=3)
        assert not r.ok
        w = r.disagreements[0]
        env = {"x": Fraction(w["assignment"]["x"])}
        assert eval_q(parse("I(x)"), env) != eval_q(parse("I(x - 1)"), env)

    def test_report_json(self):
        r = equiv_test(parse("I(x)"), parse("I(x - 1)"), cases=50, seed=4)
        d = json.loads(r.dumps())
        assert set(d) == {"cases", "agreements", "disagreements", "seed"}
        assert d["cases"] == 50 and d["seed"] == 4
        assert r.dumps() == equiv_test(parse("I(x)"), parse("I(x - 1)"), cases=50, seed=4).dumps()

    def test_qe_outputs(self):
        from intervalqe.qe import qe
        rng = random.Random(24)
        for _ in range(20):
            f = random_formula(rng, depth=2, atoms=5)
            assert equiv_test(f, qe(f), cases=100, seed=rng.randrange(1000)).ok

    def test_unrelated_free_vars(self):
        with pytest.raises(ValueError):
            equiv_test(parse("I(x)"), parse("I(y)"))


def test_cross_oracle_primitive():
    rng = random.Random(25)
    for _ in range(200):
        cons = []
        for _ in range(rng.randint(1, 3)):
            kind = rng.choice(["eq", "ne", "in", "out"])
            t = Term.of({"a": rng.randint(-2, 2)}, rng.randint(-2, 2))
            cons.append(Constraint(kind, t, rng.randint(1, 3) if kind in ("in", "out") else 0))
        p = PrimitiveExistential("y", rng.randint(1, 2), tuple(cons))
        env = random_assignment(rng, ["a"])
        assert (not solve_primitive(p, env).is_empty()) == eval_q(eliminate_exists(p), env)
