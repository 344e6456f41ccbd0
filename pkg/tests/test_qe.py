import random
from fractions import Fraction

import pytest

from intervalqe.formula import (
    Equal, Exists, Forall, Literal, Not, Term, Within, free_vars, is_quantifier_free, nnf, parse,
    to_text,
)
from intervalqe.fuzz import random_assignment, random_formula, random_rational
from intervalqe.oracle import IntervalSet, solve_primitive, solve_qf, vs_compile
from intervalqe.qe import (
    Constraint, PrimitiveExistential, decide, eliminate_cases, eliminate_exists,
    eliminate_var, qe, to_primitive,
)
from intervalqe.rewrite import to_lprime
from intervalqe.semantics import eval_q

x, y = Term.var("x"), Term.var("y")
ZERO = Term()


def lit(atom, positive=True):
    return Literal(positive, atom)


class TestPrimitive:
    def test_common_scale(self):
        pe, outside = to_primitive("y", [lit(Within(1, ZERO, y - x)), lit(Within(1, ZERO, 2 * y))])
        assert pe.scale == 2 and outside == []
        assert set(pe.constraints) == {Constraint("in", 2 * x, 2), Constraint("in", ZERO, 1)}

    def test_single_equation(self):
        pe, _ = to_primitive("y", [lit(Equal(y, x))])
        assert pe.scale == 1 and pe.constraints == (Constraint("eq", x),)

    def test_scope_separation(self):
        other = lit(Within(1, ZERO, x))
        pe, outside = to_primitive("y", [lit(Equal(y, x)), other])
        assert outside == [other]
        assert to_primitive("y", [other]) == (None, [other])

    def test_negative_coefficient_flips(self):
        # 0 <= x - 3y <= 1  <=>  3y in [x - 1, x]
        pe, _ = to_primitive("y", [lit(Within(1, ZERO, x - 3 * y))])
        assert pe.constraints == (Constraint("in", x - 1, 1),)

    def test_invalid(self):
        with pytest.raises(ValueError):
            PrimitiveExistential("y", 1, ())
        with pytest.raises(ValueError):
            Constraint("in", x, 0)

    def test_closed_instance(self):
        pe = PrimitiveExistential("y", 1, (Constraint("in", ZERO, 1), Constraint("in", Term.constant(1), 1)))
        assert eval_q(eliminate_exists(pe), {})
        assert solve_primitive(pe, {}) == IntervalSet.point(1)

    def test_puncture_alone(self):
        pe = PrimitiveExistential("y", 1, (Constraint("ne", x),))
        assert eval_q(eliminate_exists(pe), {"x": 0})

    def test_guards_exhaustive(self):
        t1, t2, t3 = Term.var("a"), Term.var("b"), Term.var("c")
        pe = PrimitiveExistential("y", 1, (
            Constraint("in", t1, 1), Constraint("out", t2 - 1, 1), Constraint("ne", t3)))
        cases = eliminate_cases(pe)
        qf = eliminate_exists(pe)
        rng = random.Random(9)
        for _ in range(1000):
            env = random_assignment(rng, ["a", "b", "c"])
            if rng.random() < 0.5:  # force endpoint collisions
                env["b"] = env["a"] + rng.choice([0, 1, 2, Fraction(1, 2)])
                env["c"] = rng.choice([env["a"], env["a"] + 1, env["c"]])
            expected = not solve_primitive(pe, env).is_empty()
            assert eval_q(qf, env) == expected
            hits = [c.satisfiable for c in cases if eval_q(c.guard, env)]
            assert hits and all(h == expected for h in hits)

    def test_random_primitive_vs_interval_oracle(self):
        rng = random.Random(10)
        kinds = ("eq", "ne", "in", "out")
        for _ in range(300):
            cons = tuple(
                Constraint(k := rng.choice(kinds), Term.of({"a": rng.randint(-2, 2), "b": rng.randint(-2, 2)},
                                                          rng.randint(-2, 2)),
                           rng.randint(1, 3) if k in ("in", "out") else 0)
                for _ in range(rng.randint(1, 4)))
            pe = PrimitiveExistential("y", rng.randint(1, 3), cons)
            qf = eliminate_exists(pe)
            for _ in range(10):
                env = random_assignment(rng, ["a", "b"])
                assert eval_q(qf, env) == (not solve_primitive(pe, env).is_empty()), str(pe)


class TestQE:
    def test_sum_of_units(self):
        q = qe(parse("E y.(I(y) & I(x-y))"))
        assert is_quantifier_free(q) and free_vars(q) == {"x"}
        assert solve_qf(q, "x") == IntervalSet.closed(0, 2)

    def test_one_is_definable(self):
        q = qe(parse("I(x) & A y.(I(y) -> I(x-y))"))
        assert solve_qf(q, "x") == IntervalSet.point(1)

    def test_qf_unchanged(self):
        f = parse("I(x) & ~x = 1")
        assert qe(f) == to_lprime(f)

    @pytest.mark.parametrize("text, value", [
        ("A x. (I(x) -> I(x))", True),
        ("E x. (I(x) & I(x-2))", False),
        ("E x. (I(x) & ~(x = 0) & ~(x = 1))", True),
        ("A x. E y. (2*y = x)", True),
        ("E x. (3*x = 1 & I(3*x - 1))", True),
        ("A x. (R[2](0, x) -> (R[1](0, x) | R[1](1, x)))", True),
        ("E x. A y. (I(y) -> I(x + y))", True),
        ("E x. A y. (I(y) -> I(x + 2*y))", False),
    ])
    def test_decide(self, text, value):
        assert decide(parse(text)) is value

    def test_decide_rejects_free(self):
        with pytest.raises(ValueError):
            decide(parse("I(x)"))

    def test_idempotent_and_forall_duality(self):
        rng = random.Random(12)
        for _ in range(150):
            f = random_formula(rng, depth=2, atoms=5)
            q = qe(f)
            qq = qe(q)
            body = f.body if isinstance(f, (Exists, Forall)) else f
            q_all = qe(Forall("y", body))
            q_dual = qe(Not(Exists("y", Not(body))))
            for _ in range(8):
                env = random_assignment(rng, sorted(free_vars(f) | {"y"}))
                assert eval_q(q, env) == eval_q(qq, env)
                assert eval_q(q_all, env) == eval_q(q_dual, env)

    @pytest.mark.parametrize("limit", [0, 10**6])
    def test_both_elimination_paths(self, limit):
        rng = random.Random(13)
        for _ in range(120):
            f = random_formula(rng, depth=0, atoms=6, free=("x", "u", "y"))
            check = vs_compile(Exists("y", f))
            g = eliminate_var("y", nnf(f), branch_limit=limit)
            assert "y" not in free_vars(g) and is_quantifier_free(g)
            for _ in range(10):
                env = random_assignment(rng, ["u", "x"])
                assert eval_q(g, env) == check(env), to_text(f)

    def test_differential_sample(self):
        rng = random.Random(14)
        for _ in range(400):
            f = random_formula(rng, depth=3, atoms=6)
            q = qe(f)
            check = vs_compile(f)
            env = random_assignment(rng, sorted(free_vars(f)))
            assert eval_q(q, env) == check(env), to_text(f)

    def test_parametrised_window(self):
        q = qe(parse("I(x + y) & I(x - y + 1)"))
        assert solve_qf(q, "x", {"y": Fraction(1, 4)}) == IntervalSet.closed(Fraction(-1, 4), Fraction(1, 4))
        assert solve_qf(q, "x", {"y": random_rational(random.Random(0))}) is not None
