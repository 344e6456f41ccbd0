import random

import pytest
from hypothesis import given, strategies as st

from intervalqe.formula import (
    And, Equal, Exists, Forall, InUnit, LanguageError, Not, Or, ParseError, Term,
    Within, alpha_equal, free_vars, is_quantifier_free, nnf, parse, prenex,
    substitute, to_text,
)
from intervalqe.fuzz import random_assignment, random_formula
from intervalqe.oracle import vs_compile
from intervalqe.semantics import eval_q

x, y, z = Term.var("x"), Term.var("y"), Term.var("z")

small = st.integers(-20, 20)
terms = st.builds(lambda a, b, c: Term.of({"x": a, "y": b}, c), small, small, small)


class TestTerm:
    def test_canonical_zero_dropped(self):
        assert Term.of({"x": 0, "y": 2}).vars == frozenset({"y"})
        assert x - x == Term()

    @given(terms, terms, terms)
    def test_group_laws(self, a, b, c):
        assert (a + b) + c == a + (b + c)
        assert a + b == b + a
        assert a + (-a) == Term()
        assert 3 * (a + b) == 3 * a + 3 * b

    def test_print(self):
        assert str(3 * x - 1) == "3*x - 1"
        assert str(Term()) == "0"


class TestParse:
    def test_atom(self):
        assert parse("I(x)", "L") == InUnit(x)

    def test_exists(self):
        assert parse("E y. (I(y) & I(x - y))", "L") == Exists("y", And((InUnit(y), InUnit(x - y))))

    def test_within(self):
        assert parse("R[2](0, 3*x - 1)", "Lp") == Within(2, Term(), 3 * x - 1)

    def test_print_examples(self):
        assert to_text(InUnit(x)) == "I(x)"
        assert to_text(Exists("y", Equal(2 * y, x))) == "E y. (2*y = x)"

    def test_precedence(self):
        f = parse("~I(x) & I(y) | I(z) -> I(x) <-> I(y)")
        assert to_text(f) == to_text(parse("((((~I(x)) & I(y)) | I(z)) -> I(x)) <-> I(y)"))

    def test_quantifier_scope_extends_right(self):
        f = parse("E y. I(y) & I(x)")
        assert isinstance(f, Exists) and free_vars(f) == {"x"}

    def test_parenthesised_term_vs_formula(self):
        assert parse("(x + 1) = y") == Equal(x + 1, y)
        assert parse("(I(x))") == InUnit(x)

    @pytest.mark.parametrize("bad", ["I(x", "R[0](x, y)", "x + = y", "E 1. I(x)", "I(x) &", "2*x*y = 0", "x"])
    def test_rejects(self, bad):
        with pytest.raises(ParseError):
            parse(bad)

    def test_language_enforced(self):
        with pytest.raises(LanguageError):
            parse("R[1](0, x)", "L")
        with pytest.raises(LanguageError):
            parse("I(x) & R[1](0, x)")

    def test_roundtrip_generated(self):
        rng = random.Random(11)
        for _ in range(10_000):
            f = random_formula(rng, depth=3, atoms=6)
            g = parse(to_text(f))
            assert alpha_equal(f, g), to_text(f)
            assert free_vars(g) == free_vars(f)


class TestTransforms:
    def test_nnf_de_morgan(self):
        a, b = InUnit(x), InUnit(y)
        assert nnf(Not(And((a, b)))) == Or((Not(a), Not(b)))
        assert nnf(Not(Exists("y", b))) == Forall("y", Not(b))

    def test_prenex_pulls_out(self):
        f = And((Exists("y", InUnit(y)), InUnit(x)))
        g = prenex(f)
        assert isinstance(g, Exists) and is_quantifier_free(g.body)
        assert free_vars(g) == {"x"}

    def test_prenex_renames_clash(self):
        f = And((Exists("y", InUnit(y)), InUnit(y)))
        g = prenex(f)
        assert isinstance(g, Exists) and g.var != "y"
        assert free_vars(g) == {"y"}

    def test_prenex_identity_on_qf(self):
        f = parse("I(x) & ~x = 1")
        assert prenex(f) == f

    def test_preserve_semantics(self):
        rng = random.Random(5)
        for _ in range(60):
            f = random_formula(rng, depth=2, atoms=4)
            n, p = nnf(f), prenex(f)
            assert free_vars(n) == free_vars(f) == free_vars(p)
            ef, en, ep = vs_compile(f), vs_compile(n), vs_compile(p)
            for _ in range(17):
                env = random_assignment(rng, sorted(free_vars(f)))
                assert ef(env) == en(env) == ep(env), to_text(f)

    def test_nnf_qf_matches_eval(self):
        rng = random.Random(6)
        for _ in range(200):
            f = random_formula(rng, depth=0, atoms=5)
            env = random_assignment(rng, ["x", "u"])
            assert eval_q(f, env) == eval_q(nnf(f), env)


class TestSubstitute:
    def test_plain(self):
        assert substitute(InUnit(x), "x", y + 1) == InUnit(y + 1)

    def test_capture_avoiding(self):
        f = substitute(Exists("y", Equal(y, x)), "x", y)
        assert isinstance(f, Exists) and f.var != "y"
        assert f.body == Equal(Term.var(f.var), y)

    def test_identity(self):
        f = parse("E y. (I(y) & I(x - y)) | x = 2")
        assert substitute(f, "x", x) == f

    def test_bound_variable_untouched(self):
        f = parse("E x. I(x)")
        assert substitute(f, "x", y) == f
