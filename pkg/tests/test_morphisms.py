import itertools
import math

import pytest
from hypothesis import given

import oracles
from conftest import term_strategy
from steinerq import morphisms as mo
from steinerq.models import FreeModel, builtin_model, evaluate
from steinerq.terms import Var, enumerate_reduced, parse, substitute


EX1 = parse("(x1*x3)*(x2*x3)")


class TestOccurrences:
    def test_double(self):
        r = mo.occurrences(EX1)
        assert (r.variable, r.count, r.single_path_exists) == (3, 2, False)

    def test_single(self):
        r = mo.occurrences(parse("(x3*x1)*x2"))
        assert r.count == 1 and r.single_path_exists

    def test_explicit_variable(self):
        assert mo.occurrences(EX1, 1).count == 1

    def test_single_path_iff_single_occurrence(self):
        for t in enumerate_reduced(3, 3):
            r = mo.occurrences(t, 3)
            if r.count:
                assert r.single_path_exists == (r.count == 1)


class TestInvert:
    def test_example(self):
        assert mo.invert_single(parse("(x3*x1)*x2")).text == "(x1*(x2*x4))"

    def test_requires_single(self):
        with pytest.raises(ValueError):
            mo.invert_single(EX1)

    def test_biconditional_in_fano(self):
        fano = builtin_model(7)
        t = parse("(x3*x1)*x2")
        r = mo.invert_single(t, 3, 4)
        for x1, x2, y, z in itertools.product(range(1, 8), repeat=4):
            lhs = evaluate(t, [x1, x2, y], fano) == z
            rhs = evaluate(r, [x1, x2, None, z], fano) == y
            assert lhs == rhs


class TestClassify:
    def setup_method(self):
        self.m = FreeModel(3)
        self.base = [Var(1), Var(2)]
        self.b = Var(3)

    def check(self, text, kind):
        cls = mo.classify_endo(self.m, self.base, self.b, parse(text))
        assert isinstance(cls, kind)
        assert mo.verify_endo_class(self.m, self.base, self.b, cls, rank=2)
        return cls

    def test_automorphism(self):
        cls = self.check("(x1*x3)*x2", mo.Automorphism)
        assert cls.inverse.text == "(x1*(x2*x3))"

    def test_embedding(self):
        cls = self.check("(x1*x3)*(x2*x3)", mo.EmbeddingNotSurjective)
        assert cls.excluded == Var(3)

    def test_not_injective(self):
        cls = self.check("x1*x2", mo.NotInjective)
        assert cls.pair == (Var(3), parse("x1*x2"))

    def test_nonreduced_image_is_reduced_first(self):
        cls = mo.classify_endo(self.m, self.base, self.b, parse("((x1*x3)*x2)*x2"))
        assert isinstance(cls, mo.Automorphism) and cls.image.text == "(x1*x3)"

    def test_extra_variable_rejected(self):
        with pytest.raises(ValueError):
            mo.classify_endo(self.m, self.base, self.b, parse("x4*x1"))


class TestEndoSpec:
    def test_identity(self):
        m = FreeModel(3)
        e = mo.EndoSpec.identity(m)
        t = m.element("(x1*x2)*x3")
        assert e(t) == t

    def test_compose_order(self):
        m = FreeModel(2)
        f = mo.EndoSpec(m, (parse("x1*x2"), Var(2)))
        g = mo.EndoSpec(m, (Var(2), Var(1)))
        # f o g sends x1 to f(x2) = x2 and x2 to f(x1) = x1*x2
        assert [t.text for t in f.compose(g).images] == ["x2", "(x1*x2)"]

    @given(term_strategy(3, 6))
    def test_homomorphism(self, t):
        m = FreeModel(3)
        e = mo.EndoSpec(m, (parse("x1*x2"), Var(2), parse("x3*x1")))
        a = m.element(t)
        if isinstance(a, Var):
            return
        assert e(a) == m.mul(e(a.left), e(a.right))


class TestSubstitution:
    def test_guaranteed(self):
        rep = mo.substitution_check(parse("x1*x4"), EX1, z=4, y=3)
        assert rep.substituted_reduced and rep.reducedness_guaranteed and not rep.collisions

    def test_preconditions(self):
        with pytest.raises(ValueError):
            mo.substitution_check(parse("x1*x1"), EX1, z=4, y=3)
        with pytest.raises(ValueError):
            mo.substitution_check(parse("x1*x3"), EX1, z=3, y=3)


class TestInjectivityCondition:
    def test_single_occurrence(self):
        assert mo.injectivity_condition(parse("x3*x1"), 3) == mo.HoldsUpTo(math.inf)

    def test_ex1(self):
        assert mo.injectivity_condition(EX1, 3) == mo.HoldsUpTo(3)

    def test_agrees_with_brute_force(self):
        # brute-force: substituted images of distinct reduced terms stay distinct
        images = {}
        for r in enumerate_reduced(2, 2):
            u = oracles.reduce(oracles.to_tuple(substitute(EX1, 3, r)))
            key = min(oracles.flips(u), key=repr)
            assert key not in images
            images[key] = r
