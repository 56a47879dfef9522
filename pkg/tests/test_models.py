import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from conftest import term_strategy
from steinerq.formats import fixture_path
from steinerq.models import (
    Dependent,
    FiniteModel,
    FreeModel,
    ModelError,
    NoWitnessUpTo,
    builtin_model,
    evaluate,
    standard_construction,
)
from steinerq.terms import CapExceeded, Var, parse, reduce

terms = term_strategy()


class TestFiniteModel:
    def test_fano_table_matches_oracle(self, fano):
        table = oracles.steiner_table(range(1, 8), oracles.FANO_BLOCKS)
        for a, b in itertools.product(range(1, 8), repeat=2):
            assert fano.mul(a, b) == table[a, b]

    def test_sts9_is_the_affine_plane(self, sts9):
        assert sorted(sts9.blocks()) == sorted(oracles.affine_plane_blocks())

    @pytest.mark.parametrize("order", [7, 9])
    def test_laws(self, order):
        m = builtin_model(order)
        for a, b in itertools.product(m.points, repeat=2):
            assert m.mul(a, a) == a
            assert m.mul(a, b) == m.mul(b, a)
            assert m.mul(a, m.mul(a, b)) == b

    def test_rejects_doubly_covered_pair(self):
        with pytest.raises(ModelError):
            FiniteModel.from_blocks(range(1, 8), oracles.FANO_BLOCKS + [(1, 2, 4)])

    def test_rejects_uncovered_pair(self):
        with pytest.raises(ModelError):
            FiniteModel.from_blocks(range(1, 8), oracles.FANO_BLOCKS[:-1])

    def test_unknown_order(self):
        with pytest.raises(ModelError):
            builtin_model(13)

    def test_load_fixture(self):
        m = FiniteModel.load(fixture_path("fano.psts"))
        assert len(m) == 7

    @settings(max_examples=50)
    @given(terms)
    def test_vectorized_evaluation_matches_oracle(self, t):
        m = builtin_model(7)
        table = oracles.steiner_table(range(1, 8), oracles.FANO_BLOCKS)
        grid = m.evaluate_all(t, 3)
        u = oracles.to_tuple(t)
        for asg in itertools.product(range(7), repeat=3):
            pts = [m.points[i] for i in asg]
            assert m.points[grid[asg]] == oracles.evaluate(u, pts, table)


class TestFreeModel:
    def test_element_reduces(self):
        m = FreeModel(3)
        assert m.element("(x1*x2)*x2") == Var(1)
        with pytest.raises(ModelError):
            m.element("x4")

    def test_mul(self):
        m = FreeModel(3)
        assert m.mul(Var(1), parse("x1*x2")) == Var(2)
        assert m.mul(Var(1), Var(2)).text == "(x1*x2)"

    @given(terms, terms)
    def test_mul_laws(self, a, b):
        m = FreeModel(3)
        a, b = m.element(a), m.element(b)
        assert m.mul(a, a) == a
        assert m.mul(a, b) == m.mul(b, a)
        assert m.mul(a, m.mul(a, b)) == b

    @given(terms, st.lists(st.integers(1, 7), min_size=3, max_size=3))
    def test_evaluation_commutes_with_reduction(self, t, asg):
        fano = builtin_model(7)
        assert evaluate(t, asg, fano) == evaluate(reduce(t), asg, fano)

    def test_evaluate_in_free_model(self):
        m = FreeModel(3)
        t = parse("x1*x2")
        assert evaluate(t, [Var(1), parse("x1*x2")], m) == Var(2)


class TestLevels:
    @pytest.mark.parametrize("n, k, sizes", [
        (3, 3, [3, 6, 12, 51]),
        (2, 3, [2, 3, 3, 3]),
        (1, 4, [1, 1, 1, 1, 1]),
        (4, 2, [4, 10, 37]),
    ])
    def test_sizes_agree_across_methods(self, n, k, sizes):
        m = FreeModel(n)
        results = [m.levels(k, method) for method in ("enumerate", "closure", "construction")]
        assert results[0] == results[1] == results[2]
        assert [len(s) for s in results[0]] == sizes

    def test_both_method(self):
        assert len(FreeModel(3).levels(2, "both")[-1]) == 12

    def test_level_of(self):
        m = FreeModel(3)
        assert m.level_of(m.element("(x1*x2)*x3")) == 2
        with pytest.raises(ModelError):
            m.level_of(parse("(x1*x2)*x3"))  # not canonical

    def test_caps(self):
        with pytest.raises((CapExceeded, ModelError)):
            FreeModel(3).levels(9)

    def test_construction_blocks_are_steiner(self):
        c = standard_construction(3, 2)
        seen = set()
        for blk in c.blocks:
            for pair in itertools.combinations(sorted(blk), 2):
                assert pair not in seen
                seen.add(pair)


class TestClosure:
    def test_whole_model(self):
        c = FreeModel(2).closure([Var(1), Var(2)])
        assert c.saturated and len(c) == 3

    def test_triangle_is_closed(self):
        m = FreeModel(3)
        c = m.closure([Var(1), Var(2), parse("x1*x2")])
        assert c.saturated and len(c) == 3

    def test_generator_absent(self):
        m = FreeModel(3)
        c = m.closure([Var(1), Var(2), parse("(x1*x3)*(x2*x3)")])
        assert Var(3) not in c and not c.saturated

    def test_provenance_evaluates(self):
        m = FreeModel(3)
        gens = [Var(1), parse("x1*x2"), Var(3)]
        c = m.closure(gens, 8, track=True)
        for e, how in c.provenance.items():
            assert evaluate(how, gens, m) == e

    def test_working_set_cap(self):
        m = FreeModel(3)
        with pytest.raises(CapExceeded):
            m.closure([Var(1), Var(2), parse("(x1*x3)*(x2*x3)")], 24, max_elements=1000)


class TestIndependence:
    def test_generators_independent(self):
        m = FreeModel(3)
        assert m.independence_refute(m.generators(), 2) == NoWitnessUpTo(2)

    def test_triangle_dependent(self):
        m = FreeModel(3)
        res = m.independence_refute([Var(1), Var(2), parse("x1*x2")], 2)
        assert isinstance(res, Dependent)
        assert res.left == Var(3) and res.right.text == "(x1*x2)"

    def test_duplicates_rejected(self):
        with pytest.raises(ValueError):
            FreeModel(2).independence_refute([Var(1), Var(1)], 1)


class TestHomomorphism:
    def test_into_fano(self, fano):
        h = FreeModel(3).extend_hom([1, 2, 4], fano)
        assert h(parse("x1*x2")) == 3
        assert h(parse("(x1*x2)*x3")) == fano.mul(3, 4)

    def test_into_free(self):
        h = FreeModel(2).extend_hom([Var(1), parse("x1*x2")], FreeModel(2))
        assert h(parse("x1*x2")) == Var(2)

    @given(terms, terms)
    def test_is_a_homomorphism(self, a, b):
        fano = builtin_model(7)
        m = FreeModel(3)
        h = m.extend_hom([1, 2, 4], fano)
        a, b = m.element(a), m.element(b)
        assert h(m.mul(a, b)) == fano.mul(h(a), h(b))
