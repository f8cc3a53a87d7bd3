"""
Tests for predicate formulas, builtins and the text format
"""

from itertools import combinations

import numpy as np
import pytest

from automata.errors import ParseError, ValidationError
from highorder.nested import FlattenedEstimate
from predicates.builtins import BUILTIN_KINDS, ScsoPredicate, TDetShape, builtin, t_det_family
from predicates.formula import (And, CardEq, CardGe, CardLe, Equals, Exists, Forall, Nonempty, Not,
                                NotSubsetOf, Or, SubsetOf, SupersetAnyOf, evaluate)
from predicates.parser import parse_predicate, render_predicate

NAMES = ["0", "1", "2", "3", "4", "5"]


def random_estimate(rng, num_states=4):
    """Random depth-2 estimate with at most three members"""
    members = []
    for _ in range(int(rng.integers(0, 4))):
        mask = rng.random(num_states) < 0.5
        members.append([q for q in range(num_states) if mask[q]])
    return FlattenedEstimate.build(members, 2)


class TestAtoms:
    @pytest.mark.parametrize("predicate, states, expected", [
        (Nonempty(), set(), False),
        (Nonempty(), {0}, True),
        (SubsetOf({0, 1}), {1}, True),
        (SubsetOf({0, 1}), {1, 2}, False),
        (NotSubsetOf({2, 3}), {2, 3}, False),
        (NotSubsetOf({2, 3}), {1, 3}, True),
        (Equals({4}), {4}, True),
        (CardEq(1), {3}, True),
        (CardGe(2), {3}, False),
        (CardLe(2), {3, 4}, True),
        (SupersetAnyOf([{0, 1}, {4, 5}]), {3, 4, 5}, True),
        (SupersetAnyOf([{0, 1}, {4, 5}]), {0, 4}, False),
    ])
    def test_level1(self, predicate, states, expected):
        assert predicate.level == 1
        assert evaluate(predicate, states) is expected

    def test_superset_any_member_size(self):
        with pytest.raises(ValidationError):
            SupersetAnyOf([{0, 1, 2}])
        with pytest.raises(ValidationError):
            SupersetAnyOf([set()])

    def test_negative_cardinality(self):
        with pytest.raises(ValidationError):
            CardGe(-1)

    def test_max_state(self):
        assert And(Exists(SubsetOf({4})), Exists(SupersetAnyOf([{1, 5}]))).max_state() == 5
        assert CardEq(1).max_state() == -1


class TestLifts:
    def test_levels(self):
        assert Exists(Nonempty()).level == 2
        assert Forall(Exists(CardGe(2))).level == 3
        assert Not(Forall(Nonempty())).level == 2

    def test_mixed_levels(self):
        with pytest.raises(ValidationError):
            And(Nonempty(), Exists(Nonempty()))

    def test_level_mismatch_on_evaluate(self):
        with pytest.raises(ValidationError):
            evaluate(Exists(Nonempty()), {1})

    def test_hoo_b_on_order2_estimates(self):
        hoo_b = And(Forall(Nonempty()), Exists(CardGe(2)))
        assert evaluate(hoo_b, FlattenedEstimate.build([[3, 4, 5], [4]], 2))
        assert not evaluate(hoo_b, FlattenedEstimate.build([[2]], 2))
        assert not evaluate(hoo_b, FlattenedEstimate.build([[2, 3], []], 2))

    def test_order3(self):
        order3_cso = Forall(Exists(CardGe(2)))
        assert evaluate(order3_cso, FlattenedEstimate.build([[[0, 1], [2]], [[0, 1]]], 3))
        assert not evaluate(order3_cso, FlattenedEstimate.build([[[0, 1], [2]], [[4], [5]]], 3))

    def test_quantifiers_on_empty_value(self):
        empty = FlattenedEstimate.build([], 2)
        assert evaluate(Forall(CardEq(7)), empty)
        assert not evaluate(Exists(Nonempty()), empty)

    def test_de_morgan(self):
        rng = np.random.default_rng(11)
        left, right = Exists(CardGe(2)), Forall(SupersetAnyOf([{0}, {1, 2}]))
        for _ in range(200):
            estimate = random_estimate(rng)
            assert evaluate(Not(And(left, right)), estimate) == evaluate(Or(Not(left), Not(right)), estimate)
            assert evaluate(Not(Exists(CardGe(2))), estimate) == evaluate(Forall(Not(CardGe(2))), estimate)

    def test_hoo_b_implies_hoo_c(self):
        rng = np.random.default_rng(5)
        hoo_b = builtin("hoo_b", {}, 4)
        hoo_c = builtin("hoo_c", {}, 4)
        for _ in range(200):
            estimate = random_estimate(rng)
            if evaluate(hoo_b, estimate):
                assert evaluate(hoo_c, estimate)


class TestParser:
    @pytest.mark.parametrize("text, expected", [
        ("nonempty", Nonempty()),
        ("(nonempty)", Nonempty()),
        ("(not_subset {2 3})", NotSubsetOf({2, 3})),
        ("(card>= 2)", CardGe(2)),
        ("(forall (exists (card>= 2)))", Forall(Exists(CardGe(2)))),
        ("(or (subset {2}) (subset {0 1 3 4 5}))", Or(SubsetOf({2}), SubsetOf({0, 1, 3, 4, 5}))),
        ("(and (forall nonempty) (exists (superset_any {{0 1} {4 5}})))",
         And(Forall(Nonempty()), Exists(SupersetAnyOf([{0, 1}, {4, 5}])))),
        ("  (exists\n(not (superset_any {{0 1}})))  ", Exists(Not(SupersetAnyOf([{0, 1}])))),
    ])
    def test_parse(self, text, expected):
        assert parse_predicate(text, NAMES) == expected

    @pytest.mark.parametrize("text, position", [
        ("(subset {q9})", 9),
        ("(foo nonempty)", 1),
        ("(exists nonempty", 16),
        ("nonempty nonempty", 9),
        ("(card= x)", 7),
        ("(and nonempty (exists nonempty))", 0),
        ("(superset_any {{0 1 2}})", 0),
        ("", 0),
    ])
    def test_errors_carry_position(self, text, position):
        with pytest.raises(ParseError) as info:
            parse_predicate(text, NAMES)
        assert info.value.position == position

    @pytest.mark.parametrize("text, position", [
        ("(notx nonempty)", 1),
        ("(card= 2x)", 7),
        ("(subset {0 1} extra)", 14),
        ("(exists nonempty))", 17),
    ])
    def test_keywords_end_at_delimiters(self, text, position):
        with pytest.raises(ParseError) as info:
            parse_predicate(text, NAMES)
        assert info.value.position == position

    def test_state_names_may_spell_keywords(self):
        assert parse_predicate("(subset {and nonempty})", ["nonempty", "and"]) == SubsetOf({0, 1})

    def test_parse_error_is_validation_error(self):
        with pytest.raises(ValidationError):
            parse_predicate(")", NAMES)

    @pytest.mark.parametrize("predicate", [
        Nonempty(),
        Equals({0, 5}),
        CardLe(3),
        Not(Exists(SupersetAnyOf([{4, 5}, {0, 1}, {2}]))),
        And(Forall(Nonempty()), Exists(CardGe(2)), Exists(Not(Equals({1})))),
        Forall(Or(Exists(SubsetOf({1})), Exists(SubsetOf(set())))),
    ])
    def test_render_reads_back(self, predicate):
        assert parse_predicate(render_predicate(predicate, NAMES), NAMES) == predicate

    def test_render_uses_names(self):
        assert render_predicate(NotSubsetOf({1, 0}), ["q1", "q2"]) == "(not_subset {q1 q2})"


class TestBuiltins:
    def test_kinds(self):
        assert len(BUILTIN_KINDS) == 10
        with pytest.raises(ValidationError):
            builtin("liveness", {}, 3)

    def test_cso(self):
        assert builtin("cso", {"secrets": [1]}, 3) == NotSubsetOf({1})

    def test_missing_parameter(self):
        with pytest.raises(ValidationError):
            builtin("cso", {}, 3)
        with pytest.raises(ValidationError):
            builtin("hoo_a", {}, 3)

    def test_parameter_out_of_range(self):
        with pytest.raises(ValidationError):
            builtin("cso", {"secrets": [3]}, 3)

    def test_critical_observability(self):
        predicate = builtin("critical_observability", {"critical": [2]}, 6)
        assert predicate == Or(SubsetOf({2}), SubsetOf({0, 1, 3, 4, 5}))
        assert not evaluate(predicate, {1, 2})

    def test_t_det_levels(self):
        assert builtin("t_det", {"t": [[0, 1]]}, 3).level == 2
        assert builtin("t_det", {"t": [[0, 1]], "order": 4}, 3).level == 4
        with pytest.raises(ValidationError):
            builtin("t_det", {"t": [[0, 1]], "order": 1}, 3)

    def test_hoo_c(self):
        predicate = builtin("hoo_c", {}, 3)
        assert predicate.level == 2
        assert not evaluate(predicate, FlattenedEstimate.build([[2]], 2))
        assert evaluate(predicate, FlattenedEstimate.build([[2], [0]], 2))

    def test_strong_cso(self):
        predicate = builtin("strong_cso", {"secrets": [1, 3]}, 4)
        assert predicate == ScsoPredicate({1, 3}, {0, 2})


class TestScsoPredicate:
    def test_secret_with_diamond_needs_cover(self):
        predicate = ScsoPredicate({1}, {0, 2})
        assert predicate.holds([(1, None), (1, 0)])
        assert not predicate.holds([(1, None), (0, 2)])
        assert predicate.holds([(0, None)])
        assert predicate.holds([])

    def test_product_state(self):
        predicate = ScsoPredicate({1}, {0})
        assert not predicate.holds_for_product_state(1, frozenset())
        assert predicate.holds_for_product_state(1, frozenset({0}))
        assert predicate.holds_for_product_state(0, frozenset())

    def test_overlap_rejected(self):
        with pytest.raises(ValidationError):
            ScsoPredicate({1}, {1, 2})


class TestDetectorShapes:
    def test_hoo_a(self):
        family = frozenset({frozenset({0, 1}), frozenset({4, 5})})
        predicate = builtin("hoo_a", {"t": [[0, 1], [4, 5]]}, 6)
        assert t_det_family(predicate, 6) == TDetShape(family, 0, False)

    def test_hoo_b_uses_all_pairs(self):
        shape = t_det_family(builtin("hoo_b", {}, 3), 3)
        assert shape.family == frozenset({frozenset({0, 1}), frozenset({0, 2}), frozenset({1, 2})})

    def test_wrapped(self):
        assert t_det_family(builtin("order3_cso", {}, 3), 3).wrappers == 1
        assert t_det_family(builtin("t_det", {"t": [[1]], "order": 4}, 3), 3).wrappers == 2

    def test_negated(self):
        predicate = Not(builtin("hoo_a", {"t": [[0, 1]]}, 3))
        assert t_det_family(predicate, 3).negated

    @pytest.mark.parametrize("kind, params", [
        ("cso", {"secrets": [0]}),
        ("hoo_c", {}),
        ("confusion", {"t": [[0, 1]]}),
        ("strong_cso", {"secrets": [0]}),
    ])
    def test_other_shapes(self, kind, params):
        assert t_det_family(builtin(kind, params, 3), 3) is None


def all_subsets(items):
    items = list(items)
    return [frozenset(c) for size in range(len(items) + 1) for c in combinations(items, size)]


def builtin_cases(n):
    """(kind, params, level, membership test written out on plain sets)"""
    states = frozenset(range(n))
    secrets = frozenset({0})
    critical = frozenset({n - 1})
    t = [frozenset({0})] + ([frozenset({0, 1})] if n > 1 else [])

    def covers(x):
        return any(member <= x for member in t)

    return [
        ("cso", {"secrets": [0]}, 1, lambda x: not x <= secrets),
        ("critical_observability", {"critical": [n - 1]}, 1, lambda x: x <= critical or not x & critical),
        ("determinism", {}, 1, lambda x: len(x) == 1),
        ("hoo_a", {"t": t}, 2, lambda y: all(y) and any(covers(x) for x in y)),
        ("hoo_b", {}, 2, lambda y: all(y) and any(len(x) >= 2 for x in y)),
        ("hoo_c", {}, 2, lambda y: all(any(x != {q} for x in y) for q in states)),
        ("confusion", {"t": t}, 2, lambda y: any(not covers(x) for x in y)),
        ("t_det", {"t": t}, 2, lambda y: all(y) and any(covers(x) for x in y)),
        ("order3_cso", {}, 3, lambda w: all(any(len(x) >= 2 for x in y) for y in w)),
        ("t_det", {"t": t, "order": 3}, 3, lambda w: all(all(y) and any(covers(x) for x in y) for y in w)),
    ]


class TestBuiltinsAgainstSets:
    @pytest.mark.parametrize("n", [1, 2, 3, 4])
    def test_every_estimate(self, n):
        subsets = all_subsets(range(n))
        values = {1: subsets}
        values[2] = all_subsets(subsets) if n <= 3 else all_subsets(subsets[1:])
        if n <= 2:
            values[3] = all_subsets(values[2])
        for kind, params, level, expected in builtin_cases(n):
            predicate = builtin(kind, params, n)
            assert predicate.level == level
            for value in values.get(level, []):
                assert evaluate(predicate, FlattenedEstimate(value, level)) == expected(value), (kind, value)
