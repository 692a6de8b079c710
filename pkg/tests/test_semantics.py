"""Model checking over finite structures and structure classes."""

import itertools

import pytest

from abdukit.fixtures import (
    PLANT_ALPHABET,
    TWO_PRED_ALPHABET,
    plant_candidate_structures,
    plant_fixture,
    plant_rule,
    plant_structure,
    two_pred_structures,
)
from abdukit.graphs import sent_of
from abdukit.lang import conj, parse_formula, parse_sentence, true_formula
from abdukit.semantics import (
    Assignment,
    SemanticsError,
    StructureClass,
    class_from_theory,
    equivalent_in,
    logically_implies,
    satisfies,
    valid_in,
)


def two_pred_class():
    return StructureClass(tuple(two_pred_structures()))


def sent(text, alphabet=TWO_PRED_ALPHABET):
    return parse_sentence(text, alphabet)


# Canonical ordering of the four structures puts them at these indices.
M_EMPTY, M_P2, M_P1, M_BOTH = 0, 1, 2, 3


class TestSatisfies:
    def test_plant_structure_validates_g0_and_observation(self):
        fx = plant_fixture()
        m = plant_structure()
        phi = conj(sent_of(fx.graphs["g0"], PLANT_ALPHABET),
                   parse_sentence("Hold(P, High)", PLANT_ALPHABET))
        assert satisfies(m, phi)

    def test_true_macro_everywhere(self):
        for m in two_pred_structures():
            assert satisfies(m, true_formula(TWO_PRED_ALPHABET))

    def test_negated_conjunction_truth_table(self):
        # Oracle: hand truth table over the four structures.
        phi = sent("!(p1(0) & p2(0))")
        expected = {M_EMPTY: True, M_P2: True, M_P1: True, M_BOTH: False}
        cls = two_pred_class()
        for i, m in enumerate(cls):
            assert satisfies(m, phi) == expected[i]

    def test_second_order_quantifier(self):
        cls = two_pred_class()
        # Some signed literal holds in every structure.
        some_true = sent("exists X . X")
        for m in cls:
            assert satisfies(m, some_true)
        # X pinned to the literal p1(0) and required false: holds exactly
        # where p1(0) fails.
        pinned = sent("exists X . (X == p1(0)) & !X")
        expected = {M_EMPTY: True, M_P2: True, M_P1: False, M_BOTH: False}
        for i, m in enumerate(cls):
            assert satisfies(m, pinned) == expected[i]

    def test_assignment_gap_is_an_error(self):
        phi = parse_formula("p1(x:obj)", TWO_PRED_ALPHABET)
        with pytest.raises(SemanticsError):
            satisfies(two_pred_structures()[0], phi, Assignment())


class TestValidIn:
    def test_plant_rule_valid_in_example_structure(self):
        assert valid_in(plant_structure(), plant_rule())

    def test_reflexive_equality(self):
        phi = parse_formula("x:obj = x:obj", TWO_PRED_ALPHABET)
        for m in two_pred_structures():
            assert valid_in(m, phi)

    def test_p2_fails_where_only_p1_holds(self):
        cls = two_pred_class()
        assert not valid_in(cls.structures[M_P1], sent("p2(0)"))
        assert valid_in(cls.structures[M_P1], sent("p1(0)"))


class TestLogicalImplication:
    def test_whole_graph_implies_subgraph(self):
        fx = plant_fixture()
        s0 = sent_of(fx.graphs["g0"], PLANT_ALPHABET)
        s1 = sent_of(fx.graphs["g1"], PLANT_ALPHABET)
        assert logically_implies([s0], [s1], fx.cls)

    def test_vacuous(self):
        assert logically_implies([], [], two_pred_class())

    def test_independent_atoms(self):
        cls = two_pred_class()
        assert not logically_implies([sent("p1(0)")], [sent("p2(0)")], cls)

    def test_reflexive_and_transitive_on_pool(self):
        cls = two_pred_class()
        pool = [sent(t) for t in ("p1(0)", "p1(0) & p2(0)", "p1(0) | p2(0)", "true")]
        for a in pool:
            assert logically_implies([a], [a], cls)
        for a, b, c in itertools.product(pool, repeat=3):
            if logically_implies([a], [b], cls) and logically_implies([b], [c], cls):
                assert logically_implies([a], [c], cls)


class TestEquivalence:
    def test_tautologies(self):
        cls = two_pred_class()
        assert equivalent_in(true_formula(TWO_PRED_ALPHABET), sent("p1(0) | !p1(0)"), cls)

    def test_distinct_atoms_not_equivalent(self):
        cls = two_pred_class()
        assert not equivalent_in(sent("p1(0)"), sent("p2(0)"), cls)

    def test_equivalence_relation_on_pool(self):
        cls = two_pred_class()
        pool = [sent(t) for t in ("p1(0)", "p2(0)", "p1(0) | p2(0)", "!(p1(0) & p2(0))", "true")]
        for a in pool:
            assert equivalent_in(a, a, cls)
        for a, b in itertools.product(pool, repeat=2):
            assert equivalent_in(a, b, cls) == equivalent_in(b, a, cls)
        for a, b, c in itertools.product(pool, repeat=3):
            if equivalent_in(a, b, cls) and equivalent_in(b, c, cls):
                assert equivalent_in(a, c, cls)

    def test_sentence_truth_is_assignment_free(self):
        cls = two_pred_class()
        phi = sent("p1(0) | p2(0)")
        for m in cls:
            base = satisfies(m, phi)
            assert valid_in(m, phi) == base


class TestClassFromTheory:
    def test_plant_rule_keeps_conforming_structures(self):
        candidates = StructureClass(tuple(plant_candidate_structures()))
        cls = class_from_theory(candidates, [plant_rule()])
        # The running-example structure survives; rule violators are dropped.
        assert plant_structure().canonical_token() in {
            m.canonical_token() for m in cls
        }
        assert 0 < len(cls) < len(candidates)
        assert cls.warning is None

    def test_empty_theory_is_identity(self):
        candidates = two_pred_class()
        assert class_from_theory(candidates, []).structures == candidates.structures

    def test_truth_table_filter(self):
        cls = class_from_theory(two_pred_class(), [sent("p1(0)")])
        assert {i for i, m in enumerate(two_pred_class())
                if m.canonical_token() in {k.canonical_token() for k in cls}} == {M_P1, M_BOTH}

    def test_empty_result_is_flagged(self):
        cls = class_from_theory(two_pred_class(), [sent("false")])
        assert len(cls) == 0
        assert cls.warning

    def test_shared_domain_enforced(self):
        big = plant_structure()
        other = two_pred_structures()[0]
        with pytest.raises(SemanticsError):
            StructureClass((big, other))
