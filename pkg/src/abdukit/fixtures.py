"""Built-in desk-scale fixtures shared by tests, demos, CLI and service.

Three scenarios:

* ``plant`` -- a faucet/pipe operation-planning alphabet with a rule theory
  and the three hypothesis graphs used throughout the dialogue examples.
* ``two_pred`` -- one sort, two unary predicates, the four structures over a
  single element, and an eight-sentence pool whose equivalence classes form
  the PropH property universe.
* ``three_pred`` -- one sort, three unary predicates, a single all-true
  structure and four small ground graphs; the stage for the simple-protocol
  non-convergence examples.
"""

from __future__ import annotations

from dataclasses import dataclass

from .graphs import FormulaGraph
from .hypotheses import CandidatePool, build_fixture_graph_pool, build_hypothesis_pool
from .lang import Alphabet, Sentence, parse_literal, parse_sentence
from .semantics import FiniteStructure, GroundLit, StructureClass


# ---------------------------------------------------------------------------
# Plant fixture


PLANT_ALPHABET = Alphabet(
    sorts=("comp", "state"),
    constants={"comp": ("F", "P"), "state": ("High", "No")},
    predicates={"Hold": ("comp", "state"), "Open": ("comp",)},
    second_order={"Action": 3, "Cause-Effect": 2},
)

PLANT_RULE_TEXT = (
    "forall X . forall Y . forall Z . (Action(X, Y, Z) -> "
    "((X == Hold(F, No)) & (Y == Open(F)) & (Z == Hold(F, High)) & X & Y & Z))"
)

PLANT_OBSERVATION_TEXT = "Hold(P, High)"


def _gl(pred: str, *args: str, positive: bool = True) -> GroundLit:
    return GroundLit(positive, pred, args)


def plant_structure(
    hold=(("F", "No"), ("F", "High"), ("P", "High")),
    open_=(("F",),),
    action=((_gl("Hold", "F", "No"), _gl("Open", "F"), _gl("Hold", "F", "High")),),
    cause_effect=((_gl("Hold", "F", "High"), _gl("Hold", "P", "High")),),
) -> FiniteStructure:
    return FiniteStructure(
        alphabet=PLANT_ALPHABET,
        domains={"comp": ("F", "P"), "state": ("High", "No")},
        constant_map={
            "comp": {"F": "F", "P": "P"},
            "state": {"High": "High", "No": "No"},
        },
        predicates={
            "Hold": frozenset(hold),
            "Open": frozenset(open_),
        },
        second_order={
            "Action": frozenset(action),
            "Cause-Effect": frozenset(cause_effect),
        },
    )


def plant_candidate_structures() -> list[FiniteStructure]:
    """The running-example structure plus variants; the rule theory keeps
    only those whose Action rows are the sanctioned triple with true args."""
    good = plant_structure()
    bare = plant_structure(action=(), cause_effect=())
    rich = plant_structure(
        hold=(("F", "No"), ("F", "High"), ("P", "High"), ("P", "No")),
        cause_effect=(
            (_gl("Hold", "F", "High"), _gl("Hold", "P", "High")),
            (_gl("Hold", "F", "No"), _gl("Hold", "P", "No")),
        ),
    )
    # Action row present but Hold(F, No) false: violates the rule.
    broken = plant_structure(hold=(("F", "High"), ("P", "High")))
    # Action row with the wrong argument order: violates the rule.
    scrambled = plant_structure(
        action=((_gl("Open", "F"), _gl("Hold", "F", "No"), _gl("Hold", "F", "High")),),
    )
    return [good, bare, rich, broken, scrambled]


def plant_rule() -> Sentence:
    return parse_sentence(PLANT_RULE_TEXT, PLANT_ALPHABET)


def plant_observation() -> Sentence:
    return parse_sentence(PLANT_OBSERVATION_TEXT, PLANT_ALPHABET)


def _plant_lit(text: str):
    return parse_literal(text, PLANT_ALPHABET)


def plant_graphs() -> dict[str, FormulaGraph]:
    hold_f_no = _plant_lit("Hold(F, No)")
    open_f = _plant_lit("Open(F)")
    hold_f_high = _plant_lit("Hold(F, High)")
    hold_p_high = _plant_lit("Hold(P, High)")
    g0 = FormulaGraph(
        [hold_f_no, open_f, hold_f_high, hold_p_high],
        {
            "Action": [(hold_f_no, open_f, hold_f_high)],
            "Cause-Effect": [(hold_f_high, hold_p_high)],
        },
    )
    g1 = FormulaGraph(
        [hold_f_no, open_f, hold_f_high],
        {"Action": [(hold_f_no, open_f, hold_f_high)]},
    )
    g2 = FormulaGraph(
        [hold_f_high, hold_p_high],
        {"Cause-Effect": [(hold_f_high, hold_p_high)]},
    )
    return {"g0": g0, "g1": g1, "g2": g2}


@dataclass(frozen=True)
class PlantFixture:
    alphabet: Alphabet
    cls: StructureClass
    observations: tuple[Sentence, ...]
    graphs: dict[str, FormulaGraph]
    pool: CandidatePool


def plant_fixture() -> PlantFixture:
    from .semantics import class_from_theory

    candidates = StructureClass(tuple(plant_candidate_structures()))
    cls = class_from_theory(candidates, [plant_rule()])
    graphs = plant_graphs()
    obs = (plant_observation(),)
    pool = build_fixture_graph_pool(
        [graphs["g0"], graphs["g1"], graphs["g2"]], obs, cls, PLANT_ALPHABET
    )
    return PlantFixture(PLANT_ALPHABET, cls, obs, graphs, pool)


# ---------------------------------------------------------------------------
# Two-predicate fixture (PropH)


TWO_PRED_ALPHABET = Alphabet(
    sorts=("obj",),
    constants={"obj": ("0",)},
    predicates={"p1": ("obj",), "p2": ("obj",)},
)

TWO_PRED_SENTENCES = (
    "true",
    "p1(0)",
    "p2(0)",
    "p1(0) & p2(0)",
    "p1(0) | p2(0)",
    "!(p1(0) & p2(0))",
    "p1(0) & !p2(0)",
    "!p1(0) & p2(0)",
)


def two_pred_structures() -> list[FiniteStructure]:
    out = []
    for s in ((), ("p1",), ("p2",), ("p1", "p2")):
        out.append(
            FiniteStructure(
                alphabet=TWO_PRED_ALPHABET,
                domains={"obj": ("0",)},
                constant_map={"obj": {"0": "0"}},
                predicates={
                    "p1": frozenset([("0",)] if "p1" in s else []),
                    "p2": frozenset([("0",)] if "p2" in s else []),
                },
            )
        )
    return out


@dataclass(frozen=True)
class TwoPredFixture:
    alphabet: Alphabet
    cls: StructureClass
    sentence_pool: tuple[Sentence, ...]
    pool: CandidatePool


def two_pred_fixture() -> TwoPredFixture:
    cls = StructureClass(tuple(two_pred_structures()))
    sentences = tuple(parse_sentence(t, TWO_PRED_ALPHABET) for t in TWO_PRED_SENTENCES)
    pool = build_hypothesis_pool(
        [[s] for s in sentences], sentences, (), cls, TWO_PRED_ALPHABET
    )
    return TwoPredFixture(TWO_PRED_ALPHABET, cls, sentences, pool)


# ---------------------------------------------------------------------------
# Three-predicate fixture (PropG, no second-order symbols)


THREE_PRED_ALPHABET = Alphabet(
    sorts=("obj",),
    constants={"obj": ("0",)},
    predicates={"p1": ("obj",), "p2": ("obj",), "p3": ("obj",)},
)


def three_pred_structure() -> FiniteStructure:
    return FiniteStructure(
        alphabet=THREE_PRED_ALPHABET,
        domains={"obj": ("0",)},
        constant_map={"obj": {"0": "0"}},
        predicates={
            "p1": frozenset([("0",)]),
            "p2": frozenset([("0",)]),
            "p3": frozenset([("0",)]),
        },
    )


def three_pred_graphs() -> dict[str, FormulaGraph]:
    lit = lambda text: parse_literal(text, THREE_PRED_ALPHABET)
    return {
        "g1": FormulaGraph([lit("p1(0)"), lit("p3(0)")]),
        "g2": FormulaGraph([lit("p2(0)"), lit("p3(0)")]),
        "g3": FormulaGraph([lit("p1(0)")]),
        "g4": FormulaGraph([lit("p2(0)")]),
    }


@dataclass(frozen=True)
class ThreePredFixture:
    alphabet: Alphabet
    cls: StructureClass
    graphs: dict[str, FormulaGraph]
    pool: CandidatePool


def three_pred_fixture() -> ThreePredFixture:
    cls = StructureClass((three_pred_structure(),))
    graphs = three_pred_graphs()
    pool = build_fixture_graph_pool(
        [graphs["g1"], graphs["g2"], graphs["g3"], graphs["g4"]],
        (),
        cls,
        THREE_PRED_ALPHABET,
    )
    return ThreePredFixture(THREE_PRED_ALPHABET, cls, graphs, pool)
