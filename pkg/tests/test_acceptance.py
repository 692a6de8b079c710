"""Acceptance suite: one test per primary criterion, each printing a
pass/fail line (run with ``pytest tests/test_acceptance.py -s`` to see them).
"""

import dataclasses
import io
import itertools
import json
import random
import time
from contextlib import redirect_stdout

import pytest

from abdukit.cli import main as cli_main
from abdukit.dialogue import (
    FeedbackSet,
    Presentation,
    ProtocolConfig,
    run_dialogue,
    validate_transcript,
)
from abdukit.fixtures import three_pred_fixture, two_pred_fixture
from abdukit.graphs import (
    FormulaGraph,
    canonical_key,
    can_embed,
    enumerate_graphs,
    find_embedding,
    is_isomorphic,
    sent_of,
)
from abdukit.harness import (
    FAMILY_IDS,
    NON_CONVERGENCE_IDS,
    counterexample_prefix,
    default_fuel,
    exhaustive_dialogues,
    random_walk,
    reproduce_non_convergence,
    verify_convergence,
    verify_halting,
)
from abdukit.lang import Alphabet, Const, EqAtom, Literal, PredAtom, Var
from abdukit.semantics import (
    FiniteStructure,
    GroundLit,
    StructureClass,
    logically_implies,
)


def report(name: str, detail: str = ""):
    print(f"ACCEPTANCE PASS: {name}" + (f" ({detail})" if detail else ""))


# ---------------------------------------------------------------------------
# Random generators shared by the first two criteria


PLANTISH = Alphabet(
    sorts=("s0", "s1"),
    constants={"s0": ("a", "b"), "s1": ("c",)},
    predicates={"q1": ("s0", "s1"), "q2": ("s0",)},
    second_order={"Rel": 2},
)

_TERMS0 = [Const("a", "s0"), Const("b", "s0"), Var("x", "s0"), Var("y", "s0")]
_TERMS1 = [Const("c", "s1"), Var("u", "s1"), Var("v", "s1")]


def random_literal(rng) -> Literal:
    roll = rng.random()
    if roll < 0.45:
        atom = PredAtom("q1", (rng.choice(_TERMS0), rng.choice(_TERMS1)))
    elif roll < 0.8:
        atom = PredAtom("q2", (rng.choice(_TERMS0),))
    else:
        atom = EqAtom(rng.choice(_TERMS0), rng.choice(_TERMS0))
    return Literal(atom, rng.random() < 0.75)


def random_graph(rng, max_order=3) -> FormulaGraph:
    order = rng.randint(0, max_order)
    vertices = set()
    attempts = 0
    while len(vertices) < order and attempts < 40:
        vertices.add(random_literal(rng))
        attempts += 1
    verts = sorted(vertices, key=str)
    pred_verts = [v for v in verts if not v.is_equality]
    edges = {}
    if pred_verts:
        rows = [
            (rng.choice(pred_verts), rng.choice(pred_verts))
            for _ in range(rng.randint(0, 2))
        ]
        if rows:
            edges["Rel"] = rows
    return FormulaGraph(verts, edges)


def renamed_subgraph(rng, h: FormulaGraph) -> FormulaGraph:
    """Planted embeddable graph: subgraph of h with variables renamed."""
    verts = list(h.sorted_vertices)
    keep = [v for v in verts if rng.random() < 0.7]
    kept = set(keep)
    edges = {
        rel: [row for row in rows if all(l in kept for l in row) and rng.random() < 0.8]
        for rel, rows in h.edges
    }
    sub = FormulaGraph(kept, {r: rs for r, rs in edges.items() if rs})
    rename = {
        Var("x", "s0"): Var("w1", "s0"),
        Var("y", "s0"): Var("w2", "s0"),
        Var("u", "s1"): Var("w3", "s1"),
        Var("v", "s1"): Var("w4", "s1"),
    }

    def rn_term(t):
        return rename.get(t, t)

    def rn_lit(l):
        if isinstance(l.atom, PredAtom):
            return Literal(PredAtom(l.atom.pred, tuple(map(rn_term, l.atom.args))), l.positive)
        return Literal(EqAtom(rn_term(l.atom.lhs), rn_term(l.atom.rhs)), l.positive)

    return FormulaGraph(
        [rn_lit(v) for v in sub.vertices],
        {rel: [tuple(map(rn_lit, row)) for row in rows] for rel, rows in sub.edges},
    )


def random_class(rng) -> StructureClass:
    dom0 = tuple(f"e{i}" for i in range(rng.randint(1, 3)))
    dom1 = tuple(f"f{i}" for i in range(rng.randint(1, 3)))
    constants = {
        "s0": {"a": rng.choice(dom0), "b": rng.choice(dom0)},
        "s1": {"c": rng.choice(dom1)},
    }
    q1_rows = list(itertools.product(dom0, dom1))
    q2_rows = [(e,) for e in dom0]
    structures = []
    for _ in range(rng.randint(1, 4)):
        preds = {
            "q1": frozenset(r for r in q1_rows if rng.random() < 0.5),
            "q2": frozenset(r for r in q2_rows if rng.random() < 0.5),
        }
        universe = [
            GroundLit(pos, "q1", r) for r in q1_rows for pos in (True, False)
        ] + [GroundLit(pos, "q2", r) for r in q2_rows for pos in (True, False)]
        rel_rows = frozenset(
            (rng.choice(universe), rng.choice(universe))
            for _ in range(rng.randint(0, 4))
        )
        structures.append(
            FiniteStructure(
                alphabet=PLANTISH,
                domains={"s0": dom0, "s1": dom1},
                constant_map=constants,
                predicates=preds,
                second_order={"Rel": rel_rows},
            )
        )
    return StructureClass(tuple(structures))


# ---------------------------------------------------------------------------
# Criteria


def test_embedding_implies_implication():
    rng = random.Random(17041)
    start = time.perf_counter()
    hits = 0
    for trial in range(200):
        h = random_graph(rng)
        g = renamed_subgraph(rng, h) if trial % 2 == 0 else random_graph(rng)
        cls = random_class(rng)
        witness = find_embedding(g, h)
        if witness is None:
            continue
        hits += 1
        image = witness.apply(g)
        assert image.vertices <= h.vertices
        assert logically_implies(
            [sent_of(h, PLANTISH)], [sent_of(g, PLANTISH)], cls
        ), f"embedding without implication at trial {trial}"
    elapsed = time.perf_counter() - start
    assert hits >= 60, f"only {hits} embeddings found; test too vacuous"
    assert elapsed < 60.0
    report("embedding implies implication", f"{hits}/200 embeddings, {elapsed:.1f}s")


def test_mutual_embedding_iff_isomorphism():
    rng = random.Random(90125)
    agreements = 0
    for trial in range(200):
        g = random_graph(rng)
        if trial % 2 == 0:
            h = renamed_subgraph(rng, g)
            if rng.random() < 0.7:  # make it the whole graph, renamed
                h = renamed_subgraph(rng, g) if h.order != g.order else h
        else:
            h = random_graph(rng)
        mutual = can_embed(g, h) and can_embed(h, g)
        same_key = canonical_key(g) == canonical_key(h)
        assert mutual == same_key, f"disagreement at trial {trial}: {g} vs {h}"
        agreements += 1
    report("mutual embedding iff isomorphism", "200/200 pairs agree with canonical keys")


MONO = Alphabet(
    sorts=("obj",),
    constants={"obj": ("0",)},
    predicates={"p": ("obj",)},
    second_order={"R": 2},
)


def _oracle_exact_order_count(order: int) -> int:
    """Independent oracle: group all bounded-pool graphs of the order by
    mutual embeddability."""
    zero = Const("0", "obj")
    terms = [zero] + [Var(f"z{i}", "obj") for i in range(order)]
    literals = sorted(
        {Literal(PredAtom("p", (t,)), pos) for t in terms for pos in (True, False)},
        key=str,
    )
    classes: list[FormulaGraph] = []
    for vs in itertools.combinations(literals, order):
        rows = list(itertools.product(vs, repeat=2))
        for n in range(len(rows) + 1):
            for edge_rows in itertools.combinations(rows, n):
                g = FormulaGraph(vs, {"R": edge_rows} if edge_rows else {})
                if not any(
                    can_embed(g, rep) and can_embed(rep, g) for rep in classes
                ):
                    classes.append(g)
    return len(classes)


def test_enumeration_correctness():
    start = time.perf_counter()
    order1 = enumerate_graphs(MONO, 1)
    assert len(order1) == 8, f"order-1 classes: {len(order1)}"
    order2 = enumerate_graphs(MONO, 2)
    oracle = _oracle_exact_order_count(2)
    assert len(order2) == oracle, f"order-2: {len(order2)} vs oracle {oracle}"
    elapsed = time.perf_counter() - start
    assert elapsed < 10.0
    report("enumeration correctness", f"8 classes at order 1, {oracle} at order 2, {elapsed:.1f}s")


def test_halting_basic_proph():
    fx = two_pred_fixture()
    cfg = ProtocolConfig(kind="Basic", property_mode="PropH", pool=fx.pool)
    universe = len(cfg.pool.property_universe)
    assert universe == 8
    result = exhaustive_dialogues(cfg, fuel=universe + 2)
    assert result.halted, "fuel-exhausted branches found"
    for leaf in result.leaves:
        feedback_rounds = sum(
            1 for m in leaf.moves if isinstance(m, FeedbackSet) and m.feedbacks
        )
        assert feedback_rounds <= universe
    assert result.max_rounds <= universe + 1
    report(
        "halting for Basic on sentence properties",
        f"{len(result.leaves)} terminal states, max {result.max_rounds} rounds",
    )


def test_halting_propg_bounded():
    fx = three_pred_fixture()
    for kind in ("Basic", "Simple"):
        cfg = ProtocolConfig(
            kind=kind, property_mode="PropG", pool=fx.pool, size_bound=2
        )
        rep = verify_halting(cfg)
        assert rep.passed, rep.failures
    report("halting for Basic and Simple on graph properties with bound 2")


def test_basic_convergence_all_targets():
    fx = three_pred_fixture()
    for bound in (None, 3):
        cfg = ProtocolConfig(
            kind="Basic", property_mode="PropG", pool=fx.pool, size_bound=bound
        )
        rep = verify_convergence(cfg)
        assert rep.passed, rep.failures
        assert rep.notes[0] == "15 target sets"
    report("Basic convergence towards every non-empty target subset",
           "15 targets, unbounded and bound 3")


def test_simple_single_target_convergence():
    fx_h = two_pred_fixture()
    cfg_h = ProtocolConfig(kind="Simple", property_mode="PropH", pool=fx_h.pool)
    checked = 0
    for item in cfg_h.pool.sorted_items():
        towards = dataclasses.replace(cfg_h, target=(item.key,))
        result = exhaustive_dialogues(towards, default_fuel(cfg_h))
        assert result.halted
        assert result.leaves
        for leaf in result.leaves:
            last = leaf.moves[-1]
            assert isinstance(last, Presentation)
            assert last.items == frozenset({item.key}), (
                f"leaf not the equivalence-class singleton of the target {item.key}"
            )
            checked += 1

    fx_g = three_pred_fixture()
    cfg_g = ProtocolConfig(
        kind="Simple", property_mode="PropG", pool=fx_g.pool, size_bound=3
    )
    for item in cfg_g.pool.sorted_items():
        towards = dataclasses.replace(cfg_g, target=(item.key,))
        result = exhaustive_dialogues(towards, default_fuel(cfg_g))
        assert result.halted
        assert result.leaves
        for leaf in result.leaves:
            last = leaf.moves[-1]
            assert isinstance(last, Presentation)
            assert last.items == frozenset({item.key})
            checked += 1
    report("Simple single-target convergence",
           f"{checked} maximal leaves end in the target's class singleton")


def test_no_neutral_towards_singletons():
    scanned = 0
    fx_g = three_pred_fixture()
    fx_h = two_pred_fixture()
    configs = [
        ProtocolConfig(kind=k, property_mode="PropG", pool=fx_g.pool,
                       size_bound=b, target=(item.key,))
        for item in fx_g.pool.sorted_items()
        for k, b in (("Basic", None), ("Basic", 3), ("Simple", 3))
    ] + [
        ProtocolConfig(kind=k, property_mode="PropH", pool=fx_h.pool,
                       target=(item.key,))
        for item in fx_h.pool.sorted_items()
        for k in ("Basic", "Simple")
    ]
    for cfg in configs:
        transcript = run_dialogue(cfg, fuel=default_fuel(cfg) + 2)
        result = exhaustive_dialogues(cfg, default_fuel(cfg) + 2)
        for moves in [transcript.moves] + [leaf.moves for leaf in result.leaves]:
            for move in moves:
                if isinstance(move, FeedbackSet):
                    for fb in move.feedbacks:
                        assert fb.polarity != "neutral"
                        scanned += 1
    report("no neutral feedback towards singleton targets",
           f"{scanned} feedbacks scanned")


def test_simple_transcripts_revalidate_as_basic_and_ufbd():
    fx_g = three_pred_fixture()
    fx_h = two_pred_fixture()
    base_cfgs = [
        ProtocolConfig(kind="Simple", property_mode="PropG", pool=fx_g.pool),
        ProtocolConfig(kind="Simple", property_mode="PropG", pool=fx_g.pool,
                       size_bound=2),
        ProtocolConfig(kind="Simple", property_mode="PropH", pool=fx_h.pool),
    ]
    targeted = [
        dataclasses.replace(base_cfgs[0], target=(item.key,))
        for item in fx_g.pool.sorted_items()
    ] + [
        dataclasses.replace(base_cfgs[2], target=(item.key,))
        for item in fx_h.pool.sorted_items()
    ]
    transcripts = []
    seed = 0
    pools = base_cfgs + targeted
    while len(transcripts) < 500:
        cfg = pools[seed % len(pools)]
        transcripts.append((cfg, random_walk(cfg, fuel=default_fuel(cfg) + 2,
                                             rng=random.Random(seed))))
        seed += 1
    for cfg, transcript in transcripts:
        assert validate_transcript(transcript.moves, cfg).ok, "not Simple-valid"
        for kind in ("Basic", "UFBD"):
            relaxed = dataclasses.replace(cfg, kind=kind)
            assert validate_transcript(transcript.moves, relaxed).ok, (
                f"Simple transcript fails under {kind}"
            )
    report("Simple transcripts revalidate under Basic and UFBD",
           f"{len(transcripts)} transcripts")


def test_counterexamples_reproduce():
    for example_id in NON_CONVERGENCE_IDS:
        rep = reproduce_non_convergence(example_id)
        assert rep.passed, (example_id, rep.failures)
    for family in FAMILY_IDS:
        prefix = counterexample_prefix(family, 20)
        assert prefix.turns == 20
    report("counterexamples reproduce",
           "4 non-convergence examples, 4 infinite families at length 20")


def test_golden_walkthrough_transcript(tmp_path):
    argv = [
        "simulate",
        "--config", "fixtures/plant_session.json",
        "--style", "illustrative",
        "--max-moves", "3",
    ]
    buffer = io.StringIO()
    with redirect_stdout(buffer):
        code = cli_main(argv)
    assert code == 0
    produced = buffer.getvalue().strip()
    with open("fixtures/golden/plant_walkthrough.json") as fh:
        golden = fh.read().strip()
    assert produced == golden, "simulate output drifted from the golden transcript"

    payload = json.loads(produced)
    turns = payload["turns"]
    assert [t["role"] for t in turns] == ["reasoner", "user", "reasoner"]
    first, feedback, second = turns
    first_orders = sorted(
        len(item["graph"]["vertices"]) for item in first["payload"]["items"]
    )
    assert first_orders == [2, 3]  # the two strict subgraphs
    fbs = feedback["payload"]["feedback"]
    assert {fb["polarity"] for fb in fbs} == {"pos"}
    assert sorted(fb["representative"]["order"] for fb in fbs) == [2, 3]
    final_items = second["payload"]["items"]
    assert len(final_items) == 1
    assert len(final_items[0]["graph"]["vertices"]) == 4  # the whole graph
    report("golden walkthrough transcript reproduced bit-exactly")
