"""JSON wire formats: alphabets, structures, classes, graphs, pools,
session configurations and transcripts.

Every loader accepts either an inline object or a path string relative to
the file being loaded, so fixture files can be split or bundled freely.

Formats
-------
Alphabet        {"sorts": [..], "constants": {sort: [name, ..]},
                 "predicates": [{"name": .., "argSorts": [..]}],
                 "secondOrder": [{"name": .., "arity": n}]}
Structure       {"domains": {sort: [element, ..]},
                 "constants": {sort: {constant: element}},
                 "predicates": {name: [[element, ..], ..]},
                 "secondOrder": {name: [[signedLiteral, ..], ..]}}
Signed literal  {"neg": bool, "pred": name, "args": [element, ..]}
Class           [structure-or-path, ..]
Graph           {"vertices": [literal string, ..],
                 "edges": {relation: [[literal string, ..], ..]}}
Session config  {"fixture": name} or
                {"alphabet": .., "structures": [..], "theory": [..],
                 "observations": [..],
                 "pool": {"mode": "graphs"|"hypotheses", "items": [..],
                          "sentencePool": [..], "maxOrder": n},
                 "protocol": kind, "propertyMode": "PropG"|"PropH",
                 "bound": n, "target": [item index or key, ..],
                 "presentationCap": n}
Transcript      {"config": session config, "turns": [{"role": .., "payload": ..}],
                 "terminal": {"status": .., "reason": ..}}
"""

from __future__ import annotations

import json
import os
from typing import Any, Optional

from .dialogue import (
    Feedback,
    FeedbackSet,
    Move,
    Presentation,
    ProtocolConfig,
    Transcript,
)
from .fixtures import plant_fixture, three_pred_fixture, two_pred_fixture
from .graphs import FormulaGraph
from .hypotheses import (
    CandidatePool,
    PropertyG,
    build_fixture_graph_pool,
    build_graph_pool,
    build_hypothesis_pool,
)
from .lang import Alphabet, parse_literal, parse_sentence, serialize, serialize_literal
from .semantics import (
    FiniteStructure,
    GroundLit,
    StructureClass,
    class_from_theory,
)


class FileFormatError(Exception):
    pass


def _resolve(obj_or_path: Any, base_dir: Optional[str]):
    if isinstance(obj_or_path, str):
        path = obj_or_path
        if base_dir is not None and not os.path.isabs(path):
            path = os.path.join(base_dir, path)
        with open(path) as fh:
            return json.load(fh), os.path.dirname(path)
    return obj_or_path, base_dir


# ---------------------------------------------------------------------------
# Alphabet


def alphabet_to_json(alphabet: Alphabet) -> dict:
    return {
        "sorts": list(alphabet.sorts),
        "constants": {s: list(ns) for s, ns in alphabet.constants.items()},
        "predicates": [
            {"name": p, "argSorts": list(ss)} for p, ss in alphabet.predicates.items()
        ],
        "secondOrder": [
            {"name": r, "arity": a} for r, a in alphabet.second_order.items()
        ],
    }


def alphabet_from_json(payload: Any, base_dir: Optional[str] = None) -> Alphabet:
    payload, _ = _resolve(payload, base_dir)
    try:
        return Alphabet(
            sorts=tuple(payload["sorts"]),
            constants={s: tuple(ns) for s, ns in payload.get("constants", {}).items()},
            predicates={
                p["name"]: tuple(p["argSorts"]) for p in payload["predicates"]
            },
            second_order={
                r["name"]: int(r["arity"]) for r in payload.get("secondOrder", [])
            },
        )
    except (KeyError, TypeError) as exc:
        raise FileFormatError(f"bad alphabet payload: {exc}") from exc


# ---------------------------------------------------------------------------
# Structures and classes


def _ground_literal_to_json(gl: GroundLit) -> dict:
    return {"neg": not gl.positive, "pred": gl.pred, "args": list(gl.args)}


def _ground_literal_from_json(payload: dict) -> GroundLit:
    return GroundLit(
        positive=not payload.get("neg", False),
        pred=payload["pred"],
        args=tuple(payload["args"]),
    )


def structure_to_json(m: FiniteStructure) -> dict:
    return {
        "domains": {s: list(es) for s, es in m.domains.items()},
        "constants": {s: dict(cm) for s, cm in m.constant_map.items()},
        "predicates": {
            p: sorted(list(row) for row in rows) for p, rows in m.predicates.items()
        },
        "secondOrder": {
            r: [[_ground_literal_to_json(gl) for gl in row] for row in sorted(rows)]
            for r, rows in m.second_order.items()
        },
    }


def structure_from_json(
    payload: Any, alphabet: Alphabet, base_dir: Optional[str] = None
) -> FiniteStructure:
    payload, _ = _resolve(payload, base_dir)
    try:
        return FiniteStructure(
            alphabet=alphabet,
            domains={s: tuple(es) for s, es in payload["domains"].items()},
            constant_map={s: dict(cm) for s, cm in payload["constants"].items()},
            predicates={
                p: frozenset(tuple(row) for row in rows)
                for p, rows in payload.get("predicates", {}).items()
            },
            second_order={
                r: frozenset(
                    tuple(_ground_literal_from_json(gl) for gl in row) for row in rows
                )
                for r, rows in payload.get("secondOrder", {}).items()
            },
        )
    except (KeyError, TypeError) as exc:
        raise FileFormatError(f"bad structure payload: {exc}") from exc


def structure_class_from_json(
    payload: Any, alphabet: Alphabet, base_dir: Optional[str] = None
) -> StructureClass:
    payload, base_dir = _resolve(payload, base_dir)
    if not isinstance(payload, list):
        raise FileFormatError("a class file is a JSON list of structures or paths")
    members = tuple(structure_from_json(p, alphabet, base_dir) for p in payload)
    return StructureClass(members)


# ---------------------------------------------------------------------------
# Graphs


def graph_to_json(g: FormulaGraph) -> dict:
    return {
        "vertices": [serialize_literal(v) for v in g.sorted_vertices],
        "edges": {
            rel: sorted([serialize_literal(l) for l in row] for row in rows)
            for rel, rows in g.edges
        },
    }


def graph_from_json(
    payload: Any, alphabet: Alphabet, base_dir: Optional[str] = None
) -> FormulaGraph:
    payload, _ = _resolve(payload, base_dir)
    try:
        vertex_by_text = {
            text: parse_literal(text, alphabet) for text in payload["vertices"]
        }
        edges = {
            rel: [tuple(vertex_by_text[t] for t in row) for row in rows]
            for rel, rows in payload.get("edges", {}).items()
        }
    except KeyError as exc:
        raise FileFormatError(
            f"graph edge references a literal outside 'vertices': {exc}"
        ) from exc
    return FormulaGraph(vertex_by_text.values(), edges)


# ---------------------------------------------------------------------------
# Session configuration -> ProtocolConfig


FIXTURES = {
    "plant": plant_fixture,
    "two-pred": two_pred_fixture,
    "three-pred": three_pred_fixture,
}


def _fixture_session(name: str) -> dict:
    if name not in FIXTURES:
        raise FileFormatError(f"unknown fixture {name!r}; have {sorted(FIXTURES)}")
    fx = FIXTURES[name]()
    if name == "plant":
        return {
            "alphabet": fx.alphabet,
            "cls": fx.cls,
            "pool": fx.pool,
            "protocol": "Basic",
            "propertyMode": "PropG",
        }
    if name == "two-pred":
        return {
            "alphabet": fx.alphabet,
            "cls": fx.cls,
            "pool": fx.pool,
            "protocol": "Basic",
            "propertyMode": "PropH",
        }
    return {
        "alphabet": fx.alphabet,
        "cls": fx.cls,
        "pool": fx.pool,
        "protocol": "Basic",
        "propertyMode": "PropG",
    }


def build_pool(payload: dict, alphabet, cls, observations, base_dir) -> CandidatePool:
    mode = payload.get("mode", "graphs")
    if mode == "graphs":
        if "items" in payload:
            graphs = [graph_from_json(p, alphabet, base_dir) for p in payload["items"]]
            return build_fixture_graph_pool(graphs, observations, cls, alphabet)
        max_order = int(payload.get("maxOrder", 1))
        return build_graph_pool(
            observations,
            cls,
            max_order,
            alphabet,
            include_equalities=bool(payload.get("includeEqualities", False)),
            class_ceiling=int(payload.get("classCeiling", 20000)),
        )
    if mode == "hypotheses":
        sentence_pool = [
            parse_sentence(t, alphabet) for t in payload.get("sentencePool", [])
        ]
        hyps = [
            [parse_sentence(t, alphabet) for t in group] for group in payload["items"]
        ]
        return build_hypothesis_pool(hyps, sentence_pool, observations, cls, alphabet)
    raise FileFormatError(f"unknown pool mode {mode!r}")


def session_config(
    payload: Any,
    base_dir: Optional[str] = None,
    enforce_towards: bool = True,
    overrides: Optional[dict] = None,
) -> ProtocolConfig:
    """Turn a session-config payload (or a path to one) into a runnable
    protocol configuration."""
    payload, base_dir = _resolve(payload, base_dir)
    payload = dict(payload)
    payload.update(overrides or {})

    if "fixture" in payload:
        parts = _fixture_session(payload["fixture"])
        alphabet, cls, pool = parts["alphabet"], parts["cls"], parts["pool"]
        kind = payload.get("protocol", parts["protocol"])
        mode = payload.get("propertyMode", parts["propertyMode"])
    else:
        alphabet = alphabet_from_json(payload["alphabet"], base_dir)
        cls = structure_class_from_json(payload["structures"], alphabet, base_dir)
        if payload.get("theory"):
            theory = [parse_sentence(t, alphabet) for t in payload["theory"]]
            cls = class_from_theory(cls, theory)
        observations = tuple(
            parse_sentence(t, alphabet) for t in payload.get("observations", [])
        )
        pool = build_pool(payload.get("pool", {}), alphabet, cls, observations, base_dir)
        kind = payload.get("protocol", "Basic")
        mode = payload.get("propertyMode", "PropG")

    target = payload.get("target")
    if target is not None:
        target = tuple(_resolve_target_entry(t, pool) for t in target)

    kwargs = dict(
        kind=kind,
        property_mode=mode,
        pool=pool,
        target=target,
        enforce_towards=enforce_towards,
    )
    if payload.get("bound") is not None:
        kwargs["size_bound"] = int(payload["bound"])
    if payload.get("presentationCap") is not None:
        kwargs["presentation_cap"] = int(payload["presentationCap"])
    return ProtocolConfig(**kwargs)


def _resolve_target_entry(entry: Any, pool: CandidatePool) -> str:
    if isinstance(entry, int):
        items = pool.sorted_items()
        if not 0 <= entry < len(items):
            raise FileFormatError(f"target index {entry} out of range")
        return items[entry].key
    if isinstance(entry, str):
        if pool.has_item(entry):
            return entry
        raise FileFormatError(f"target key {entry!r} is not a pool item")
    raise FileFormatError(f"target entries are indices or item keys, got {entry!r}")


def config_to_json(cfg: ProtocolConfig, source: Optional[dict] = None) -> dict:
    out = {
        "protocol": cfg.kind,
        "propertyMode": cfg.property_mode,
        "bound": cfg.size_bound,
        "target": list(cfg.target) if cfg.target else None,
        "towardsEnforced": cfg.enforce_towards,
        "presentationCap": cfg.presentation_cap,
        "poolItems": [item.key for item in cfg.pool.sorted_items()],
    }
    if source is not None:
        out["source"] = source
    return out


# ---------------------------------------------------------------------------
# Properties, moves, transcripts


def property_to_json(p) -> dict:
    if isinstance(p, PropertyG):
        return {
            "key": p.key,
            "kind": "graph-class",
            "order": p.order,
            "representative": graph_to_json(p.representative),
        }
    return {
        "key": p.key,
        "kind": "sentence-class",
        "truthSet": list(p.truth_set),
        "representative": serialize(p.representative),
    }


def item_to_json(item, pool: CandidatePool) -> dict:
    if pool.mode == "graphs":
        body = {"graph": graph_to_json(item.value)}
    else:
        body = {"sentences": sorted(serialize(s) for s in item.value)}
    return {"key": item.key, **body}


def move_to_json(move: Move, pool: CandidatePool) -> dict:
    if isinstance(move, Presentation):
        return {
            "role": "reasoner",
            "payload": {
                "type": "presentation",
                "items": [item_to_json(pool.item(k), pool) for k in sorted(move.items)],
            },
        }
    return {
        "role": "user",
        "payload": {
            "type": "feedback",
            "feedback": [
                {
                    "propertyKey": fb.prop.key,
                    "polarity": fb.polarity,
                    "representative": property_to_json(fb.prop),
                }
                for fb in sorted(move.feedbacks, key=Feedback.sort_key)
            ],
        },
    }


def move_from_json(payload: dict, pool: CandidatePool) -> Move:
    body = payload["payload"]
    if body["type"] == "presentation":
        return Presentation(frozenset(item["key"] for item in body["items"]))
    feedbacks = frozenset(
        Feedback(pool.property_by_key(fb["propertyKey"]), fb["polarity"])
        for fb in body["feedback"]
    )
    return FeedbackSet(feedbacks)


def transcript_to_json(
    transcript: Transcript, source: Optional[dict] = None
) -> dict:
    pool = transcript.cfg.pool
    return {
        "config": config_to_json(transcript.cfg, source),
        "turns": [move_to_json(m, pool) for m in transcript.moves],
        "terminal": {"status": transcript.status, "reason": transcript.reason},
    }


def transcript_moves_from_json(payload: dict, pool: CandidatePool) -> tuple[Move, ...]:
    return tuple(move_from_json(turn, pool) for turn in payload["turns"])
