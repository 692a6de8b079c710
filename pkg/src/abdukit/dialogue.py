"""User-feedback dialogue engine: validation, generation, convergence.

A dialogue alternates presentation sets (pool item keys) and feedback sets
(property, polarity pairs).  Five protocol kinds are supported; each is a
combination of conditions on presentations and on feedbacks:

===============  ==========================  =========================
kind             presentation conditions      feedback conditions
===============  ==========================  =========================
UFBD             UFBD 1-2                     none
Basic            UFBD + Basic 1(a)-1(b)       Basic 2(a)-2(d)
Simple           UFBD + Simple 1(a)-1(c)      Simple 2(a)-2(e)
SimpleX-BasicF   UFBD + Simple 1(a)-1(c)      Basic 2(a)-2(d)
BasicX-SimpleF   UFBD + Basic 1(a)-1(b)       Simple 2(a)-2(e)
===============  ==========================  =========================

Validators cite violated conditions by those identifiers.  An optional
size bound restricts feedback sets on graph properties (every non-empty
set must point at least one class of order <= n), and a target set fixes
feedback polarities for the simulated user: pos when every target has the
property, neg when none does, neutral otherwise.

The state is immutable; ``step`` returns a new state, so exhaustive tree
search can branch on snapshots freely.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Optional, Sequence, Union

from .graphs import FormulaGraph, canonical_key
from .hypotheses import (
    CandidatePool,
    PoolError,
    PoolItem,
    Property,
    PropertyG,
    prop_id,
)

POLARITIES = ("pos", "neg", "neutral")

KINDS = ("UFBD", "Basic", "Simple", "SimpleX-BasicF", "BasicX-SimpleF")

_BASIC_X = {"Basic", "BasicX-SimpleF"}
_SIMPLE_X = {"Simple", "SimpleX-BasicF"}
_BASIC_F = {"Basic", "SimpleX-BasicF"}
_SIMPLE_F = {"Simple", "BasicX-SimpleF"}


class DialogueError(Exception):
    """Out-of-protocol usage (wrong turn, unknown item); not a mere
    condition violation."""


@dataclass(frozen=True)
class Feedback:
    prop: Property
    polarity: str

    def __post_init__(self):
        if self.polarity not in POLARITIES:
            raise DialogueError(f"unknown polarity {self.polarity!r}")

    def sort_key(self):
        return (prop_id(self.prop), self.polarity)


@dataclass(frozen=True)
class Presentation:
    items: frozenset[str]


@dataclass(frozen=True)
class FeedbackSet:
    feedbacks: frozenset[Feedback]


Move = Union[Presentation, FeedbackSet]


@dataclass(frozen=True)
class ProtocolConfig:
    kind: str
    property_mode: str  # 'PropG' | 'PropH'
    pool: CandidatePool
    size_bound: Optional[int] = None
    target: Optional[tuple[str, ...]] = None
    enforce_towards: bool = True
    presentation_cap: int = 2

    def __post_init__(self):
        if self.kind not in KINDS:
            raise DialogueError(f"unknown protocol kind {self.kind!r}")
        if self.property_mode not in ("PropG", "PropH"):
            raise DialogueError(f"unknown property mode {self.property_mode!r}")
        expected = "graphs" if self.property_mode == "PropG" else "hypotheses"
        if self.pool.mode != expected:
            raise DialogueError(
                f"property mode {self.property_mode} needs a {expected} pool"
            )
        if self.size_bound is not None and self.property_mode != "PropG":
            raise DialogueError("the size bound is defined for graph dialogues only")
        if self.target is not None:
            if not self.target:
                raise DialogueError("target set must be non-empty")
            for key in self.target:
                if not self.pool.has_item(key):
                    raise DialogueError(f"target {key!r} is not a pool item")

    def target_items(self) -> tuple[PoolItem, ...]:
        return tuple(self.pool.item(k) for k in self.target or ())


@dataclass(frozen=True)
class DialogueState:
    moves: tuple[Move, ...] = ()

    @property
    def expects_presentation(self) -> bool:
        return len(self.moves) % 2 == 0

    @property
    def last_presentation(self) -> Optional[frozenset[str]]:
        for move in reversed(self.moves):
            if isinstance(move, Presentation):
                return move.items
        return None

    @cached_property
    def pointed(self) -> dict[tuple, list[str]]:
        """Property id -> polarities pointed so far, in move order."""
        out: dict[tuple, list[str]] = {}
        for move in self.moves:
            if isinstance(move, FeedbackSet):
                for fb in sorted(move.feedbacks, key=Feedback.sort_key):
                    out.setdefault(prop_id(fb.prop), []).append(fb.polarity)
        return out

    def is_pointed(self, p: Property) -> bool:
        return prop_id(p) in self.pointed


@dataclass(frozen=True)
class Verdict:
    ok: bool
    violations: tuple[str, ...] = ()

    def __bool__(self):
        return self.ok


# ---------------------------------------------------------------------------
# Elementary checks


def satisfies_feedbacks(item: PoolItem, state: DialogueState) -> bool:
    """Condition UFBD 1 for one candidate: positive pointed properties are
    present, negative ones absent; neutral imposes nothing."""
    ids = item.prop_ids
    for pid, polarities in state.pointed.items():
        if "pos" in polarities and pid not in ids:
            return False
        if "neg" in polarities and pid in ids:
            return False
    return True


def fresh_properties(item: PoolItem, state: DialogueState) -> list[Property]:
    return sorted(p for p in item.properties if not state.is_pointed(p))


def _satisfying_items(state: DialogueState, cfg: ProtocolConfig) -> list[PoolItem]:
    return [it for it in cfg.pool.sorted_items() if satisfies_feedbacks(it, state)]


def appearing_properties(
    state: DialogueState, cfg: ProtocolConfig
) -> list[Property]:
    """Properties of at least one candidate in the pending presentation."""
    keys = state.last_presentation or frozenset()
    seen: dict[tuple, Property] = {}
    for key in keys:
        for p in cfg.pool.item(key).properties:
            seen.setdefault(prop_id(p), p)
    return [seen[k] for k in sorted(seen)]


def towards_polarity(p: Property, cfg: ProtocolConfig) -> str:
    targets = cfg.target_items()
    pid = prop_id(p)
    membership = [pid in {prop_id(q) for q in t.properties} for t in targets]
    if all(membership):
        return "pos"
    if not any(membership):
        return "neg"
    return "neutral"


def closing_condition(state: DialogueState, cfg: ProtocolConfig) -> Optional[str]:
    """Condition that makes the current last set terminal, if any."""
    if not state.moves:
        return None
    last = state.moves[-1]
    if isinstance(last, Presentation):
        if cfg.kind in _SIMPLE_X and len(last.items) <= 1:
            return "Simple 1(c)"
        if cfg.kind in _BASIC_X:
            # Freshness is judged at presentation time; when the last move is
            # a presentation, the pointed ledger has exactly the feedbacks
            # that preceded it.
            items = [cfg.pool.item(k) for k in last.items]
            if not any(fresh_properties(it, state) for it in items):
                return "Basic 1(b)"
        return None
    if not last.feedbacks:
        if cfg.kind in _BASIC_F:
            return "Basic 2(d)"
        if cfg.kind in _SIMPLE_F:
            return "Simple 2(e)"
    return None


# ---------------------------------------------------------------------------
# Validation


def validate_presentation(
    state: DialogueState, keys: Iterable[str], cfg: ProtocolConfig
) -> Verdict:
    if not state.expects_presentation:
        raise DialogueError("a feedback set is expected, not a presentation")
    keys = frozenset(keys)
    items = []
    for key in keys:
        items.append(cfg.pool.item(key))  # raises PoolError for unknown items

    violations: list[str] = []
    closing = closing_condition(state, cfg)
    if closing:
        violations.append(closing)

    if any(not satisfies_feedbacks(it, state) for it in items):
        violations.append("UFBD 1")
    satisfying = _satisfying_items(state, cfg)
    if not keys and satisfying:
        violations.append("UFBD 2")

    if cfg.kind in _BASIC_X:
        fresh_possible = any(fresh_properties(it, state) for it in satisfying)
        fresh_presented = any(fresh_properties(it, state) for it in items)
        if fresh_possible and not fresh_presented:
            violations.append("Basic 1(a)")
    if cfg.kind in _SIMPLE_X:
        for a, b in itertools.combinations(sorted(items, key=lambda it: it.key), 2):
            if a.properties == b.properties:
                violations.append("Simple 1(a)")
                break
        distinct_available = _distinct_prop_pair_exists(satisfying)
        if distinct_available and len(items) < 2:
            violations.append("Simple 1(b)")

    return Verdict(not violations, tuple(violations))


def _distinct_prop_pair_exists(items: Sequence[PoolItem]) -> bool:
    seen: set[frozenset] = set()
    for it in items:
        ids = frozenset(prop_id(p) for p in it.properties)
        if seen and any(ids != other for other in seen):
            return True
        seen.add(ids)
    return False


def validate_feedback(
    state: DialogueState, feedbacks: Iterable[Feedback], cfg: ProtocolConfig
) -> Verdict:
    if state.expects_presentation:
        raise DialogueError("a presentation is expected, not feedback")
    feedbacks = frozenset(feedbacks)
    universe_ids = {prop_id(p) for p in cfg.pool.property_universe}
    for fb in feedbacks:
        if prop_id(fb.prop) not in universe_ids:
            raise PoolError(f"property {fb.prop!r} is outside the pool universe")

    violations: list[str] = []
    closing = closing_condition(state, cfg)
    if closing:
        violations.append(closing)

    appearing = {prop_id(p) for p in appearing_properties(state, cfg)}
    fresh_appearing = [
        pid for pid in appearing if pid not in state.pointed
    ]

    if cfg.kind in _BASIC_F or cfg.kind in _SIMPLE_F:
        basic_style = cfg.kind in _BASIC_F
        label = "Basic 2" if basic_style else "Simple 2"
        letters = (
            {"appears": "(a)", "fresh": "(b)", "nonempty": "(c)"}
            if basic_style
            else {"polarity": "(a)", "appears": "(b)", "fresh": "(c)", "nonempty": "(d)"}
        )
        if not basic_style and any(fb.polarity == "neutral" for fb in feedbacks):
            violations.append(f"{label}{letters['polarity']}")
        if any(prop_id(fb.prop) not in appearing for fb in feedbacks):
            violations.append(f"{label}{letters['appears']}")
        if any(state.is_pointed(fb.prop) for fb in feedbacks):
            violations.append(f"{label}{letters['fresh']}")
        if not feedbacks and fresh_appearing:
            violations.append(f"{label}{letters['nonempty']}")

    if cfg.size_bound is not None and feedbacks:
        if not any(
            isinstance(fb.prop, PropertyG) and fb.prop.order <= cfg.size_bound
            for fb in feedbacks
        ):
            violations.append("Bound")

    if cfg.target is not None and cfg.enforce_towards:
        for fb in sorted(feedbacks, key=Feedback.sort_key):
            if fb.polarity != towards_polarity(fb.prop, cfg):
                violations.append("Towards")
                break

    return Verdict(not violations, tuple(violations))


def step(state: DialogueState, move: Move, cfg: ProtocolConfig) -> DialogueState:
    """Validate and apply one move; raises on protocol violations."""
    if isinstance(move, Presentation):
        verdict = validate_presentation(state, move.items, cfg)
    else:
        verdict = validate_feedback(state, move.feedbacks, cfg)
    if not verdict.ok:
        raise DialogueError(f"illegal move, violates: {', '.join(verdict.violations)}")
    return DialogueState(state.moves + (move,))


# ---------------------------------------------------------------------------
# Deterministic generators (reasoner and simulated user)


def next_presentation(state: DialogueState, cfg: ProtocolConfig) -> frozenset[str]:
    """Canonical legal presentation.

    Basic-style: a singleton of the least candidate carrying a fresh
    property, else the least candidate satisfying the feedbacks, else the
    empty set.  Simple-style: the least pair with distinct property sets,
    else a singleton, else the empty set.
    """
    satisfying = _satisfying_items(state, cfg)
    if cfg.kind in _SIMPLE_X:
        for a, b in itertools.combinations(satisfying, 2):
            if {prop_id(p) for p in a.properties} != {prop_id(p) for p in b.properties}:
                return frozenset({a.key, b.key})
        if satisfying:
            return frozenset({satisfying[0].key})
        return frozenset()
    with_fresh = [it for it in satisfying if fresh_properties(it, state)]
    if with_fresh:
        return frozenset({with_fresh[0].key})
    if satisfying:
        return frozenset({satisfying[0].key})
    return frozenset()


def eligible_feedbacks(state: DialogueState, cfg: ProtocolConfig) -> list[Feedback]:
    """Fresh properties appearing in the pending presentation, with their
    towards polarity, filtered by the kind's polarity discipline."""
    if cfg.target is None:
        raise DialogueError("feedback generation needs a target (simulated user)")
    out = []
    for p in appearing_properties(state, cfg):
        if state.is_pointed(p):
            continue
        polarity = towards_polarity(p, cfg)
        if cfg.kind in _SIMPLE_F and polarity == "neutral":
            continue
        out.append(Feedback(p, polarity))
    return out


def _lemma_small_class(
    anchor: PropertyG,
    state_or_pointed: Union[DialogueState, frozenset],
    cfg: ProtocolConfig,
) -> Optional[PropertyG]:
    """Fresh subgraph class of the anchor's representative with order equal
    to the bound and strictly above every target's order (edge-free)."""
    n = cfg.size_bound
    max_target = max(it.value.order for it in cfg.target_items())
    if n is None or not (max_target < n <= anchor.order):
        return None
    if isinstance(state_or_pointed, DialogueState):
        pointed_ids = frozenset(state_or_pointed.pointed)
    else:
        pointed_ids = state_or_pointed
    verts = anchor.representative.sorted_vertices
    for combo in itertools.combinations(verts, n):
        sub = FormulaGraph(combo)
        candidate = PropertyG(sub.order, canonical_key(sub), sub)
        if prop_id(candidate) not in pointed_ids:
            return candidate
    return None


def next_feedback(
    state: DialogueState, cfg: ProtocolConfig
) -> Optional[frozenset[Feedback]]:
    """Canonical feedback of the simulated user towards the target.

    Returns the least eligible property with its towards polarity; under a
    size bound, when every eligible property is too large, a second
    negative feedback on a fresh small subgraph class accompanies the
    least one.  ``None`` means no legal non-empty feedback exists.
    """
    eligible = eligible_feedbacks(state, cfg)
    if not eligible:
        return None
    least = min(eligible, key=Feedback.sort_key)
    if cfg.size_bound is None or (
        isinstance(least.prop, PropertyG) and least.prop.order <= cfg.size_bound
    ):
        return frozenset({least})
    # Every eligible property exceeds the bound (ordering puts the smallest
    # first), so the bound can only be met through the lemma construction.
    if least.polarity != "neg":
        return None
    small = _lemma_small_class(least.prop, state, cfg)
    if small is None:
        return None
    return frozenset({least, Feedback(small, "neg")})


def walkthrough_presenter(state: DialogueState, cfg: ProtocolConfig) -> frozenset[str]:
    """Alternative reasoner strategy: present up to two fresh candidates at
    once, the way the guided walkthrough does."""
    satisfying = _satisfying_items(state, cfg)
    with_fresh = [it for it in satisfying if fresh_properties(it, state)]
    if with_fresh:
        return frozenset(it.key for it in with_fresh[:2])
    if satisfying:
        return frozenset({satisfying[0].key})
    return frozenset()


def walkthrough_responder(
    state: DialogueState, cfg: ProtocolConfig
) -> Optional[frozenset[Feedback]]:
    """Alternative user strategy: point each presented candidate's own class
    when fresh, falling back to the canonical least property."""
    items = sorted(state.last_presentation or frozenset())
    out = set()
    for key in items:
        item = cfg.pool.item(key)
        own = next((p for p in item.properties if p.key == key), None)
        if own is None or state.is_pointed(own):
            continue
        polarity = towards_polarity(own, cfg)
        if polarity == "neutral" and cfg.kind in _SIMPLE_F:
            continue
        out.add(Feedback(own, polarity))
    if out:
        return frozenset(out)
    return next_feedback(state, cfg)


def empty_feedback_is_legal(state: DialogueState, cfg: ProtocolConfig) -> bool:
    if state.expects_presentation:
        return False
    return validate_feedback(state, frozenset(), cfg).ok


def is_maximal(state: DialogueState, cfg: ProtocolConfig) -> bool:
    """No set extends the dialogue under the protocol (and the towards
    discipline, when a target is configured)."""
    if closing_condition(state, cfg) is not None:
        return True
    if state.expects_presentation:
        return False  # some presentation, possibly empty, is always legal
    if empty_feedback_is_legal(state, cfg):
        return False
    if cfg.target is not None and cfg.enforce_towards:
        candidate_sets = [frozenset({fb}) for fb in eligible_feedbacks(state, cfg)]
        if cfg.size_bound is not None:
            generated = next_feedback(state, cfg)
            if generated is not None:
                candidate_sets.append(generated)
        return not any(validate_feedback(state, fbs, cfg).ok for fbs in candidate_sets)
    for p in appearing_properties(state, cfg):
        for polarity in POLARITIES:
            if validate_feedback(state, frozenset({Feedback(p, polarity)}), cfg).ok:
                return False
    return True


# ---------------------------------------------------------------------------
# Driver and convergence


@dataclass(frozen=True)
class Transcript:
    cfg: ProtocolConfig
    moves: tuple[Move, ...]
    status: str  # 'maximal' | 'fuel-exhausted'
    reason: str = ""

    @property
    def final_state(self) -> DialogueState:
        return DialogueState(self.moves)

    @property
    def rounds(self) -> int:
        return sum(1 for m in self.moves if isinstance(m, Presentation))


def run_dialogue(cfg: ProtocolConfig, fuel: int, presenter=None, responder=None) -> Transcript:
    """Drive the generators until the dialogue is maximal or out of fuel.

    Fuel counts rounds: one presentation plus the feedback answering it.
    ``presenter`` and ``responder`` default to the canonical deterministic
    generators; alternatives must still produce validating moves.
    """
    presenter = presenter or next_presentation
    responder = responder or next_feedback
    state = DialogueState()
    rounds = 0
    while True:
        if is_maximal(state, cfg):
            return Transcript(cfg, state.moves, "maximal", "no legal continuation")
        if state.expects_presentation:
            if rounds >= fuel:
                return Transcript(cfg, state.moves, "fuel-exhausted", f"fuel={fuel}")
            state = step(state, Presentation(presenter(state, cfg)), cfg)
            rounds += 1
            continue
        fbs = responder(state, cfg)
        if fbs is None:
            if empty_feedback_is_legal(state, cfg):
                state = step(state, FeedbackSet(frozenset()), cfg)
                continue
            # No legal feedback at all: for the unrestricted kind this stalls
            # rather than closes; report it honestly.
            return Transcript(cfg, state.moves, "maximal", "no legal feedback")
        state = step(state, FeedbackSet(fbs), cfg)


def validate_transcript(moves: Sequence[Move], cfg: ProtocolConfig) -> Verdict:
    """Replay a move sequence from scratch, reporting the first violation."""
    state = DialogueState()
    for move in moves:
        if isinstance(move, Presentation):
            verdict = validate_presentation(state, move.items, cfg)
        else:
            verdict = validate_feedback(state, move.feedbacks, cfg)
        if not verdict.ok:
            return verdict
        state = DialogueState(state.moves + (move,))
    return Verdict(True)


@dataclass(frozen=True)
class ConvergenceVerdict:
    converges: bool
    condition: Optional[str] = None
    witness: Optional[Property] = None

    def __bool__(self):
        return self.converges


def check_convergence(
    transcript: Transcript, target: tuple[str, ...], cfg: Optional[ProtocolConfig] = None
) -> ConvergenceVerdict:
    """Convergence of a maximal dialogue towards a target set.

    The last set must be a non-empty presentation whose members carry every
    property shared by all targets and lack every property missed by all
    targets; a failure names the offending condition and witness property.
    """
    cfg = cfg or transcript.cfg
    if transcript.status != "maximal":
        raise DialogueError("convergence is defined for maximal transcripts only")
    moves = transcript.moves
    if not moves or not isinstance(moves[-1], Presentation) or not moves[-1].items:
        return ConvergenceVerdict(False, condition="last set is not a non-empty candidate set")
    last_items = [cfg.pool.item(k) for k in moves[-1].items]
    targets = [cfg.pool.item(k) for k in target]
    target_ids = [frozenset(prop_id(p) for p in t.properties) for t in targets]
    shared_pos = frozenset.intersection(*target_ids)
    shared_neg_universe = [
        p for p in cfg.pool.property_universe
        if all(prop_id(p) not in ids for ids in target_ids)
    ]
    for item in last_items:
        ids = {prop_id(p) for p in item.properties}
        for p in sorted(cfg.pool.property_universe):
            if prop_id(p) in shared_pos and prop_id(p) not in ids:
                return ConvergenceVerdict(False, "2(a)", p)
        for p in shared_neg_universe:
            if prop_id(p) in ids:
                return ConvergenceVerdict(False, "2(b)", p)
    return ConvergenceVerdict(True)
