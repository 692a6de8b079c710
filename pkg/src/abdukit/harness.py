"""Exhaustive, fuel-bounded verification of halting and convergence, plus
faithful reproductions of the non-convergence examples and the infinite
dialogue families.

The exhaustive walker enumerates every legal move at every turn --
presentations up to a configurable size cap, single-property feedback sets
and the size-compliant double mandated by the bound -- deduplicating
continuations by dialogue state (pointed ledger plus pending
presentation), which the protocol conditions depend on exclusively.  The
infinite families live outside the finite model checker: their prefixes
are validated with embedding calls where graphs are concrete, and with the
cycle-length rule (spot-checked on small finite structures) where the
paper's class has an infinite domain.
"""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass, replace
from typing import Optional, Sequence

from .dialogue import (
    DialogueState,
    Feedback,
    FeedbackSet,
    Move,
    Presentation,
    ProtocolConfig,
    Transcript,
    _lemma_small_class,
    check_convergence,
    is_maximal,
    towards_polarity,
    validate_transcript,
)
from .fixtures import three_pred_fixture, two_pred_fixture
from .graphs import EMPTY_GRAPH, FormulaGraph, can_embed, sent_of
from .hypotheses import (
    PropertyG,
    graph_item_key,
    hypothesis_item_key,
    prop_id,
    property_of_graph,
)
from .lang import Alphabet, Const, EqAtom, Literal, PredAtom, Sentence, Var, parse_literal
from .semantics import FiniteStructure, GroundLit, satisfies


class HarnessError(Exception):
    pass


class PreconditionError(HarnessError):
    """A suite's theorem-side precondition is not met."""


@dataclass(frozen=True)
class VerificationReport:
    suite: str
    instances: int
    failures: tuple[tuple[str, str], ...]  # (instance descriptor, detail)
    wall_time: float
    notes: tuple[str, ...] = ()

    @property
    def passed(self) -> bool:
        return not self.failures

    def summary(self) -> str:
        status = "pass" if self.passed else f"FAIL ({len(self.failures)})"
        return f"{self.suite}: {status}, {self.instances} instances, {self.wall_time:.2f}s"

    def to_json(self) -> dict:
        return {
            "suite": self.suite,
            "passed": self.passed,
            "instances": self.instances,
            "failures": [{"instance": i, "detail": d} for i, d in self.failures],
            "wallTime": self.wall_time,
            "notes": list(self.notes),
        }


# ---------------------------------------------------------------------------
# Exhaustive dialogue trees


@dataclass(frozen=True)
class Leaf:
    moves: tuple[Move, ...]
    rounds: int


@dataclass(frozen=True)
class ExhaustiveResult:
    leaves: tuple[Leaf, ...]  # one witness per distinct terminal state
    exhausted: tuple[Leaf, ...]  # witness prefixes that ran out of fuel
    max_rounds: int
    states_explored: int

    @property
    def halted(self) -> bool:
        return not self.exhausted


class _MaskWalker:
    """Bitmask core of the exhaustive search.

    Properties and pool items are indexed once; dialogue conditions become
    integer mask tests, and continuations are memoised by dialogue state
    (pointed ledger with polarities plus the pending presentation), which
    the protocol conditions depend on exclusively.  Cycles (possible only
    in the unconstrained kind, whose feedback moves need not be fresh) are
    detected on the search stack and reported as non-halting branches.
    """

    def __init__(self, cfg: ProtocolConfig):
        self.cfg = cfg
        self.kind = cfg.kind
        self.basic_x = self.kind in ("Basic", "BasicX-SimpleF")
        self.simple_x = self.kind in ("Simple", "SimpleX-BasicF")
        self.basic_f = self.kind in ("Basic", "SimpleX-BasicF")
        self.simple_f = self.kind in ("Simple", "BasicX-SimpleF")
        self.towards = cfg.target is not None and cfg.enforce_towards

        self.props = list(cfg.pool.property_universe)
        self.prop_index = {prop_id(p): i for i, p in enumerate(self.props)}
        self.orders = [
            p.order if isinstance(p, PropertyG) else None for p in self.props
        ]
        items = list(cfg.pool.sorted_items())
        self.items = items
        self.item_mask = [
            sum(1 << self.prop_index[pid] for pid in it.prop_ids) for it in items
        ]
        if self.towards:
            self.forced = [towards_polarity(p, cfg) for p in self.props]
        else:
            self.forced = None
        if self.simple_f:
            self.polarities = ("pos", "neg")
        else:
            self.polarities = ("pos", "neg", "neutral")

        self.presentations = []  # (frozenset keys, member idx tuple, union mask)
        for size in range(0, cfg.presentation_cap + 1):
            for combo in itertools.combinations(range(len(items)), size):
                keys = frozenset(items[i].key for i in combo)
                union = 0
                for i in combo:
                    union |= self.item_mask[i]
                self.presentations.append((keys, combo, union))

    # -- mask-level condition checks

    def satisfying(self, pos: int, neg: int) -> list[int]:
        return [
            i
            for i, m in enumerate(self.item_mask)
            if pos & ~m == 0 and neg & m == 0
        ]

    def presentation_moves(self, pos: int, neg: int, pointed: int):
        sat = self.satisfying(pos, neg)
        sat_masks = [self.item_mask[i] for i in sat]
        any_sat = bool(sat)
        fresh_possible = any(m & ~pointed for m in sat_masks)
        distinct_pair = len(set(sat_masks)) >= 2
        out = []
        for keys, members, union in self.presentations:
            ok = True
            for i in members:
                m = self.item_mask[i]
                if pos & ~m or neg & m:
                    ok = False  # UFBD 1
                    break
            if not ok:
                continue
            if not members and any_sat:
                continue  # UFBD 2
            if self.basic_x and fresh_possible and not any(
                self.item_mask[i] & ~pointed for i in members
            ):
                continue  # Basic 1(a)
            if self.simple_x:
                masks = [self.item_mask[i] for i in members]
                if len(set(masks)) != len(masks):
                    continue  # Simple 1(a)
                if distinct_pair and len(members) < 2:
                    continue  # Simple 1(b)
            closes = False
            if self.simple_x and len(members) <= 1:
                closes = True  # Simple 1(c)
            elif self.basic_x and not any(
                self.item_mask[i] & ~pointed for i in members
            ):
                closes = True  # Basic 1(b)
            out.append((keys, members, union, closes))
        return out

    def feedback_moves(self, pos: int, neg: int, pointed: int, union: int):
        """(feedback set, new pos, new neg, new pointed, closes) tuples."""
        out = []
        fresh_appearing = union & ~pointed
        empty_ok = self.kind == "UFBD" or not fresh_appearing
        if empty_ok:
            closes = self.kind != "UFBD"
            out.append((frozenset(), pos, neg, pointed, closes))
        restrict = self.kind != "UFBD"
        for pi, prop in enumerate(self.props):
            bit = 1 << pi
            if restrict and (not union & bit or pointed & bit):
                continue  # appears / fresh
            pols = (self.forced[pi],) if self.forced else self.polarities
            for pol in pols:
                if pol == "neutral" and self.simple_f:
                    continue
                if (
                    self.cfg.size_bound is not None
                    and self.orders[pi] is not None
                    and self.orders[pi] > self.cfg.size_bound
                ):
                    move = self._bound_double(pi, pol, pos, neg, pointed)
                    if move is not None:
                        out.append(move)
                    continue
                fbs = frozenset({Feedback(prop, pol)})
                npos = pos | (bit if pol == "pos" else 0)
                nneg = neg | (bit if pol == "neg" else 0)
                out.append((fbs, npos, nneg, pointed | bit, False))
        return out

    def _bound_double(self, pi: int, pol: str, pos: int, neg: int, pointed: int):
        """Lemma-mandated double: the oversized negative feedback plus a
        fresh small subgraph class of its representative."""
        if pol != "neg" or not self.towards:
            return None
        prop = self.props[pi]
        pointed_ids = frozenset(
            prop_id(self.props[i]) for i in range(len(self.props)) if pointed & (1 << i)
        )
        small = _lemma_small_class(prop, pointed_ids, self.cfg)
        if small is None:
            return None
        si = self.prop_index.get(prop_id(small))
        if si is None:
            return None
        if self.forced and self.forced[si] != "neg":
            return None
        bit, sbit = 1 << pi, 1 << si
        fbs = frozenset({Feedback(prop, "neg"), Feedback(small, "neg")})
        return (fbs, pos, neg | bit | sbit, pointed | bit | sbit, False)


def exhaustive_dialogues(cfg: ProtocolConfig, fuel: int) -> ExhaustiveResult:
    """Enumerate every legal dialogue over the pool, deduplicating
    continuations by dialogue state.

    Presentations range over item subsets up to the configured cap,
    feedback sets over single properties plus the bound-mandated doubles.
    Every maximal terminal state is returned with a witness move sequence;
    branches that cycle or would exceed the fuel (in rounds) are reported
    as exhausted, never dropped silently.
    """
    walker = _MaskWalker(cfg)
    leaves: dict = {}
    exhausted: dict = {}
    memo: dict = {}  # state token -> (depth in rounds, infinite flag)
    on_stack: set = set()

    import sys

    old_limit = sys.getrecursionlimit()
    sys.setrecursionlimit(max(old_limit, 10000))

    def feedback_state(token):
        return token[0] == "fb"

    def walk(token, moves, rounds):
        """Returns (max remaining rounds, infinite flag)."""
        if token in memo:
            return memo[token]
        if token in on_stack:
            exhausted.setdefault(token, Leaf(moves, rounds))
            return (0, True)
        on_stack.add(token)
        try:
            kind, pos, neg, pointed, pend = token
            best = (0, False)
            if kind == "gap":
                options = walker.presentation_moves(pos, neg, pointed)
                for keys, members, union, closes in options:
                    move = Presentation(keys)
                    nmoves = moves + (move,)
                    if closes:
                        leaf_token = ("leaf", pos, neg, pointed, keys)
                        leaves.setdefault(leaf_token, Leaf(nmoves, rounds + 1))
                        best = max(best, (1, False))
                        continue
                    child = ("fb", pos, neg, pointed, (keys, union))
                    depth, inf = walk(child, nmoves, rounds + 1)
                    best = max(best, (depth + 1, inf))
            else:
                keys, union = pend
                options = walker.feedback_moves(pos, neg, pointed, union)
                if not options:
                    leaf_token = ("leaf", pos, neg, pointed, keys)
                    leaves.setdefault(leaf_token, Leaf(moves, rounds))
                    best = (0, False)
                for fbs, npos, nneg, npointed, closes in options:
                    move = FeedbackSet(fbs)
                    nmoves = moves + (move,)
                    if closes:
                        leaf_token = ("leafF", npos, nneg, npointed, keys)
                        leaves.setdefault(leaf_token, Leaf(nmoves, rounds))
                        best = max(best, (0, False))
                        continue
                    child = ("gap", npos, nneg, npointed, None)
                    depth, inf = walk(child, nmoves, rounds)
                    best = max(best, (depth, inf))
            memo[token] = best
            return best
        finally:
            on_stack.discard(token)

    root = ("gap", 0, 0, 0, None)
    depth, infinite = walk(root, (), 0)
    sys.setrecursionlimit(old_limit)
    if depth > fuel and not infinite:
        exhausted.setdefault(("depth",), Leaf((), depth))
    return ExhaustiveResult(
        tuple(leaves.values()), tuple(exhausted.values()), depth, len(memo)
    )


# ---------------------------------------------------------------------------
# Theorem suites


def default_fuel(cfg: ProtocolConfig) -> int:
    return len(cfg.pool.property_universe) + 2


def verify_halting(cfg: ProtocolConfig, fuel: Optional[int] = None) -> VerificationReport:
    """Exhaust the dialogue tree; pass iff no branch runs out of fuel at
    fuel = property-universe size + 2 rounds.

    Graph dialogues need the size bound (the unbounded protocol admits the
    infinite chain family); sentence dialogues need the finite class that
    every materialised pool already has.
    """
    if cfg.property_mode == "PropG" and cfg.size_bound is None:
        raise PreconditionError(
            "halting needs a size bound for graph dialogues; without one the "
            "protocol admits infinite dialogues (see family inf-basic-propG)"
        )
    fuel = default_fuel(cfg) if fuel is None else fuel
    start = time.perf_counter()
    result = exhaustive_dialogues(cfg, fuel)
    failures = tuple(
        (f"prefix of {leaf.rounds} rounds", "fuel exhausted") for leaf in result.exhausted
    )
    notes = (
        f"max rounds {result.max_rounds}",
        f"{len(result.leaves)} terminal states",
        f"{result.states_explored} states explored",
        f"presentation cap {cfg.presentation_cap}",
    )
    return VerificationReport(
        "halting", len(result.leaves), failures, time.perf_counter() - start, notes
    )


def _target_sets(cfg: ProtocolConfig, singletons_only: bool) -> list[tuple[str, ...]]:
    keys = [item.key for item in cfg.pool.sorted_items()]
    if singletons_only:
        return [(k,) for k in keys]
    out = []
    for size in range(1, len(keys) + 1):
        out.extend(tuple(c) for c in itertools.combinations(keys, size))
    return out


def verify_convergence(
    cfg: ProtocolConfig,
    singletons_only: bool = False,
    fuel: Optional[int] = None,
    targets: Optional[Sequence[tuple[str, ...]]] = None,
) -> VerificationReport:
    """Enumerate target sets, exhaust each towards-tree, and check that
    every maximal leaf converges; failures carry the witness property."""
    fuel = default_fuel(cfg) if fuel is None else fuel
    start = time.perf_counter()
    failures = []
    instances = 0
    target_sets = list(targets) if targets is not None else _target_sets(cfg, singletons_only)
    for target in target_sets:
        towards_cfg = replace(cfg, target=tuple(target), enforce_towards=True)
        result = exhaustive_dialogues(towards_cfg, fuel)
        for leaf in result.exhausted:
            failures.append((f"target {target}", "fuel exhausted before maximality"))
        for leaf in result.leaves:
            instances += 1
            transcript = Transcript(towards_cfg, leaf.moves, "maximal")
            verdict = check_convergence(transcript, tuple(target))
            if not verdict.converges:
                witness = verdict.witness.render() if verdict.witness else ""
                failures.append(
                    (f"target {target}", f"condition {verdict.condition}, witness {witness}")
                )
    return VerificationReport(
        "convergence",
        instances,
        tuple(failures),
        time.perf_counter() - start,
        (f"{len(target_sets)} target sets", f"fuel {fuel}"),
    )


def random_walk(cfg: ProtocolConfig, fuel: int, rng) -> Transcript:
    """One dialogue sampled uniformly among the legal moves at every turn;
    the same move enumeration as the exhaustive walker."""
    walker = _MaskWalker(cfg)
    pos = neg = pointed = 0
    moves: tuple[Move, ...] = ()
    rounds = 0
    while True:
        options = walker.presentation_moves(pos, neg, pointed)
        if rounds >= fuel:
            return Transcript(cfg, moves, "fuel-exhausted", f"fuel={fuel}")
        keys, members, union, closes = rng.choice(options)
        moves = moves + (Presentation(keys),)
        rounds += 1
        if closes:
            return Transcript(cfg, moves, "maximal", "terminal presentation")
        fb_options = walker.feedback_moves(pos, neg, pointed, union)
        if not fb_options:
            return Transcript(cfg, moves, "maximal", "no legal feedback")
        fbs, pos, neg, pointed, fb_closes = rng.choice(fb_options)
        moves = moves + (FeedbackSet(fbs),)
        if fb_closes:
            return Transcript(cfg, moves, "maximal", "empty feedback closed")


# ---------------------------------------------------------------------------
# The infinite-chain family


FAMILY_ALPHABET = Alphabet(
    sorts=("obj",),
    constants={"obj": ("0",)},
    predicates={"p": ("obj",)},
    second_order={"R": 2},
)

FAMILY_IDS = (
    "inf-basic-propH",
    "inf-basic-propG",
    "inf-simple-propH",
    "inf-simple-propG",
)

NON_CONVERGENCE_IDS = (
    "nc-simple-propG-set",
    "nc-simple-propH-set",
    "nc-simpleX-basicF",
    "nc-basicX-simpleF",
)


def family_graph(n: int) -> FormulaGraph:
    """Chain graph number n: p-literals in an R-cycle of length n+1 with
    pairwise-distinctness equality vertices."""
    zero = Const("0", "obj")
    p0 = Literal(PredAtom("p", (zero,)))
    if n == 0:
        return FormulaGraph([p0], {"R": [(p0, p0)]})
    xs = [Var(f"x{i:02d}", "obj") for i in range(1, n + 1)]
    p_lits = [Literal(PredAtom("p", (x,))) for x in xs]
    vertices: list[Literal] = [p0] + p_lits
    vertices += [Literal(EqAtom(zero, x), positive=False) for x in xs]
    vertices += [
        Literal(EqAtom(xs[i], xs[j]), positive=False)
        for i in range(n)
        for j in range(i + 1, n)
    ]
    rows = [(p0, p_lits[0])]
    rows += [(p_lits[i], p_lits[i + 1]) for i in range(n - 1)]
    rows += [(p_lits[-1], p0)]
    return FormulaGraph(vertices, {"R": rows})


def family_sentence(n: int) -> Sentence:
    return sent_of(family_graph(n), FAMILY_ALPHABET)


def cycle_structure(n: int) -> FiniteStructure:
    """Finite witness for chain number n: domain 0..n, p everywhere, R the
    directed (n+1)-cycle on positive p-literals."""
    elements = tuple(str(i) for i in range(n + 1))
    rows = [
        (GroundLit(True, "p", (elements[i],)), GroundLit(True, "p", (elements[(i + 1) % (n + 1)],)))
        for i in range(n + 1)
    ]
    return FiniteStructure(
        alphabet=FAMILY_ALPHABET,
        domains={"obj": elements},
        constant_map={"obj": {"0": "0"}},
        predicates={"p": frozenset((e,) for e in elements)},
        second_order={"R": frozenset(rows)},
    )


def spot_check_family_separation(max_n: int = 3) -> None:
    """Model-check the structural rule on small instances: the cycle
    witness for n satisfies chain n and no other chain."""
    for n in range(max_n + 1):
        m = cycle_structure(n)
        for j in range(max_n + 1):
            expected = j == n
            if satisfies(m, family_sentence(j)) != expected:
                raise HarnessError(
                    f"cycle witness {n} disagrees with the structural rule at {j}"
                )


@dataclass(frozen=True)
class FamilyPrefix:
    family: str
    turns: int
    descriptions: tuple[str, ...]
    checks: int

    def summary(self) -> str:
        return f"{self.family}: {self.turns} turns validated with {self.checks} oracle checks"


def _graph_family_oracle():
    cache: dict[tuple[int, int], bool] = {}

    def embeds(i: int, j: int) -> bool:
        if (i, j) not in cache:
            cache[(i, j)] = can_embed(family_graph(i), family_graph(j))
        return cache[(i, j)]

    return embeds


def counterexample_prefix(family: str, k: int) -> FamilyPrefix:
    """Generate and validate the first ``k`` (presentation, feedback) turns
    of an infinite dialogue family.

    Graph families are validated with real embedding searches; sentence
    families use the cycle-length rule (chain i implies chain j iff i = j),
    spot-checked against the finite cycle witnesses.
    """
    if k < 1:
        raise HarnessError("prefix length must be at least 1")
    if family not in FAMILY_IDS:
        raise HarnessError(f"unknown family {family!r}")
    simple = family in ("inf-simple-propH", "inf-simple-propG")
    graphs = family in ("inf-basic-propG", "inf-simple-propG")

    checks = 0
    if graphs:
        member_has = _graph_family_oracle()
    else:
        spot_check_family_separation()
        member_has = lambda i, j: i == j  # chain i has property [chain j] iff i = j

    def expect(condition: bool, message: str):
        nonlocal checks
        checks += 1
        if not condition:
            raise HarnessError(f"{family}: {message}")

    descriptions = []
    pointed: list[int] = []  # chain indices pointed negatively, in order
    for turn in range(1, k + 1):
        members = [2 * turn - 1, 2 * turn] if simple else [turn]
        # UFBD 1: every presented member lacks every negatively pointed class.
        for m in members:
            for j in pointed:
                expect(not member_has(m, j), f"chain {m} carries pointed class {j}")
        if simple:
            a, b = members
            expect(
                not member_has(a, b) and not member_has(b, a),
                f"chains {a} and {b} do not have distinct property sets",
            )
        # Feedback: each pointed class appears (identity), is fresh
        # (pairwise distinctness follows from the class checks above), and
        # is negative towards chain 0.
        for m in members:
            expect(member_has(m, m), f"chain {m} lacks its own class")
            expect(not member_has(m, 0), f"chain {m} embeds into the target chain 0")
            expect(not member_has(0, m), f"target chain 0 embeds into chain {m}")
        pointed.extend(members)
        label = ", ".join(f"chain {m}" for m in members)
        descriptions.append(f"turn {turn}: present {{{label}}}, feed back neg on each")
    return FamilyPrefix(family, k, tuple(descriptions), checks)


# ---------------------------------------------------------------------------
# Non-convergence example reproductions


def _three_pred_nc_setup():
    fx = three_pred_fixture()
    p3 = FormulaGraph([parse_literal("p3(0)", fx.alphabet)])
    return fx, fx.graphs, p3


def reproduce_non_convergence(example_id: str) -> VerificationReport:
    """Build one of the four non-convergence examples verbatim and assert
    its numbered claims: the dialogue validates, it is maximal, and the
    shared witness property is absent from the last set."""
    start = time.perf_counter()
    failures: list[tuple[str, str]] = []
    claims = 0

    def claim(name: str, ok: bool, detail: str = ""):
        nonlocal claims
        claims += 1
        if not ok:
            failures.append((name, detail or "assertion failed"))

    if example_id == "nc-simple-propG-set":
        fx, g, p3 = _three_pred_nc_setup()
        target = (graph_item_key(g["g1"]), graph_item_key(g["g2"]))
        pres = Presentation(frozenset({graph_item_key(g["g3"]), graph_item_key(g["g4"])}))
        fb = FeedbackSet(frozenset({Feedback(property_of_graph(EMPTY_GRAPH), "pos")}))
        moves = (pres, fb, pres)
        for bound in (None, 0, 2, 7):
            cfg = ProtocolConfig(
                kind="Simple", property_mode="PropG", pool=fx.pool,
                target=target, size_bound=bound,
            )
            suffix = f" (bound {bound})" if bound is not None else ""
            claim(f"dialogue validates{suffix}", validate_transcript(moves, cfg).ok)
            claim(f"no feedback extends it{suffix}", is_maximal(DialogueState(moves), cfg))
        cfg = ProtocolConfig(
            kind="Simple", property_mode="PropG", pool=fx.pool, target=target
        )
        verdict = check_convergence(Transcript(cfg, moves, "maximal"), target)
        p3_class = property_of_graph(p3)
        claim(
            "shared positive class p3 is missing from the last set",
            not verdict.converges
            and verdict.condition == "2(a)"
            and prop_id(verdict.witness) == prop_id(p3_class),
            f"verdict {verdict}",
        )

    elif example_id == "nc-simple-propH-set":
        fx = two_pred_fixture()

        def k(i):
            return hypothesis_item_key(frozenset([fx.sentence_pool[i]]), fx.cls)

        target = (k(6), k(7))  # p1 & !p2, !p1 & p2
        h3, h4 = k(1), k(2)
        cfg = ProtocolConfig(
            kind="Simple", property_mode="PropH", pool=fx.pool, target=target
        )
        taut = next(p for p in cfg.pool.item(h3).properties if len(p.truth_set) == 4)
        disj = next(p for p in cfg.pool.item(h3).properties if len(p.truth_set) == 3)
        pres = Presentation(frozenset({h3, h4}))
        moves = (
            pres,
            FeedbackSet(frozenset({Feedback(taut, "pos"), Feedback(disj, "pos")})),
            pres,
        )
        claim("dialogue validates", validate_transcript(moves, cfg).ok)
        claim("no feedback extends it", is_maximal(DialogueState(moves), cfg))
        verdict = check_convergence(Transcript(cfg, moves, "maximal"), target)
        neg_overlap = fx.cls.truth_set(fx.sentence_pool[5])  # !(p1 & p2)
        claim(
            "shared positive class !(p1&p2) is missing from the last set",
            not verdict.converges
            and verdict.condition == "2(a)"
            and frozenset(verdict.witness.truth_set) == neg_overlap,
            f"verdict {verdict}",
        )

    elif example_id == "nc-simpleX-basicF":
        fx, g, p3 = _three_pred_nc_setup()
        target = (graph_item_key(g["g1"]), graph_item_key(g["g2"]))
        cfg = ProtocolConfig(
            kind="SimpleX-BasicF", property_mode="PropG", pool=fx.pool,
            target=target, size_bound=3,
        )
        pres = Presentation(frozenset({graph_item_key(g["g3"]), graph_item_key(g["g4"])}))
        fb1 = FeedbackSet(
            frozenset(
                {
                    Feedback(property_of_graph(EMPTY_GRAPH), "pos"),
                    Feedback(property_of_graph(g["g3"]), "neutral"),
                    Feedback(property_of_graph(g["g4"]), "neutral"),
                }
            )
        )
        fb2 = FeedbackSet(frozenset())
        moves = (pres, fb1, pres, fb2)
        claim("dialogue validates", validate_transcript(moves, cfg).ok)
        claim("no presentation extends it", is_maximal(DialogueState(moves), cfg))
        verdict = check_convergence(Transcript(cfg, moves, "maximal"), target)
        claim(
            "last set is an empty feedback set, not a candidate set",
            not verdict.converges and verdict.condition is not None
            and "candidate" in verdict.condition,
            f"verdict {verdict}",
        )

    elif example_id == "nc-basicX-simpleF":
        fx, g, p3 = _three_pred_nc_setup()
        target = (graph_item_key(g["g1"]), graph_item_key(g["g2"]))
        cfg = ProtocolConfig(
            kind="BasicX-SimpleF", property_mode="PropG", pool=fx.pool,
            target=target, size_bound=3,
        )
        pres = Presentation(frozenset({graph_item_key(g["g3"])}))
        fb1 = FeedbackSet(frozenset({Feedback(property_of_graph(EMPTY_GRAPH), "pos")}))
        moves = (pres, fb1, pres)
        claim("dialogue validates", validate_transcript(moves, cfg).ok)
        claim("no feedback extends it", is_maximal(DialogueState(moves), cfg))
        verdict = check_convergence(Transcript(cfg, moves, "maximal"), target)
        p3_class = property_of_graph(p3)
        claim(
            "shared positive class p3 is missing from g3",
            not verdict.converges
            and verdict.condition == "2(a)"
            and prop_id(verdict.witness) == prop_id(p3_class),
            f"verdict {verdict}",
        )

    else:
        raise HarnessError(f"unknown example {example_id!r}")

    return VerificationReport(
        example_id, claims, tuple(failures), time.perf_counter() - start
    )
