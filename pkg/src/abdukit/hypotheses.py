"""Hypotheses, hypothesis graphs and the two property assignment functions.

A hypothesis is a finite set of sentences jointly satisfiable with the
observations in the structure class.  Graph candidates carry subgraph
isomorphism classes as properties; hypothesis candidates carry equivalence
classes of implied sentences, computed relative to an explicit finite
sentence pool so that every check stays exhaustive.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence, Union

from .graphs import (
    FormulaGraph,
    canonical_key,
    enumerate_graphs_up_to,
    enumerate_subgraphs,
    sent_of,
    validate_graph,
)
from .lang import Alphabet, Sentence, serialize
from .semantics import StructureClass, valid_in
from .lang import is_sentence


class PoolError(Exception):
    pass


Hypothesis = frozenset  # of Sentence


def make_hypothesis(sentences: Iterable[Sentence]) -> Hypothesis:
    sentences = frozenset(sentences)
    for s in sentences:
        if not is_sentence(s):
            raise PoolError(f"hypothesis member {serialize(s)!r} has free variables")
    return sentences


def is_hypothesis(
    h: Iterable[Sentence], observations: Iterable[Sentence], cls: StructureClass
) -> bool:
    """Joint satisfiability of ``h`` with the observations in the class.

    Equivalent, for sentences, to the pair not logically implying a
    contradiction in the class.  An empty class admits no hypotheses.
    """
    if len(cls) == 0:
        return False
    sentences = list(h) + list(observations)
    return any(all(valid_in(m, s) for s in sentences) for m in cls)


def is_hypothesis_graph(
    g: FormulaGraph,
    observations: Iterable[Sentence],
    cls: StructureClass,
    alphabet: Alphabet,
) -> bool:
    return is_hypothesis([sent_of(g, alphabet)], observations, cls)


# ---------------------------------------------------------------------------
# Properties


@dataclass(frozen=True, order=True)
class PropertyG:
    """Isomorphism class of an embeddable graph, identified by canonical key.

    Ordering is by (order, key) so that "canonically least" prefers small
    subgraph classes.
    """

    order: int
    key: str
    representative: FormulaGraph = field(compare=False)

    def render(self) -> str:
        return str(self.representative)


@dataclass(frozen=True, order=True)
class PropertyH:
    """Logical-equivalence class of pool sentences, identified by the set of
    class members validating it."""

    truth_set: tuple[int, ...]
    representative: Sentence = field(compare=False)

    @property
    def key(self) -> str:
        return "ts:" + ",".join(map(str, self.truth_set))

    def render(self) -> str:
        return serialize(self.representative)


Property = Union[PropertyG, PropertyH]


def prop_id(p: Property) -> tuple:
    """Hashable identity of a property: canonical key for graph classes,
    truth set for sentence classes."""
    if isinstance(p, PropertyG):
        return ("G", p.order, p.key)
    return ("H", p.truth_set)


def property_of_graph(g: FormulaGraph) -> PropertyG:
    return PropertyG(g.order, canonical_key(g), g)


def prop_g(g: FormulaGraph) -> frozenset[PropertyG]:
    """Isomorphism classes of all graphs embeddable into ``g``.

    Embeddable is the same as isomorphic-to-a-subgraph, so the classes of
    the subgraphs are exactly the value; it always contains the empty
    graph's class and the class of ``g`` itself.
    """
    classes: dict[str, FormulaGraph] = {}
    for sub in enumerate_subgraphs(g):
        classes.setdefault(canonical_key(sub), sub)
    return frozenset(PropertyG(sub.order, key, sub) for key, sub in classes.items())


def sentence_classes(
    pool_sentences: Sequence[Sentence], cls: StructureClass
) -> list[PropertyH]:
    """Partition a sentence pool into logical-equivalence classes."""
    groups: dict[tuple[int, ...], list[Sentence]] = {}
    for s in pool_sentences:
        groups.setdefault(tuple(sorted(cls.truth_set(s))), []).append(s)
    return [
        PropertyH(ts, min(members, key=serialize)) for ts, members in sorted(groups.items())
    ]


def prop_h(
    h: Iterable[Sentence], pool_sentences: Sequence[Sentence], cls: StructureClass
) -> frozenset[PropertyH]:
    """Equivalence classes of pool sentences implied by the hypothesis."""
    h = list(h)
    h_truth = frozenset(range(len(cls)))
    for s in h:
        h_truth &= cls.truth_set(s)
    return frozenset(
        p for p in sentence_classes(pool_sentences, cls) if h_truth <= frozenset(p.truth_set)
    )


# ---------------------------------------------------------------------------
# Candidate pools


@dataclass(frozen=True)
class PoolItem:
    key: str
    value: Union[FormulaGraph, Hypothesis]
    properties: frozenset[Property]

    @cached_property
    def prop_ids(self) -> frozenset[tuple]:
        return frozenset(prop_id(p) for p in self.properties)

    def render(self) -> str:
        if isinstance(self.value, FormulaGraph):
            return str(self.value)
        return "{" + ", ".join(sorted(serialize(s) for s in self.value)) + "}"


@dataclass(frozen=True)
class CandidatePool:
    """Finite candidate universe with a precomputed property table."""

    mode: str  # 'graphs' | 'hypotheses'
    items: tuple[PoolItem, ...]
    alphabet: Alphabet
    cls: StructureClass
    observations: tuple[Sentence, ...] = ()
    sentence_pool: tuple[Sentence, ...] = ()

    @cached_property
    def property_universe(self) -> tuple[Property, ...]:
        universe: dict = {}
        for item in self.items:
            for p in item.properties:
                universe.setdefault(prop_id(p), p)
        return tuple(universe[k] for k in sorted(universe))

    @cached_property
    def _by_key(self) -> dict[str, PoolItem]:
        return {it.key: it for it in self.items}

    def item(self, key: str) -> PoolItem:
        try:
            return self._by_key[key]
        except KeyError:
            raise PoolError(f"unknown pool item {key!r}") from None

    def has_item(self, key: str) -> bool:
        return key in self._by_key

    @cached_property
    def _sorted(self) -> tuple[PoolItem, ...]:
        return tuple(sorted(self.items, key=lambda it: it.key))

    def sorted_items(self) -> tuple[PoolItem, ...]:
        return self._sorted

    def property_by_key(self, key: str) -> Property:
        for p in self.property_universe:
            if p.key == key:
                return p
        raise PoolError(f"unknown property {key!r}")


def graph_item_key(g: FormulaGraph) -> str:
    return canonical_key(g)


def hypothesis_item_key(h: Hypothesis, cls: StructureClass) -> str:
    truth = frozenset(range(len(cls)))
    for s in h:
        truth &= cls.truth_set(s)
    return "hyp:" + ",".join(map(str, sorted(truth)))


def build_fixture_graph_pool(
    graphs: Sequence[FormulaGraph],
    observations: Iterable[Sentence],
    cls: StructureClass,
    alphabet: Alphabet,
) -> CandidatePool:
    """Pool over an explicit graph list; items are deduplicated up to
    isomorphism and each must be a hypothesis graph for the observations."""
    observations = tuple(observations)
    items: dict[str, PoolItem] = {}
    for g in graphs:
        validate_graph(g, alphabet)
        if not is_hypothesis_graph(g, observations, cls, alphabet):
            raise PoolError(f"graph {g} is not a hypothesis graph for the observations")
        key = graph_item_key(g)
        items.setdefault(key, PoolItem(key, g, frozenset(prop_g(g))))
    return CandidatePool("graphs", tuple(items.values()), alphabet, cls, observations)


def build_graph_pool(
    observations: Iterable[Sentence],
    cls: StructureClass,
    max_order: int,
    alphabet: Alphabet,
    include_equalities: bool = False,
    class_ceiling: int = 20000,
) -> CandidatePool:
    """Enumerate hypothesis graphs up to ``max_order`` (one per isomorphism
    class) and pair each with its subgraph properties."""
    observations = tuple(observations)
    graphs = [
        g
        for g in enumerate_graphs_up_to(alphabet, max_order, include_equalities, class_ceiling)
        if is_hypothesis_graph(g, observations, cls, alphabet)
    ]
    items = tuple(
        PoolItem(graph_item_key(g), g, frozenset(prop_g(g))) for g in graphs
    )
    return CandidatePool("graphs", items, alphabet, cls, observations)


def build_hypothesis_pool(
    hypotheses: Sequence[Iterable[Sentence]],
    sentence_pool: Sequence[Sentence],
    observations: Iterable[Sentence],
    cls: StructureClass,
    alphabet: Alphabet,
) -> CandidatePool:
    """Pool over explicit hypotheses with PropH computed against the given
    sentence pool; items are deduplicated up to logical equivalence."""
    observations = tuple(observations)
    items: dict[str, PoolItem] = {}
    for sentences in hypotheses:
        h = make_hypothesis(sentences)
        if not is_hypothesis(h, observations, cls):
            raise PoolError(f"{sorted(map(serialize, h))} is not a hypothesis")
        key = hypothesis_item_key(h, cls)
        items.setdefault(key, PoolItem(key, h, frozenset(prop_h(h, sentence_pool, cls))))
    return CandidatePool(
        "hypotheses",
        tuple(items.values()),
        alphabet,
        cls,
        observations,
        tuple(sentence_pool),
    )
