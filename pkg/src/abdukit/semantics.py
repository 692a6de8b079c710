"""Finite structures and model checking for the two-level language.

A structure interprets first-order symbols over per-sort finite domains and
second-order predicate symbols over the set ``I`` of signed ground literals.
Satisfaction, validity, logical implication and equivalence are decided by
exhaustive enumeration; only finite domains are accepted (infinite
counterexample families live in the verification harness as symbolic
generators instead).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Iterator, Mapping, Optional

from .lang import (
    Alphabet,
    Const,
    EqAtom,
    ExistsFO,
    ExistsSO,
    Formula,
    Lit,
    Not,
    Or,
    PredAtom,
    SOAtom,
    SOEq,
    SOTerm,
    SOVar,
    SOVarRef,
    Sentence,
    Term,
    Var,
    free_variables,
    serialize,
    variable_order_key,
)


class SemanticsError(Exception):
    pass


@dataclass(frozen=True, order=True)
class GroundLit:
    """Signed ground literal: an element of the universe ``I``."""

    positive: bool
    pred: str
    args: tuple[str, ...]

    def __str__(self):
        sign = "" if self.positive else "!"
        return f"{sign}{self.pred}({','.join(self.args)})"


@dataclass(frozen=True)
class FiniteStructure:
    """First-order structure plus second-order relations over ``I``.

    ``domains`` maps each sort to its non-empty element tuple, ``constant_map``
    each sort to a total constant->element mapping, ``predicates`` each
    first-order predicate to its extension and ``second_order`` each
    second-order predicate to a relation over signed ground literals.
    """

    alphabet: Alphabet
    domains: Mapping[str, tuple[str, ...]]
    constant_map: Mapping[str, Mapping[str, str]]
    predicates: Mapping[str, frozenset[tuple[str, ...]]]
    second_order: Mapping[str, frozenset[tuple[GroundLit, ...]]] = field(default_factory=dict)

    def __post_init__(self):
        for sort in self.alphabet.sorts:
            dom = self.domains.get(sort)
            if not dom:
                raise SemanticsError(f"empty or missing domain for sort {sort!r}")
            cmap = self.constant_map.get(sort, {})
            for const in self.alphabet.constants.get(sort, ()):
                if const not in cmap:
                    raise SemanticsError(f"constant {const!r} of sort {sort!r} uninterpreted")
                if cmap[const] not in dom:
                    raise SemanticsError(f"constant {const!r} mapped outside its domain")
        for pred, argsorts in self.alphabet.predicates.items():
            for row in self.predicates.get(pred, frozenset()):
                if len(row) != len(argsorts) or any(
                    e not in self.domains[s] for e, s in zip(row, argsorts)
                ):
                    raise SemanticsError(f"extension row {row!r} invalid for {pred!r}")
        universe = self.literal_universe
        for rel, arity in self.alphabet.second_order.items():
            for row in self.second_order.get(rel, frozenset()):
                if len(row) != arity:
                    raise SemanticsError(f"{rel!r} row {row!r} has wrong arity")
                for gl in row:
                    if gl not in universe:
                        raise SemanticsError(f"{rel!r} row mentions {gl} outside I")

    @cached_property
    def literal_universe(self) -> frozenset[GroundLit]:
        """The set I of all signed ground predicate literals."""
        out = set()
        for pred, argsorts in self.alphabet.predicates.items():
            for row in itertools.product(*(self.domains[s] for s in argsorts)):
                out.add(GroundLit(True, pred, row))
                out.add(GroundLit(False, pred, row))
        return frozenset(out)

    def holds(self, gl: GroundLit) -> bool:
        inside = gl.args in self.predicates.get(gl.pred, frozenset())
        return inside if gl.positive else not inside

    def canonical_token(self) -> tuple:
        return (
            tuple((s, tuple(self.domains[s])) for s in self.alphabet.sorts),
            tuple(
                (s, tuple(sorted(self.constant_map.get(s, {}).items())))
                for s in self.alphabet.sorts
            ),
            tuple(sorted((p, tuple(sorted(rows))) for p, rows in self.predicates.items())),
            tuple(sorted((r, tuple(sorted(rows))) for r, rows in self.second_order.items())),
        )


@dataclass(frozen=True)
class Assignment:
    """First- and second-order assignment, partial on purpose: only the
    variables consulted during evaluation need values."""

    first: Mapping[Var, str] = field(default_factory=dict)
    second: Mapping[str, GroundLit] = field(default_factory=dict)

    def with_first(self, var: Var, element: str) -> "Assignment":
        updated = dict(self.first)
        updated[var] = element
        return Assignment(updated, self.second)

    def with_second(self, name: str, literal: GroundLit) -> "Assignment":
        updated = dict(self.second)
        updated[name] = literal
        return Assignment(self.first, updated)


EMPTY_ASSIGNMENT = Assignment()


def _eval_term(t: Term, m: FiniteStructure, a: Assignment) -> str:
    if isinstance(t, Const):
        return m.constant_map[t.sort][t.name]
    try:
        return a.first[t]
    except KeyError:
        raise SemanticsError(f"assignment gap: first-order variable {t}") from None


def _eval_soterm(t: SOTerm, m: FiniteStructure, a: Assignment) -> GroundLit:
    if isinstance(t, SOVar):
        try:
            return a.second[t.name]
        except KeyError:
            raise SemanticsError(f"assignment gap: second-order variable {t.name}") from None
    if isinstance(t.atom, EqAtom):
        raise SemanticsError(f"equality literal {t} has no second-order interpretation")
    return GroundLit(t.positive, t.atom.pred, tuple(_eval_term(x, m, a) for x in t.atom.args))


def satisfies(m: FiniteStructure, phi: Formula, a: Assignment = EMPTY_ASSIGNMENT) -> bool:
    """Decide satisfaction of ``phi`` in ``m`` under assignment ``a``."""
    if isinstance(phi, Lit):
        lit = phi.literal
        if isinstance(lit.atom, PredAtom):
            row = tuple(_eval_term(t, m, a) for t in lit.atom.args)
            inside = row in m.predicates.get(lit.atom.pred, frozenset())
            return inside if lit.positive else not inside
        equal = _eval_term(lit.atom.lhs, m, a) == _eval_term(lit.atom.rhs, m, a)
        return equal if lit.positive else not equal
    if isinstance(phi, SOVarRef):
        try:
            gl = a.second[phi.name]
        except KeyError:
            raise SemanticsError(f"assignment gap: second-order variable {phi.name}") from None
        return m.holds(gl)
    if isinstance(phi, SOEq):
        return _eval_soterm(phi.lhs, m, a) == _eval_soterm(phi.rhs, m, a)
    if isinstance(phi, SOAtom):
        row = tuple(_eval_soterm(t, m, a) for t in phi.args)
        return row in m.second_order.get(phi.rel, frozenset())
    if isinstance(phi, Not):
        return not satisfies(m, phi.body, a)
    if isinstance(phi, Or):
        return satisfies(m, phi.lhs, a) or satisfies(m, phi.rhs, a)
    if isinstance(phi, ExistsFO):
        return any(
            satisfies(m, phi.body, a.with_first(phi.var, e)) for e in m.domains[phi.var.sort]
        )
    if isinstance(phi, ExistsSO):
        return any(
            satisfies(m, phi.body, a.with_second(phi.var, gl)) for gl in m.literal_universe
        )
    raise TypeError(f"not a formula: {phi!r}")


def _assignments_over(
    m: FiniteStructure, fo: Iterable[Var], so: Iterable[str]
) -> Iterator[Assignment]:
    fo = sorted(fo, key=variable_order_key)
    so = sorted(so)
    fo_choices = [m.domains[v.sort] for v in fo]
    universe = sorted(m.literal_universe)
    for fo_vals in itertools.product(*fo_choices):
        first = dict(zip(fo, fo_vals))
        for so_vals in itertools.product(universe, repeat=len(so)):
            yield Assignment(first, dict(zip(so, so_vals)))


def valid_in(m: FiniteStructure, phi: Formula) -> bool:
    """True iff ``phi`` is satisfied under every assignment to its free
    variables (a single check for sentences)."""
    fo, so = free_variables(phi)
    if not fo and not so:
        return satisfies(m, phi)
    return all(satisfies(m, phi, a) for a in _assignments_over(m, fo, so))


@dataclass(frozen=True)
class StructureClass:
    """Finite class of structures sharing domains and constant maps.

    The list is stored deduplicated in a canonical order so that truth sets
    (used as PropertyH identities) are stable.  ``warning`` flags an empty
    class produced by theory filtering.
    """

    structures: tuple[FiniteStructure, ...]
    warning: Optional[str] = None

    def __post_init__(self):
        seen: dict[tuple, FiniteStructure] = {}
        for m in self.structures:
            seen.setdefault(m.canonical_token(), m)
        ordered = tuple(seen[k] for k in sorted(seen))
        object.__setattr__(self, "structures", ordered)
        if len(ordered) > 1:
            first = ordered[0]
            for m in ordered[1:]:
                if dict(m.domains) != dict(first.domains) or dict(m.constant_map) != dict(
                    first.constant_map
                ):
                    raise SemanticsError("class members must share domains and constants")

    def __iter__(self) -> Iterator[FiniteStructure]:
        return iter(self.structures)

    def __len__(self):
        return len(self.structures)

    def truth_set(self, sentence: Sentence) -> frozenset[int]:
        """Indices of the member structures validating the sentence."""
        return frozenset(i for i, m in enumerate(self.structures) if valid_in(m, sentence))


def logically_implies(
    gamma: Iterable[Formula], delta: Iterable[Formula], cls: StructureClass
) -> bool:
    """Gamma logically implies Delta in the class: every (structure,
    assignment) pair satisfying all of Gamma satisfies all of Delta."""
    gamma = list(gamma)
    delta = list(delta)
    fo: set[Var] = set()
    so: set[str] = set()
    for f in gamma + delta:
        f_fo, f_so = free_variables(f)
        fo |= f_fo
        so |= f_so
    for m in cls:
        for a in _assignments_over(m, fo, so):
            if all(satisfies(m, g, a) for g in gamma) and not all(
                satisfies(m, d, a) for d in delta
            ):
                return False
    return True


def equivalent_in(phi: Formula, psi: Formula, cls: StructureClass) -> bool:
    return logically_implies([phi], [psi], cls) and logically_implies([psi], [phi], cls)


def class_from_theory(
    candidates: StructureClass, theory: Iterable[Sentence]
) -> StructureClass:
    """Restrict a candidate class to the structures validating the theory.

    An empty result is legal; it comes back flagged with a warning.
    """
    theory = list(theory)
    kept = tuple(m for m in candidates if all(valid_in(m, t) for t in theory))
    warning = None if kept else "theory filtered out every candidate structure"
    return StructureClass(kept, warning=warning)


def sentence_key(phi: Formula) -> str:
    """Canonical comparison key used to pick class representatives."""
    return serialize(phi)
