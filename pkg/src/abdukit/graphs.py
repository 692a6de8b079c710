"""Formula graphs: hypergraphs of first-order literals.

A graph is a finite set of literal vertices plus one labelled hyperedge
family per second-order predicate symbol.  Graphs translate to sentences
(conjunction of vertices and hyperedge atoms, existentially closed), are
compared by embeddings (injective vertex maps driven by injective,
constant-fixing variable renamings) and canonicalised exactly by
permutation minimisation, which is fine at desk scale.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Mapping, Optional, Sequence

from .lang import (
    Alphabet,
    Const,
    EqAtom,
    Formula,
    Lit,
    Literal,
    PredAtom,
    SOAtom,
    Sentence,
    Term,
    Var,
    conj_all,
    existential_closure,
    serialize_literal,
    well_sorted,
)


class GraphError(Exception):
    pass


class EnumerationLimit(GraphError):
    """Raised when graph enumeration would exceed the configured ceiling."""


def literal_key(lit: Literal) -> str:
    return serialize_literal(lit)


def _literal_terms(lit: Literal) -> tuple[Term, ...]:
    if isinstance(lit.atom, PredAtom):
        return lit.atom.args
    return (lit.atom.lhs, lit.atom.rhs)


def _rebuild_literal(lit: Literal, args: Sequence[Term]) -> Literal:
    if isinstance(lit.atom, PredAtom):
        return Literal(PredAtom(lit.atom.pred, tuple(args)), lit.positive)
    lhs, rhs = args
    return Literal(EqAtom(lhs, rhs), lit.positive)


def literal_vars(lit: Literal) -> tuple[Var, ...]:
    return tuple(t for t in _literal_terms(lit) if isinstance(t, Var))


def _signature(lit: Literal):
    if isinstance(lit.atom, PredAtom):
        return ("p", lit.atom.pred, lit.positive)
    return ("e", lit.atom.lhs.sort, lit.positive)


@dataclass(frozen=True)
class FormulaGraph:
    vertices: frozenset[Literal]
    edges: tuple[tuple[str, frozenset[tuple[Literal, ...]]], ...] = ()

    def __init__(
        self,
        vertices: Iterable[Literal],
        edges: Mapping[str, Iterable[tuple[Literal, ...]]] | None = None,
    ):
        vset = frozenset(vertices)
        families = []
        for rel in sorted(edges or {}):
            rows = frozenset(tuple(row) for row in edges[rel])
            if not rows:
                continue
            for row in rows:
                for lit in row:
                    if lit not in vset:
                        raise GraphError(f"edge endpoint {lit} is not a vertex")
                    if lit.is_equality:
                        raise GraphError(f"equality literal {lit} cannot carry hyperedges")
            families.append((rel, rows))
        object.__setattr__(self, "vertices", vset)
        object.__setattr__(self, "edges", tuple(families))

    @property
    def order(self) -> int:
        return len(self.vertices)

    @cached_property
    def edge_map(self) -> dict[str, frozenset[tuple[Literal, ...]]]:
        return dict(self.edges)

    @cached_property
    def edge_count(self) -> int:
        return sum(len(rows) for _, rows in self.edges)

    @cached_property
    def sorted_vertices(self) -> tuple[Literal, ...]:
        return tuple(sorted(self.vertices, key=literal_key))

    @cached_property
    def predicate_vertices(self) -> tuple[Literal, ...]:
        return tuple(v for v in self.sorted_vertices if not v.is_equality)

    def vars_by_sort(self) -> dict[str, set[Var]]:
        out: dict[str, set[Var]] = {}
        for v in self.vertices:
            for var in literal_vars(v):
                out.setdefault(var.sort, set()).add(var)
        return out

    def __str__(self):
        verts = ", ".join(literal_key(v) for v in self.sorted_vertices)
        edges = "; ".join(
            f"{rel}: " + ", ".join(str(tuple(map(literal_key, row))) for row in sorted(
                rows, key=lambda r: tuple(map(literal_key, r))))
            for rel, rows in self.edges
        )
        return f"({{{verts}}}; {edges or 'no edges'})"


EMPTY_GRAPH = FormulaGraph(frozenset())


def validate_graph(g: FormulaGraph, alphabet: Alphabet) -> None:
    """Raise on sort problems; structural problems are constructor errors."""
    var_sorts: dict[str, str] = {}
    for v in g.sorted_vertices:
        verdict = well_sorted(Lit(v), alphabet)
        if not verdict.ok:
            raise GraphError(f"vertex {v}: " + "; ".join(str(d) for d in verdict.diagnostics))
        for var in literal_vars(v):
            seen = var_sorts.setdefault(var.name, var.sort)
            if seen != var.sort:
                raise GraphError(f"variable {var.name!r} used with two sorts in one graph")
    for rel, rows in g.edges:
        arity = alphabet.second_order.get(rel)
        if arity is None:
            raise GraphError(f"unknown second-order predicate {rel!r}")
        for row in rows:
            if len(row) != arity:
                raise GraphError(f"{rel!r} edge {row} has arity {len(row)}, expected {arity}")


def sent_of(g: FormulaGraph, alphabet: Alphabet) -> Sentence:
    """Existential closure of the graph's conjunction formula.

    Vertices come first in canonical literal order, then hyperedge atoms per
    second-order predicate in declaration order; the empty graph yields the
    expansion of the ``true`` macro.
    """
    parts: list[Formula] = [Lit(v) for v in g.sorted_vertices]
    for rel in alphabet.second_order:
        rows = g.edge_map.get(rel)
        if not rows:
            continue
        for row in sorted(rows, key=lambda r: tuple(map(literal_key, r))):
            parts.append(SOAtom(rel, row))
    return existential_closure(conj_all(parts, alphabet))


def is_subgraph(g: FormulaGraph, h: FormulaGraph) -> bool:
    if not g.vertices <= h.vertices:
        return False
    return all(rows <= h.edge_map.get(rel, frozenset()) for rel, rows in g.edges)


def enumerate_subgraphs(g: FormulaGraph) -> list[FormulaGraph]:
    """All subgraphs: vertex subsets with every legal edge subset."""
    out = []
    verts = g.sorted_vertices
    for k in range(len(verts) + 1):
        for vs in itertools.combinations(verts, k):
            vset = frozenset(vs)
            # Edge rows staying inside the chosen vertices, per family.
            options = []
            for rel, rows in g.edges:
                legal = [row for row in sorted(rows, key=lambda r: tuple(map(literal_key, r)))
                         if all(l in vset for l in row)]
                options.append((rel, legal))
            def subsets(rows):
                for n in range(len(rows) + 1):
                    yield from itertools.combinations(rows, n)
            for choice in itertools.product(*(list(subsets(rows)) for _, rows in options)):
                edges = {rel: list(rows) for (rel, _), rows in zip(options, choice) if rows}
                out.append(FormulaGraph(vset, edges))
    return out


# ---------------------------------------------------------------------------
# Embeddings


@dataclass(frozen=True)
class Embedding:
    """Witness for an embedding: an injective vertex map together with the
    variable renaming that produces it.

    The renaming is stored in normal form: a bijection on its finite
    support (variables of the source united with their images), the
    identity everywhere else.
    """

    vertex_map: tuple[tuple[Literal, Literal], ...]
    renaming: tuple[tuple[Var, Var], ...]

    @cached_property
    def vmap(self) -> dict[Literal, Literal]:
        return dict(self.vertex_map)

    @cached_property
    def rmap(self) -> dict[Var, Var]:
        return dict(self.renaming)

    def rename_term(self, t: Term) -> Term:
        if isinstance(t, Const):
            return t
        return self.rmap.get(t, t)

    def apply_literal(self, lit: Literal) -> Literal:
        return _rebuild_literal(lit, [self.rename_term(t) for t in _literal_terms(lit)])

    def apply(self, g: FormulaGraph) -> FormulaGraph:
        """Image of ``g``: a subgraph of the embedding's target."""
        vertices = [self.vmap[v] for v in g.vertices]
        edges = {
            rel: [tuple(self.vmap[l] for l in row) for row in rows]
            for rel, rows in g.edges
        }
        return FormulaGraph(vertices, edges)

    def compose(self, outer: "Embedding") -> "Embedding":
        """``outer`` after ``self`` (homomorphisms compose)."""
        vmap = {v: outer.vmap[w] for v, w in self.vertex_map}
        support = set(self.rmap) | set(outer.rmap)
        rmap = {}
        for var in support:
            mid = self.rmap.get(var, var)
            rmap[var] = outer.rmap.get(mid, mid)
        return Embedding(
            tuple(sorted(vmap.items(), key=lambda p: literal_key(p[0]))),
            tuple(sorted(rmap.items())),
        )


def _normalise_renaming(alpha: dict[Var, Var]) -> tuple[tuple[Var, Var], ...]:
    """Extend an injective variable map to a bijection on its support."""
    by_sort: dict[str, dict[Var, Var]] = {}
    for src, dst in alpha.items():
        by_sort.setdefault(src.sort, {})[src] = dst
    out: dict[Var, Var] = {}
    for sort, amap in by_sort.items():
        sources = set(amap)
        images = set(amap.values())
        support = sources | images
        leftover_src = sorted(support - sources)
        leftover_dst = sorted(support - images)
        out.update(amap)
        out.update(dict(zip(leftover_src, leftover_dst)))
    return tuple(sorted(out.items()))


def _compatible(
    v: Literal,
    w: Literal,
    alpha: dict[Var, Var],
    alpha_used: set[Var],
) -> Optional[list[tuple[Var, Var]]]:
    """New renaming pairs making w the alpha-image of v, or None."""
    if _signature(v) != _signature(w):
        return None
    new: list[tuple[Var, Var]] = []
    staged: dict[Var, Var] = {}
    staged_used: set[Var] = set()
    for tv, tw in zip(_literal_terms(v), _literal_terms(w)):
        if isinstance(tv, Const):
            if tv != tw:
                return None
            continue
        if isinstance(tw, Const):
            return None  # injective constant-fixing renamings map vars to vars
        bound = alpha.get(tv) or staged.get(tv)
        if bound is not None:
            if bound != tw:
                return None
            continue
        if tw in alpha_used or tw in staged_used:
            return None
        staged[tv] = tw
        staged_used.add(tw)
        new.append((tv, tw))
    return new


def find_embedding(g: FormulaGraph, h: FormulaGraph) -> Optional[Embedding]:
    """Search for an embedding of ``g`` into ``h`` by backtracking.

    Source vertices are processed most-constrained-first (fewest targets
    compatible by literal shape), ties broken by canonical literal order;
    hyperedge rows are verified as soon as all their endpoints are mapped.
    Returns a witness in renaming normal form, or None.
    """
    if g.order > h.order:
        return None
    for rel, rows in g.edges:
        if len(rows) > len(h.edge_map.get(rel, frozenset())):
            return None

    targets_by_sig: dict[tuple, list[Literal]] = {}
    for w in h.sorted_vertices:
        targets_by_sig.setdefault(_signature(w), []).append(w)

    order = sorted(
        g.sorted_vertices,
        key=lambda v: (len(targets_by_sig.get(_signature(v), ())), literal_key(v)),
    )
    if any(_signature(v) not in targets_by_sig for v in order):
        return None

    index = {v: i for i, v in enumerate(order)}
    rows_by_vertex: dict[Literal, list[tuple[str, tuple[Literal, ...]]]] = {v: [] for v in order}
    for rel, rows in g.edges:
        for row in rows:
            for lit in set(row):
                rows_by_vertex[lit].append((rel, row))

    vmap: dict[Literal, Literal] = {}
    used: set[Literal] = set()
    alpha: dict[Var, Var] = {}
    alpha_used: set[Var] = set()
    h_edges = h.edge_map

    def rows_ok(v: Literal) -> bool:
        for rel, row in rows_by_vertex[v]:
            if all(l in vmap for l in row):
                image = tuple(vmap[l] for l in row)
                if image not in h_edges.get(rel, frozenset()):
                    return False
        return True

    h_vertices = h.vertices

    def forced_image(v: Literal) -> Optional[Literal]:
        args = []
        for t in _literal_terms(v):
            if isinstance(t, Var):
                dst = alpha.get(t)
                if dst is None:
                    return None
                args.append(dst)
            else:
                args.append(t)
        return _rebuild_literal(v, args)

    def assign(k: int) -> bool:
        if k == len(order):
            return True
        v = order[k]
        # When the renaming already covers every variable of v its image is
        # forced; a direct membership test avoids scanning candidates.
        image = forced_image(v)
        if image is not None:
            if image not in h_vertices or image in used:
                return False
            vmap[v] = image
            used.add(image)
            if rows_ok(v) and assign(k + 1):
                return True
            del vmap[v]
            used.remove(image)
            return False
        for w in targets_by_sig[_signature(v)]:
            if w in used:
                continue
            new_pairs = _compatible(v, w, alpha, alpha_used)
            if new_pairs is None:
                continue
            vmap[v] = w
            used.add(w)
            for src, dst in new_pairs:
                alpha[src] = dst
                alpha_used.add(dst)
            if rows_ok(v) and assign(k + 1):
                return True
            del vmap[v]
            used.remove(w)
            for src, dst in new_pairs:
                del alpha[src]
                alpha_used.remove(dst)
        return False

    if not assign(0):
        return None
    return Embedding(
        tuple(sorted(vmap.items(), key=lambda p: literal_key(p[0]))),
        _normalise_renaming(alpha),
    )


def can_embed(g: FormulaGraph, h: FormulaGraph) -> bool:
    return find_embedding(g, h) is not None


def is_isomorphic(g: FormulaGraph, h: FormulaGraph) -> bool:
    """Mutual embeddability decides isomorphism."""
    if g.order != h.order or g.edge_count != h.edge_count:
        return False
    return can_embed(g, h) and can_embed(h, g)


# ---------------------------------------------------------------------------
# Canonical forms


_CANONICAL_MAX_ORDER = 9


def _term_token(t: Term, var_index: dict[Var, int]) -> tuple:
    if isinstance(t, Const):
        return ("c", t.sort, t.name)
    return ("v", t.sort, var_index[t])


def canonical_key(g: FormulaGraph) -> str:
    """Canonical byte string: equal keys iff graphs are isomorphic.

    Exact permutation minimisation, intended for graphs of order <= 9;
    variables are renamed to first-occurrence indices per sort along each
    vertex permutation and the least serialisation wins.
    """
    if g.order > _CANONICAL_MAX_ORDER:
        raise EnumerationLimit(
            f"canonical form limited to order {_CANONICAL_MAX_ORDER}, got {g.order}"
        )
    verts = g.sorted_vertices
    orig_index = {v: i for i, v in enumerate(verts)}
    best = None
    for perm in itertools.permutations(range(len(verts))):
        var_index: dict[Var, int] = {}
        counters: dict[str, int] = {}
        tokens = []
        for i in perm:
            lit = verts[i]
            for var in literal_vars(lit):
                if var not in var_index:
                    counters[var.sort] = counters.get(var.sort, 0)
                    var_index[var] = counters[var.sort]
                    counters[var.sort] += 1
            sig = _signature(lit)
            tokens.append((sig, tuple(_term_token(t, var_index) for t in _literal_terms(lit))))
        pos = {v: rank for rank, v in enumerate(perm)}
        edge_tokens = tuple(
            (rel, tuple(sorted(tuple(pos[orig_index[l]] for l in row) for row in rows)))
            for rel, rows in g.edges
        )
        token = (len(verts), g.edge_count, tuple(tokens), edge_tokens)
        if best is None or token < best:
            best = token
    if best is None:
        best = (0, 0, (), ())
    return repr(best)


def enumerate_graphs(
    alphabet: Alphabet,
    order: int,
    include_equalities: bool = False,
    class_ceiling: int = 20000,
) -> list[FormulaGraph]:
    """One representative per isomorphism class of the given exact order.

    Uses the bounded variable pool (order times the maximum predicate
    arity, per sort) that makes the class count finite.  Deterministic
    output, sorted by canonical key.  Raises :class:`EnumerationLimit` when
    the search would exceed ``class_ceiling`` candidate graphs.
    """
    if order < 0:
        raise GraphError("order must be non-negative")
    if order == 0:
        return [EMPTY_GRAPH]

    slot_width = alphabet.max_predicate_arity()
    if include_equalities:
        slot_width = max(slot_width, 2)
    pool_size = order * slot_width
    terms_by_sort: dict[str, list[Term]] = {}
    for si, sort in enumerate(alphabet.sorts):
        terms: list[Term] = [Const(c, sort) for c in alphabet.constants.get(sort, ())]
        terms += [Var(f"v{si}_{i}", sort) for i in range(pool_size)]
        terms_by_sort[sort] = terms

    literal_pool: list[Literal] = []
    for pred, argsorts in alphabet.predicates.items():
        for args in itertools.product(*(terms_by_sort[s] for s in argsorts)):
            literal_pool.append(Literal(PredAtom(pred, args)))
            literal_pool.append(Literal(PredAtom(pred, args), positive=False))
    if include_equalities:
        for sort in alphabet.sorts:
            for lhs, rhs in itertools.product(terms_by_sort[sort], repeat=2):
                literal_pool.append(Literal(EqAtom(lhs, rhs)))
                literal_pool.append(Literal(EqAtom(lhs, rhs), positive=False))
    literal_pool.sort(key=literal_key)

    reps: dict[str, FormulaGraph] = {}
    candidates = 0
    for vs in itertools.combinations(literal_pool, order):
        vset = frozenset(vs)
        if len(vset) < order:
            continue
        pred_vs = sorted((v for v in vs if not v.is_equality), key=literal_key)
        families = []
        for rel, arity in alphabet.second_order.items():
            rows = list(itertools.product(pred_vs, repeat=arity))
            families.append((rel, rows))

        def row_subsets(rows):
            for n in range(len(rows) + 1):
                yield from itertools.combinations(rows, n)

        for choice in itertools.product(*(list(row_subsets(rows)) for _, rows in families)):
            candidates += 1
            if candidates > class_ceiling:
                raise EnumerationLimit(
                    f"enumeration exceeded ceiling of {class_ceiling} candidates"
                )
            edges = {rel: list(rows) for (rel, _), rows in zip(families, choice) if rows}
            graph = FormulaGraph(vset, edges)
            reps.setdefault(canonical_key(graph), graph)

    return [reps[k] for k in sorted(reps)]


def enumerate_graphs_up_to(
    alphabet: Alphabet,
    max_order: int,
    include_equalities: bool = False,
    class_ceiling: int = 20000,
) -> list[FormulaGraph]:
    """Representatives of every isomorphism class of order <= ``max_order``."""
    out: list[FormulaGraph] = []
    for n in range(max_order + 1):
        out.extend(enumerate_graphs(alphabet, n, include_equalities, class_ceiling))
    return out
