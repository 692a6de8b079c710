"""Formula graphs: translation to sentences, embeddings, isomorphism and
bounded enumeration up to isomorphism."""

from abdukit import (
    Alphabet,
    canonical_key,
    enumerate_graphs,
    enumerate_graphs_up_to,
    enumerate_subgraphs,
    find_embedding,
    is_isomorphic,
    is_subgraph,
    logically_implies,
    sent_of,
    serialize,
)
from abdukit.fixtures import PLANT_ALPHABET, plant_fixture

fx = plant_fixture()
g0, g1, g2 = fx.graphs["g0"], fx.graphs["g1"], fx.graphs["g2"]

print("== The three plant graphs ==")
for name, g in fx.graphs.items():
    print(f"  {name}: order {g.order}, edges {g.edge_count}")

print()
print("== Translation to sentences ==")
print("sent(g2) =", serialize(sent_of(g2, PLANT_ALPHABET)))

print()
print("== Subgraphs and embeddings ==")
print("g1 subgraph of g0:", is_subgraph(g1, g0))
print("g0 has", len(enumerate_subgraphs(g0)), "subgraphs")
witness = find_embedding(g1, g0)
print("embedding g1 -> g0 found:", witness is not None)
print("its image is a subgraph of g0:", is_subgraph(witness.apply(g1), g0))

print()
print("== Embedding entails implication, backwards ==")
print(
    "sent(g0) implies sent(g1) in the fixture class:",
    logically_implies([sent_of(g0, PLANT_ALPHABET)], [sent_of(g1, PLANT_ALPHABET)], fx.cls),
)

print()
print("== Isomorphism is mutual embeddability ==")
print("g1 ~ g2:", is_isomorphic(g1, g2))
print("canonical keys equal:", canonical_key(g1) == canonical_key(g2))

print()
print("== Enumeration up to isomorphism ==")
mono = Alphabet(
    sorts=("obj",),
    constants={"obj": ("0",)},
    predicates={"p": ("obj",)},
    second_order={"R": 2},
)
for order in (0, 1, 2):
    reps = enumerate_graphs(mono, order)
    print(f"  classes of order {order}: {len(reps)}")
print("  total up to order 2:", len(enumerate_graphs_up_to(mono, 2)))
