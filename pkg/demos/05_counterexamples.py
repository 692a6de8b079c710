"""The negative side of the theory: dialogues that never halt and targets
that cannot be converged to.

The infinite families live on chain graphs: p-literals arranged in an
R-cycle whose length separates every member from every other, so a user
can keep rejecting candidates forever.  The finite examples show why the
simple protocol cannot converge towards two-element target sets and why
each half of its conditions is needed.
"""

from abdukit import counterexample_prefix, reproduce_non_convergence, satisfies
from abdukit.harness import (
    FAMILY_IDS,
    NON_CONVERGENCE_IDS,
    cycle_structure,
    family_graph,
    family_sentence,
)
from abdukit.graphs import can_embed

print("== Chain graphs ==")
for n in range(3):
    g = family_graph(n)
    print(f"  chain {n}: order {g.order}, cycle length {g.edge_count}")

print()
print("Chains do not embed into each other (3x3 check):")
for i in range(3):
    row = " ".join("x" if can_embed(family_graph(i), family_graph(j)) else "."
                   for j in range(3))
    print(f"  {i}: {row}")

print()
print("Finite cycle witnesses separate the chain sentences:")
m = cycle_structure(2)
print("  witness 2 satisfies chain 2:", satisfies(m, family_sentence(2)))
print("  witness 2 satisfies chain 1:", satisfies(m, family_sentence(1)))

print()
print("== Infinite dialogue prefixes (10 turns each) ==")
for family in FAMILY_IDS:
    prefix = counterexample_prefix(family, 10)
    print(" ", prefix.summary())

print()
print("== Non-convergence examples ==")
for example_id in NON_CONVERGENCE_IDS:
    report = reproduce_non_convergence(example_id)
    print(f"  {example_id}: {'all claims hold' if report.passed else report.failures}")
