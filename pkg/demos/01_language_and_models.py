"""Walk through the two-level language and its finite-structure semantics.

The running scenario is a plant with a faucet F feeding a pipe P: `Hold`
relates a component to a state, `Open` marks an opened component, and the
second-order symbols `Action` and `Cause-Effect` connect literals.
"""

from abdukit import (
    class_from_theory,
    logically_implies,
    parse_formula,
    parse_sentence,
    satisfies,
    serialize,
    valid_in,
    well_sorted,
    StructureClass,
)
from abdukit.fixtures import (
    PLANT_ALPHABET,
    PLANT_RULE_TEXT,
    plant_candidate_structures,
    plant_structure,
)

print("== Parsing and sorts ==")
phi = parse_formula("Hold(F, No) & Open(F) -> Hold(F, High)", PLANT_ALPHABET)
print("parsed and expanded:", serialize(phi))

bad = parse_formula("Hold(F, No)", PLANT_ALPHABET)
print("well-sorted:", bool(well_sorted(bad, PLANT_ALPHABET)))

print()
print("== Satisfaction in the running structure ==")
m = plant_structure()
for text in ("Hold(P, High)", "Open(P)", "exists x:comp . Hold(x:comp, High)"):
    value = satisfies(m, parse_sentence(text, PLANT_ALPHABET))
    print(f"  {text:42} -> {value}")

print()
print("== Second-order features ==")
action = parse_sentence(
    "exists X . exists Y . exists Z . Action(X, Y, Z)", PLANT_ALPHABET
)
print("  some Action row exists       ->", satisfies(m, action))
pinned = parse_sentence("exists X . (X == Hold(F, No)) & X", PLANT_ALPHABET)
print("  Hold(F, No) is a true literal ->", satisfies(m, pinned))

print()
print("== A theory restricting the class ==")
rule = parse_sentence(PLANT_RULE_TEXT, PLANT_ALPHABET)
print("rule:", PLANT_RULE_TEXT[:60] + "...")
candidates = StructureClass(tuple(plant_candidate_structures()))
cls = class_from_theory(candidates, [rule])
print(f"candidates: {len(candidates)}, kept by the rule: {len(cls)}")
print("rule valid in the running structure:", valid_in(m, rule))

print()
print("== Logical implication over the restricted class ==")
gamma = [parse_sentence("Hold(F, High) & Hold(P, High)", PLANT_ALPHABET)]
delta = [parse_sentence("Hold(P, High)", PLANT_ALPHABET)]
print("conjunction implies conjunct:", logically_implies(gamma, delta, cls))
other = [parse_sentence("Hold(P, No)", PLANT_ALPHABET)]
print("but not an unrelated state:", logically_implies(delta, other, cls))
