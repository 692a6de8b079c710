"""Machine-check the halting and convergence guarantees by exhausting every
legal dialogue over the desk-scale fixtures."""

from abdukit import ProtocolConfig, verify_convergence, verify_halting
from abdukit.fixtures import three_pred_fixture, two_pred_fixture
from abdukit.harness import PreconditionError

fx_h = two_pred_fixture()
fx_g = three_pred_fixture()

print("== Halting ==")
cfg = ProtocolConfig(kind="Basic", property_mode="PropH", pool=fx_h.pool)
print("Basic over sentence classes (finite class of 4 structures):")
print(" ", verify_halting(cfg).summary())

for kind in ("Basic", "Simple"):
    cfg = ProtocolConfig(kind=kind, property_mode="PropG", pool=fx_g.pool, size_bound=2)
    print(f"{kind} over graph classes with size bound 2:")
    print(" ", verify_halting(cfg).summary())

print()
print("Unbounded graph dialogues are rejected up front:")
try:
    verify_halting(ProtocolConfig(kind="Basic", property_mode="PropG", pool=fx_g.pool))
except PreconditionError as exc:
    print("  PreconditionError:", exc)

print()
print("== Convergence ==")
cfg = ProtocolConfig(kind="Basic", property_mode="PropG", pool=fx_g.pool, size_bound=3)
print("Basic, every non-empty target subset of the 4-graph pool:")
print(" ", verify_convergence(cfg).summary())

cfg = ProtocolConfig(kind="Simple", property_mode="PropH", pool=fx_h.pool)
print("Simple, singleton targets over the 8-hypothesis pool:")
print(" ", verify_convergence(cfg, singletons_only=True).summary())

print()
print("Simple towards a two-element target set fails, with a witness:")
cfg = ProtocolConfig(kind="Simple", property_mode="PropG", pool=fx_g.pool)
from abdukit.hypotheses import graph_item_key

target = (graph_item_key(fx_g.graphs["g1"]), graph_item_key(fx_g.graphs["g2"]))
report = verify_convergence(cfg, targets=[target])
print(" ", report.summary())
for instance, detail in report.failures:
    print(f"  {instance}: {detail}")
