"""Feedback dialogues: the reasoner presents candidate hypothesis graphs,
the simulated user points out properties towards a target, the reasoner
regenerates, and the dialogue converges."""

import dataclasses

from abdukit import (
    FeedbackSet,
    Presentation,
    ProtocolConfig,
    check_convergence,
    run_dialogue,
    validate_transcript,
)
from abdukit.fixtures import plant_fixture, three_pred_fixture
from abdukit.hypotheses import graph_item_key

fx = plant_fixture()
names = {graph_item_key(g): name for name, g in fx.graphs.items()}


def show(transcript):
    for move in transcript.moves:
        if isinstance(move, Presentation):
            label = ", ".join(sorted(names.get(k, k[:16]) for k in move.items)) or "(empty)"
            print(f"  reasoner presents {{{label}}}")
        else:
            fbs = ", ".join(
                f"{fb.polarity} on order-{getattr(fb.prop, 'order', '?')} class"
                for fb in sorted(move.feedbacks, key=lambda f: f.polarity)
            ) or "(empty)"
            print(f"  user: {fbs}")
    print(f"  -> {transcript.status} ({transcript.reason})")


print("== Basic dialogue towards the whole plant graph ==")
cfg = ProtocolConfig(
    kind="Basic", property_mode="PropG", pool=fx.pool,
    target=(graph_item_key(fx.graphs["g0"]),),
)
transcript = run_dialogue(cfg, fuel=40)
show(transcript)
print("  converges:", bool(check_convergence(transcript, cfg.target)))
print("  replay validates:", bool(validate_transcript(transcript.moves, cfg)))

print()
print("== Simple dialogue with a size bound, towards one small graph ==")
fx3 = three_pred_fixture()
target = graph_item_key(fx3.graphs["g1"])
cfg3 = ProtocolConfig(
    kind="Simple", property_mode="PropG", pool=fx3.pool, size_bound=3,
    target=(target,),
)
names.update({graph_item_key(g): n for n, g in fx3.graphs.items()})
t3 = run_dialogue(cfg3, fuel=20)
show(t3)
print("  last set is the target's class:",
      t3.moves[-1].items == frozenset({target}))

print()
print("== The same moves validate under the weaker protocols ==")
for kind in ("Basic", "UFBD"):
    relaxed = dataclasses.replace(cfg3, kind=kind)
    print(f"  as {kind}: {bool(validate_transcript(t3.moves, relaxed))}")
