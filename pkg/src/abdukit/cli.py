"""Command line: simulate dialogues, verify theorem suites, enumerate
graph classes, serve sessions, replay transcripts.

    abdukit simulate --config F [--protocol K] [--mode G|H] [--bound n]
                     [--target F] [--fuel k] [--seed s]
                     [--style canonical|illustrative] [--max-moves m] [--out F]
    abdukit verify   --suite halting|convergence|counterexamples --config F
                     [--fuel k] [--singletons] [--prefix-length k] [--json F]
    abdukit enumerate --alphabet F --max-order n [--exact] [--include-equalities]
    abdukit serve    --port P --state-dir D
    abdukit replay   F

``--style illustrative`` presents up to two fresh candidates per turn and
feeds back each presented candidate's own class, which reproduces the
walkthrough dialogue of the plant fixture; the default canonical style is
the single-candidate, least-fresh-property strategy.  ``--seed`` switches
to a uniformly random walk over the legal moves (reproducible per seed).
"""

from __future__ import annotations

import argparse
import json
import random
import sys

from .dialogue import (
    Transcript,
    check_convergence,
    run_dialogue,
    validate_transcript,
    walkthrough_presenter,
    walkthrough_responder,
)
from .files import (
    FileFormatError,
    alphabet_from_json,
    graph_to_json,
    session_config,
    transcript_moves_from_json,
    transcript_to_json,
)
from .graphs import enumerate_graphs, enumerate_graphs_up_to
from .harness import (
    FAMILY_IDS,
    NON_CONVERGENCE_IDS,
    VerificationReport,
    counterexample_prefix,
    random_walk,
    reproduce_non_convergence,
    verify_convergence,
    verify_halting,
)


def _load_json_file(path: str):
    with open(path) as fh:
        return json.load(fh)


def _emit(payload: dict, out: str | None):
    text = json.dumps(payload, indent=2, sort_keys=True)
    if out:
        with open(out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


# -- subcommands ---------------------------------------------------------------


def cmd_simulate(args) -> int:
    overrides = {}
    if args.protocol:
        overrides["protocol"] = args.protocol
    if args.mode:
        overrides["propertyMode"] = {"G": "PropG", "H": "PropH"}[args.mode]
    if args.bound is not None:
        overrides["bound"] = args.bound
    source = _load_json_file(args.config)
    if args.target:
        target_payload = _load_json_file(args.target)
        overrides["target"] = (
            target_payload["target"] if isinstance(target_payload, dict) else target_payload
        )
    merged_source = {**source, **overrides}
    cfg = session_config(source, enforce_towards=True, overrides=overrides)
    if cfg.target is None and args.seed is None:
        print(
            "simulate needs a target (the simulated user answers towards it); "
            "pass --target or use --seed for a random walk over legal moves",
            file=sys.stderr,
        )
        return 2
    if args.seed is not None:
        transcript = random_walk(cfg, args.fuel, random.Random(args.seed))
    elif args.style == "illustrative":
        transcript = run_dialogue(
            cfg, args.fuel, presenter=walkthrough_presenter,
            responder=walkthrough_responder,
        )
    else:
        transcript = run_dialogue(cfg, args.fuel)
    if args.max_moves is not None and len(transcript.moves) > args.max_moves:
        transcript = Transcript(
            cfg,
            transcript.moves[: args.max_moves],
            "truncated",
            f"max-moves={args.max_moves}",
        )
    _emit(transcript_to_json(transcript, source=merged_source), args.out)
    return 0


def cmd_verify(args) -> int:
    reports = []
    if args.suite in ("halting", "convergence"):
        cfg = session_config(_load_json_file(args.config), enforce_towards=True)
        if args.suite == "halting":
            reports.append(verify_halting(cfg, fuel=args.fuel))
        else:
            reports.append(
                verify_convergence(cfg, singletons_only=args.singletons, fuel=args.fuel)
            )
    elif args.suite == "counterexamples":
        for example_id in NON_CONVERGENCE_IDS:
            reports.append(reproduce_non_convergence(example_id))
        for family in FAMILY_IDS:
            prefix = counterexample_prefix(family, args.prefix_length)
            reports.append(
                VerificationReport(
                    suite=family,
                    instances=prefix.checks,
                    failures=(),
                    wall_time=0.0,
                    notes=(prefix.summary(),),
                )
            )
    else:
        print(f"unknown suite {args.suite!r}", file=sys.stderr)
        return 2

    width = max(len(r.suite) for r in reports)
    for r in reports:
        print(f"{r.suite.ljust(width)}  {'PASS' if r.passed else 'FAIL'}  "
              f"{r.instances:>6} instances  {r.wall_time:7.2f}s")
        for instance, detail in r.failures:
            print(f"  - {instance}: {detail}")
    if args.json:
        _emit({"reports": [r.to_json() for r in reports]}, args.json)
    return 0 if all(r.passed for r in reports) else 1


def cmd_enumerate(args) -> int:
    alphabet = alphabet_from_json(_load_json_file(args.alphabet))
    if args.exact:
        graphs = enumerate_graphs(alphabet, args.max_order, args.include_equalities)
    else:
        graphs = enumerate_graphs_up_to(alphabet, args.max_order, args.include_equalities)
    counts: dict[int, int] = {}
    for g in graphs:
        counts[g.order] = counts.get(g.order, 0) + 1
    _emit(
        {
            "maxOrder": args.max_order,
            "exactOrderOnly": bool(args.exact),
            "classCounts": {str(k): v for k, v in sorted(counts.items())},
            "total": len(graphs),
            "graphs": [graph_to_json(g) for g in graphs],
        },
        args.out,
    )
    return 0


def cmd_serve(args) -> int:
    from .service import serve

    serve(args.port, args.state_dir)
    return 0


def cmd_replay(args) -> int:
    payload = _load_json_file(args.transcript)
    config = payload.get("config", {})
    source = config.get("source")
    if source is None:
        print("transcript has no embedded config.source; cannot rebuild the pool",
              file=sys.stderr)
        return 2
    cfg = session_config(
        source,
        enforce_towards=config.get("towardsEnforced", False),
    )
    moves = transcript_moves_from_json(payload, cfg.pool)
    verdict = validate_transcript(moves, cfg)
    status = payload.get("terminal", {}).get("status")
    print(f"replayed {len(moves)} moves: {'valid' if verdict.ok else 'INVALID'}")
    if not verdict.ok:
        print("violated conditions: " + ", ".join(verdict.violations))
        return 1
    if status == "maximal" and cfg.target:
        transcript = Transcript(cfg, moves, "maximal")
        conv = check_convergence(transcript, cfg.target)
        print(f"convergence: {'converges' if conv.converges else 'fails'}"
              + (f" ({conv.condition})" if conv.condition else ""))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="abdukit")
    sub = parser.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", help="run a dialogue with the simulated user")
    sim.add_argument("--config", required=True, help="session config JSON file")
    sim.add_argument("--protocol", choices=(
        "UFBD", "Basic", "Simple", "SimpleX-BasicF", "BasicX-SimpleF"))
    sim.add_argument("--mode", choices=("G", "H"), help="property mode")
    sim.add_argument("--bound", type=int, help="size bound n for graph feedback")
    sim.add_argument("--target", help="JSON file with the target item list")
    sim.add_argument("--fuel", type=int, default=50, help="maximum rounds")
    sim.add_argument("--seed", type=int, help="random walk over legal moves")
    sim.add_argument("--style", choices=("canonical", "illustrative"),
                     default="canonical")
    sim.add_argument("--max-moves", type=int, help="truncate the transcript")
    sim.add_argument("--out", help="write the transcript JSON here")
    sim.set_defaults(fn=cmd_simulate)

    ver = sub.add_parser("verify", help="run a verification suite")
    ver.add_argument("--suite", required=True,
                     choices=("halting", "convergence", "counterexamples"))
    ver.add_argument("--config", help="session config JSON file")
    ver.add_argument("--fuel", type=int, help="override the derived fuel")
    ver.add_argument("--singletons", action="store_true",
                     help="convergence: singleton targets only")
    ver.add_argument("--prefix-length", type=int, default=6,
                     help="counterexamples: family prefix length")
    ver.add_argument("--json", help="write the JSON report here")
    ver.set_defaults(fn=cmd_verify)

    enum = sub.add_parser("enumerate", help="enumerate graph classes")
    enum.add_argument("--alphabet", required=True, help="alphabet JSON file")
    enum.add_argument("--max-order", type=int, required=True)
    enum.add_argument("--exact", action="store_true",
                      help="only classes of exactly max-order")
    enum.add_argument("--include-equalities", action="store_true")
    enum.add_argument("--out")
    enum.set_defaults(fn=cmd_enumerate)

    srv = sub.add_parser("serve", help="serve the session HTTP API")
    srv.add_argument("--port", type=int, default=8765)
    srv.add_argument("--state-dir", default="./sessions")
    srv.set_defaults(fn=cmd_serve)

    rep = sub.add_parser("replay", help="re-validate a stored transcript")
    rep.add_argument("transcript")
    rep.set_defaults(fn=cmd_replay)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except FileFormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
