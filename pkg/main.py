import argparse
import json
import logging
import sys

from opacity import config
from opacity.automaton import validate
from opacity.data_models import format_observation, sorted_states
from opacity.errors import OpacityError, ResourceError
from opacity.indicator import full_indicator_sequence, indicator_sequence, n_k_set, non_indicator_set
from opacity.model_io import (
    dump_model,
    format_state_set,
    indicator_frame,
    load_model,
    load_pattern,
    observer_dot,
    save_model,
    verdict_json,
)
from opacity.observer import build_observer
from opacity.pattern import complete_pattern_dfa, product, verify_pattern_instant, verify_pattern_trajectory
from opacity.verifier import (
    MAX_K,
    InstantWindow,
    require_live,
    verify_current_state_opacity,
    verify_instant,
    verify_trajectory,
)
from oracle.campaign import CAMPAIGN_PROPERTIES, DifferentialCampaign, disagreements
from oracle.random_automata import GeneratorParams, generate_random

logger = logging.getLogger(__name__)

EXIT_HOLDS = 0
EXIT_VIOLATED = 1
EXIT_INPUT = 2
EXIT_RESOURCE = 3


def _k_value(text: str) -> int:
    try:
        k = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"K must be an integer, got {text!r}")
    if not 0 <= k <= MAX_K:
        raise argparse.ArgumentTypeError(f"K must lie in [0, {MAX_K}]")
    return k


def _report(verdict, as_json: bool) -> int:
    if as_json:
        print(verdict_json(verdict))
    else:
        print(verdict.summary())
        if verdict.clamped_from is not None:
            print(f"  K={verdict.clamped_from} lies beyond the saturation bound; the verdict is that of every larger K")
    return EXIT_HOLDS if verdict.holds else EXIT_VIOLATED


def cmd_validate(args) -> int:
    a = load_model(args.model)
    report = validate(a)
    print(f"deterministic: {'yes' if report.deterministic else 'no'}")
    print(f"live:          {'yes' if report.live else 'no'}")
    if report.dead_states:
        print(f"dead states:   {format_state_set(report.dead_states)}")
    for d in report.dangling_references:
        print(f"dangling:      {d}")
    print(json.dumps(report.to_dict()))
    return EXIT_HOLDS if report.valid and report.live else EXIT_VIOLATED


def cmd_verify(args, parser) -> int:
    if args.property != "cso" and args.k is None:
        parser.error(f"--k is required for --property {args.property}")
    a = load_model(args.model)
    if args.property == "instant":
        verdict = verify_instant(a, args.k, window=InstantWindow(args.window))
    elif args.property == "trajectory":
        verdict = verify_trajectory(a, args.k)
    else:
        verdict = verify_current_state_opacity(a)
    return _report(verdict, args.json)


def cmd_pattern_verify(args) -> int:
    a = load_model(args.model)
    p = load_pattern(args.pattern)
    if args.dump_product:
        require_live(a)
        save_model(product(a, complete_pattern_dfa(p)), args.dump_product, comment=f"{args.model} x {args.pattern}")
    if args.property == "instant":
        verdict = verify_pattern_instant(a, p, args.k, window=InstantWindow(args.window))
    else:
        verdict = verify_pattern_trajectory(a, p, args.k)
    return _report(verdict, args.json)


def cmd_observer(args) -> int:
    a = load_model(args.model)
    obs = build_observer(a)
    if args.dot:
        sys.stdout.write("".join(observer_dot(obs, name=args.model)))
        return EXIT_HOLDS
    ids = {q: f"q{i}" for i, q in enumerate(obs.states)}
    for q in obs.states:
        print(f"{ids[q]} {format_state_set(q)}  via {format_observation(obs.observation_of(q))}")
        for event in obs.events:
            target = obs.successor(q, event)
            if target is not None:
                print(f"  --{event}--> {ids[target]}")
    return EXIT_HOLDS


def cmd_indicators(args) -> int:
    a = load_model(args.model)
    require_live(a)
    seq = full_indicator_sequence(a) if args.upto is None else indicator_sequence(a, args.upto)
    table = indicator_frame(seq)
    non_indicator = non_indicator_set(a)
    nk = None if args.k is None else n_k_set(a, args.k, non_indicator)
    if args.json:
        doc = {
            "indicators": [sorted_states(q) for q in seq.sets],
            "cycle_start": seq.cycle_start,
            "cycle_length": seq.cycle_length,
            "non_indicator": sorted_states(non_indicator),
        }
        if nk is not None:
            doc["k"] = args.k
            doc["n_k"] = sorted_states(nk)
        print(json.dumps(doc, ensure_ascii=False))
        return EXIT_HOLDS
    print(table.to_string(index=False))
    if seq.has_cycle:
        print(f"cycle: starts at {seq.cycle_start}, period {seq.cycle_length}")
    print(f"N = {format_state_set(non_indicator)}")
    if nk is not None:
        print(f"N_{args.k} = {format_state_set(nk)}")
    return EXIT_HOLDS


def cmd_gen_random(args) -> int:
    params = GeneratorParams(
        state_count=args.states,
        event_count=args.events,
        observable_fraction=args.observable_fraction,
        secret_fraction=args.secret_fraction,
        transition_density=args.density,
        seed=args.seed,
        require_live=not args.allow_dead,
        initial_fraction=args.initial_fraction,
    )
    a = generate_random(params)
    comment = f"generated: states={args.states} events={args.events} seed={args.seed}"
    if args.output:
        save_model(a, args.output, comment=comment)
        print(f"Model written to {args.output}")
    else:
        sys.stdout.write(dump_model(a, comment=comment))
    return EXIT_HOLDS


def cmd_campaign(args) -> int:
    campaign = DifferentialCampaign(
        first_seed=args.first_seed,
        max_states=args.max_states,
        max_events=args.max_events,
        ks=tuple(args.k),
        properties=tuple(args.properties),
    )
    df = campaign.run_campaign(num_rounds=args.rounds)
    if args.output:
        df.to_csv(args.output, index=False)
        print(f"Campaign completed. Results saved to {args.output}")
    else:
        sys.stdout.write(df.to_csv(index=False))

    bad = disagreements(df)
    print("\nSummary:", file=sys.stderr)
    print(df.groupby("property")[["agreement", "bounded"]].sum().to_string(), file=sys.stderr)
    return EXIT_HOLDS if bad.empty else EXIT_VIOLATED


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="preopa", description="Verify pre-opacity of partially observed automata.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check determinism, liveness and references")
    p.add_argument("model")

    p = sub.add_parser("verify", help="verify a state-based property")
    p.add_argument("model")
    p.add_argument("--property", choices=["instant", "trajectory", "cso"], required=True)
    p.add_argument("--k", type=_k_value)
    p.add_argument("--window", choices=[w.value for w in InstantWindow], default=InstantWindow.AUTO.value)
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("pattern-verify", help="verify a pattern property through the product")
    p.add_argument("model")
    p.add_argument("--pattern", required=True)
    p.add_argument("--property", choices=["instant", "trajectory"], required=True)
    p.add_argument("--k", type=_k_value, required=True)
    p.add_argument("--window", choices=[w.value for w in InstantWindow], default=InstantWindow.AUTO.value)
    p.add_argument("--dump-product", metavar="FILE")
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("observer", help="print the observer")
    p.add_argument("model")
    p.add_argument("--dot", action="store_true")

    p = sub.add_parser("indicators", help="print the indicator sets, N and N_K")
    p.add_argument("model")
    p.add_argument("--upto", type=_k_value)
    p.add_argument("--k", type=_k_value)
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("gen-random", help="write a seeded random model")
    p.add_argument("--states", type=int, required=True)
    p.add_argument("--events", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--observable-fraction", type=float, default=0.5)
    p.add_argument("--secret-fraction", type=float, default=0.3)
    p.add_argument("--density", type=float, default=0.5)
    p.add_argument("--initial-fraction", type=float, default=0.0)
    p.add_argument("--allow-dead", action="store_true")
    p.add_argument("--output", metavar="FILE")

    p = sub.add_parser("campaign", help="compare the verifier with the brute-force oracle")
    p.add_argument("--rounds", type=int, default=200)
    p.add_argument("--first-seed", type=int, default=0)
    p.add_argument("--max-states", type=int, default=5)
    p.add_argument("--max-events", type=int, default=4)
    p.add_argument("--k", type=_k_value, nargs="+", default=[0, 1, 2, 3])
    p.add_argument("--properties", nargs="+", choices=list(CAMPAIGN_PROPERTIES), default=["instant", "trajectory"])
    p.add_argument("--output", metavar="FILE")
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        logging.basicConfig(level=config.log_level(), format="%(levelname)s %(name)s: %(message)s")
        if args.command == "validate":
            return cmd_validate(args)
        if args.command == "verify":
            return cmd_verify(args, parser)
        if args.command == "pattern-verify":
            return cmd_pattern_verify(args)
        if args.command == "observer":
            return cmd_observer(args)
        if args.command == "indicators":
            return cmd_indicators(args)
        if args.command == "gen-random":
            return cmd_gen_random(args)
        return cmd_campaign(args)
    except SystemExit as e:
        return EXIT_INPUT if e.code else EXIT_HOLDS
    except ResourceError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_RESOURCE
    except (OpacityError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
