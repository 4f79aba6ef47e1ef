import logging
from collections import deque

from opacity.data_models import Automaton, PatternSpec, Property, Verdict, product_state_name
from opacity.errors import Diagnostic, InputError
from opacity.verifier import InstantWindow, require_live, verify_instant, verify_trajectory

logger = logging.getLogger(__name__)

DUMP_STATE = "dump"


def complete_pattern_dfa(p: PatternSpec) -> PatternSpec:
    """Route every undefined transition into a fresh unmarked, absorbing dump state."""
    if p.total:
        return p
    dfa = p.dfa
    dump = DUMP_STATE
    while dump in dfa.state_index:
        dump += "_"
    events = dfa.alphabet.names
    transitions = dict(dfa.transitions)
    for x in dfa.states:
        for event in events:
            transitions.setdefault((x, event), dump)
    for event in events:
        transitions[(dump, event)] = dump
    completed = Automaton(
        states=dfa.states + (dump,),
        alphabet=dfa.alphabet,
        transitions=transitions,
        initial=dfa.initial,
        secret=dfa.secret,
        marked=dfa.marked,
    )
    return PatternSpec(completed)


def product(a: Automaton, p: PatternSpec) -> Automaton:
    """
    Reachable part of G × G_Ω; a product state is secret exactly when its
    pattern component is marked. Observability comes from the system.
    """
    system_events = set(a.alphabet.names)
    pattern_events = set(p.dfa.alphabet.names)
    if system_events != pattern_events:
        problems = [Diagnostic("events", f"event {e!r} missing from the pattern") for e in sorted(system_events - pattern_events)]
        problems += [Diagnostic("events", f"event {e!r} is not a system event") for e in sorted(pattern_events - system_events)]
        raise InputError("pattern alphabet must equal the system alphabet", problems)
    if not p.total:
        raise InputError("product needs a total pattern DFA; complete it first")

    start = [(x, p.initial) for x in a.ordered(a.initial)]
    names = {pair: product_state_name(*pair) for pair in start}
    order = list(start)
    transitions: dict[tuple[str, str], str] = {}
    queue = deque(start)
    while queue:
        x, y = queue.popleft()
        source = names[(x, y)]
        for event, x_next in a.outgoing(x):
            pair = (x_next, p.dfa.transitions[(y, event)])
            if pair not in names:
                names[pair] = product_state_name(*pair)
                order.append(pair)
                queue.append(pair)
            transitions[(source, event)] = names[pair]

    secret = frozenset(names[pair] for pair in order if pair[1] in p.marked)
    logger.debug("product built: %d states, %d secret", len(order), len(secret))
    return Automaton(
        states=tuple(names[pair] for pair in order),
        alphabet=a.alphabet,
        transitions=transitions,
        initial=frozenset(names[pair] for pair in start),
        secret=secret,
    )


def _reduce(a: Automaton, p: PatternSpec) -> Automaton:
    require_live(a)
    return product(a, complete_pattern_dfa(p))


def verify_pattern_instant(
    a: Automaton,
    p: PatternSpec,
    k: int,
    window: InstantWindow = InstantWindow.AUTO,
    cap: int | None = None,
) -> Verdict:
    return verify_instant(_reduce(a, p), k, window=window, cap=cap, prop=Property.PATTERN_INSTANT)


def verify_pattern_trajectory(a: Automaton, p: PatternSpec, k: int, cap: int | None = None) -> Verdict:
    return verify_trajectory(_reduce(a, p), k, cap=cap, prop=Property.PATTERN_TRAJECTORY)
