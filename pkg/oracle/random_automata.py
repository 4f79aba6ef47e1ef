import random
from dataclasses import dataclass

from opacity.automaton import build_automaton
from opacity.data_models import Alphabet, Automaton, Event, PatternSpec
from opacity.errors import Diagnostic, InputError


def _check_fraction(problems: list[Diagnostic], name: str, value: float) -> None:
    if not 0.0 <= value <= 1.0:
        problems.append(Diagnostic(name, f"must lie in [0, 1], got {value}"))


@dataclass(frozen=True)
class GeneratorParams:
    state_count: int
    event_count: int
    observable_fraction: float = 0.5
    secret_fraction: float = 0.3
    transition_density: float = 0.5
    seed: int = 0
    require_live: bool = True
    initial_fraction: float = 0.0

    def __post_init__(self):
        problems: list[Diagnostic] = []
        if self.state_count < 1:
            problems.append(Diagnostic("state_count", f"must be positive, got {self.state_count}"))
        if self.event_count < 1:
            problems.append(Diagnostic("event_count", f"must be positive, got {self.event_count}"))
        for name in ("observable_fraction", "secret_fraction", "transition_density", "initial_fraction"):
            _check_fraction(problems, name, getattr(self, name))
        if not -(2**63) <= self.seed < 2**64:
            problems.append(Diagnostic("seed", "must fit in 64 bits"))
        if self.require_live and self.transition_density == 0:
            problems.append(Diagnostic("transition_density", "a live automaton needs a positive density"))
        if problems:
            raise InputError("infeasible generator parameters", problems)


def generate_random(params: GeneratorParams) -> Automaton:
    """
    Seeded random deterministic automaton over states "0".. and events "e0"..

    Every (state, event) pair gets a transition with probability
    transition_density. State "0" is always initial. With require_live, a
    state left without transitions gets one on a random event.
    """
    rng = random.Random(params.seed)
    states = [str(i) for i in range(params.state_count)]
    events = [Event(f"e{j}", rng.random() < params.observable_fraction) for j in range(params.event_count)]
    initial = ["0"] + [x for x in states[1:] if rng.random() < params.initial_fraction]
    secret = [x for x in states if rng.random() < params.secret_fraction]

    transitions: list[tuple[str, str, str]] = []
    for x in states:
        outgoing = [(x, e.name, rng.choice(states)) for e in events if rng.random() < params.transition_density]
        if not outgoing and params.require_live:
            outgoing = [(x, rng.choice(events).name, rng.choice(states))]
        transitions.extend(outgoing)
    return build_automaton(states, events, transitions, initial, secret)


def generate_random_pattern(
    alphabet: Alphabet,
    state_count: int,
    marked_fraction: float = 0.3,
    transition_density: float = 0.5,
    seed: int = 0,
) -> PatternSpec:
    """Seeded random, possibly partial, pattern DFA over states "p0".. with "p0" initial."""
    problems: list[Diagnostic] = []
    if state_count < 1:
        problems.append(Diagnostic("state_count", f"must be positive, got {state_count}"))
    _check_fraction(problems, "marked_fraction", marked_fraction)
    _check_fraction(problems, "transition_density", transition_density)
    if problems:
        raise InputError("infeasible pattern parameters", problems)

    rng = random.Random(seed)
    states = [f"p{i}" for i in range(state_count)]
    marked = [x for x in states if rng.random() < marked_fraction]
    transitions = [
        (x, name, rng.choice(states))
        for x in states
        for name in alphabet.names
        if rng.random() < transition_density
    ]
    dfa = build_automaton(states, alphabet, transitions, ["p0"], marked=marked)
    return PatternSpec(dfa)
