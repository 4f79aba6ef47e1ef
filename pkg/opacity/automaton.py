# stateless functions over the system model

import logging
from collections.abc import Iterable, Sequence

import numpy as np

from opacity.data_models import Alphabet, Automaton, Event, StateSet, ValidationReport
from opacity.errors import Diagnostic, InputError

logger = logging.getLogger(__name__)


def build_automaton(
    states: Sequence[str],
    events: Iterable[Event] | Alphabet,
    transitions: Iterable[tuple[str, str, str]],
    initial: Iterable[str],
    secret: Iterable[str] = (),
    marked: Iterable[str] | None = None,
) -> Automaton:
    """
    Checked constructor from plain lists.

    Rejects duplicate state names, duplicate (state, event) transitions,
    references to undeclared states or events and an empty initial set,
    reporting every problem at once.
    """
    alphabet = events if isinstance(events, Alphabet) else Alphabet(tuple(events))
    problems: list[Diagnostic] = []

    declared: set[str] = set()
    for i, name in enumerate(states):
        if not name:
            problems.append(Diagnostic(f"states[{i}]", "state name must be non-empty"))
        elif name in declared:
            problems.append(Diagnostic(f"states[{i}]", f"duplicate state {name!r}"))
        declared.add(name)

    table: dict[tuple[str, str], str] = {}
    for i, (source, event, target) in enumerate(transitions):
        where = f"transitions[{i}]"
        for role, name in (("from", source), ("to", target)):
            if name not in declared:
                problems.append(Diagnostic(where, f"undeclared {role} state {name!r}"))
        if event not in alphabet:
            problems.append(Diagnostic(where, f"undeclared event {event!r}"))
        if (source, event) in table:
            problems.append(
                Diagnostic(where, f"nondeterministic: second transition from {source!r} on {event!r}")
            )
            continue
        table[(source, event)] = target

    def checked(label: str, names: Iterable[str]) -> StateSet:
        members = frozenset(names)
        for name in sorted(members - declared):
            problems.append(Diagnostic(label, f"undeclared state {name!r}"))
        return members

    initial_set = checked("initial", initial)
    if not initial_set:
        problems.append(Diagnostic("initial", "at least one initial state is required"))
    secret_set = checked("secret", secret)
    marked_set = None if marked is None else checked("marked", marked)

    if problems:
        raise InputError("invalid automaton", problems)
    return Automaton(
        states=tuple(states),
        alphabet=alphabet,
        transitions=table,
        initial=initial_set,
        secret=secret_set,
        marked=marked_set,
    )


def validate(a: Automaton) -> ValidationReport:
    """Report determinism, liveness and referential integrity without raising."""
    declared = set(a.states)
    dangling: list[Diagnostic] = []
    deterministic = True

    if len(declared) != len(a.states):
        deterministic = False
        dangling.append(Diagnostic("states", "duplicate state names"))
    for (source, event), target in a.transitions.items():
        where = f"{source} --{event}--> {target}"
        if source not in declared:
            dangling.append(Diagnostic(where, f"undeclared source {source!r}"))
        if target not in declared:
            dangling.append(Diagnostic(where, f"undeclared target {target!r}"))
        if event not in a.alphabet:
            dangling.append(Diagnostic(where, f"undeclared event {event!r}"))
    for label, members in (("initial", a.initial), ("secret", a.secret), ("marked", a.marked or ())):
        for name in sorted(set(members) - declared):
            dangling.append(Diagnostic(label, f"undeclared state {name!r}"))
    if not a.initial:
        dangling.append(Diagnostic("initial", "initial set is empty"))

    dead = frozenset(x for x in a.states if not a.outgoing(x))
    return ValidationReport(
        deterministic=deterministic,
        live=not dead,
        dead_states=dead,
        dangling_references=dangling,
    )


def project(alphabet: Alphabet, s: Iterable[str]) -> tuple[str, ...]:
    """Natural projection: erase unobservable events, keep order."""
    observed = []
    for event in s:
        if event not in alphabet:
            raise InputError(f"unknown event {event!r}")
        if alphabet.is_observable(event):
            observed.append(event)
    return tuple(observed)


def run(a: Automaton, x: str, s: Iterable[str]) -> str | None:
    """Extended transition function; None when some step is undefined."""
    if x not in a.state_index:
        raise InputError(f"undeclared state {x!r}")
    current = x
    for event in s:
        current = a.transitions.get((current, event))
        if current is None:
            return None
    return current


def to_mask(a: Automaton, q: Iterable[str]) -> np.ndarray:
    mask = np.zeros(len(a.states), dtype=bool)
    index = a.state_index
    for x in q:
        mask[index[x]] = True
    return mask


def from_mask(a: Automaton, mask: np.ndarray) -> StateSet:
    return frozenset(a.states[i] for i in np.flatnonzero(mask))
