from __future__ import annotations

import re
from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field
try:
    from enum import StrEnum
except ImportError:  # Python < 3.11
    from enum import Enum

    class StrEnum(str, Enum):
        def __str__(self) -> str:
            return str(self.value)

        __format__ = str.__format__
from functools import cached_property

import numpy as np

from opacity.errors import Diagnostic, InputError

# A set of state identifiers of one host automaton; equality is extensional.
StateSet = frozenset[str]

EMPTY_OBSERVATION = "ε"


def natural_key(name: str):
    """Sort key placing "2" before "10" and "(6,F)" before "(8,H)"."""
    return [int(part) if part.isdigit() else part for part in re.split(r"(\d+)", name)]


def sorted_states(states: Iterable[str]) -> list[str]:
    return sorted(states, key=natural_key)


def format_observation(alpha: Iterable[str]) -> str:
    alpha = list(alpha)
    return " ".join(alpha) if alpha else EMPTY_OBSERVATION


@dataclass(frozen=True)
class Event:
    name: str
    observable: bool


@dataclass(frozen=True)
class Alphabet:
    events: tuple[Event, ...]

    def __post_init__(self):
        problems = []
        seen = set()
        for i, event in enumerate(self.events):
            if not event.name:
                problems.append(Diagnostic(f"events[{i}]", "event name must be non-empty"))
            elif event.name in seen:
                problems.append(Diagnostic(f"events[{i}]", f"duplicate event {event.name!r}"))
            seen.add(event.name)
        if problems:
            raise InputError("invalid alphabet", problems)

    @classmethod
    def of(cls, observable: Iterable[str], unobservable: Iterable[str] = ()) -> Alphabet:
        events = [Event(name, True) for name in observable]
        events += [Event(name, False) for name in unobservable]
        return cls(tuple(events))

    @cached_property
    def names(self) -> tuple[str, ...]:
        return tuple(e.name for e in self.events)

    @cached_property
    def index(self) -> dict[str, int]:
        return {name: i for i, name in enumerate(self.names)}

    @cached_property
    def observable(self) -> tuple[str, ...]:
        return tuple(e.name for e in self.events if e.observable)

    @cached_property
    def unobservable(self) -> tuple[str, ...]:
        return tuple(e.name for e in self.events if not e.observable)

    def is_observable(self, name: str) -> bool:
        return self.events[self.index[name]].observable

    def __contains__(self, name: object) -> bool:
        return name in self.index

    def __len__(self) -> int:
        return len(self.events)


@dataclass(frozen=True)
class Automaton:
    states: tuple[str, ...]
    alphabet: Alphabet
    transitions: Mapping[tuple[str, str], str] = field(repr=False)
    initial: StateSet
    secret: StateSet = frozenset()
    marked: StateSet | None = None

    @cached_property
    def state_index(self) -> dict[str, int]:
        return {name: i for i, name in enumerate(self.states)}

    @cached_property
    def successor_table(self) -> np.ndarray:
        """Dense (|X|, |E|) table of successor indices, -1 where undefined."""
        table = np.full((len(self.states), len(self.alphabet)), -1, dtype=np.int64)
        for (source, event), target in self.transitions.items():
            table[self.state_index[source], self.alphabet.index[event]] = self.state_index[target]
        return table

    @cached_property
    def _outgoing(self) -> dict[str, tuple[tuple[str, str], ...]]:
        out: dict[str, list[tuple[str, str]]] = {x: [] for x in self.states}
        for (source, event), target in self.transitions.items():
            out.setdefault(source, []).append((event, target))
        order = self.alphabet.index
        return {x: tuple(sorted(edges, key=lambda e: order.get(e[0], len(order)))) for x, edges in out.items()}

    def outgoing(self, state: str) -> tuple[tuple[str, str], ...]:
        """(event, target) pairs leaving `state`, in alphabet order."""
        return self._outgoing.get(state, ())

    def successors(self, state: str) -> frozenset[str]:
        return frozenset(target for _, target in self.outgoing(state))

    @property
    def has_unobservable(self) -> bool:
        return bool(self.alphabet.unobservable)

    def ordered(self, q: Iterable[str]) -> list[str]:
        """Members of q in declaration order."""
        members = set(q)
        return [x for x in self.states if x in members]


@dataclass(frozen=True)
class PatternSpec:
    """A DFA whose marked language is the secret sequence pattern Ω."""

    dfa: Automaton

    def __post_init__(self):
        problems = []
        if len(self.dfa.initial) != 1:
            problems.append(
                Diagnostic("initial", f"a pattern needs exactly one initial state, got {len(self.dfa.initial)}")
            )
        if self.dfa.marked is None:
            problems.append(Diagnostic("marked", "a pattern needs a marked state set"))
        if problems:
            raise InputError("invalid pattern", problems)

    @property
    def initial(self) -> str:
        return next(iter(self.dfa.initial))

    @property
    def marked(self) -> StateSet:
        return self.dfa.marked

    @cached_property
    def total(self) -> bool:
        return len(self.dfa.transitions) == len(self.dfa.states) * len(self.dfa.alphabet)


def product_state_name(system_state: str, pattern_state: str) -> str:
    return f"({system_state},{pattern_state})"


@dataclass(frozen=True)
class ValidationReport:
    deterministic: bool
    live: bool
    dead_states: StateSet
    dangling_references: list[Diagnostic] = field(default_factory=list)

    def __post_init__(self):
        if self.live != (not self.dead_states):
            raise ValueError("live must hold exactly when there are no dead states")

    @property
    def valid(self) -> bool:
        return self.deterministic and not self.dangling_references

    def to_dict(self) -> dict:
        return {
            "deterministic": self.deterministic,
            "live": self.live,
            "dead_states": sorted_states(self.dead_states),
            "dangling_references": [str(d) for d in self.dangling_references],
        }


@dataclass(frozen=True)
class Observer:
    states: tuple[StateSet, ...]  # BFS order; states[0] is the initial estimate
    initial: StateSet
    transitions: Mapping[tuple[StateSet, str], StateSet] = field(repr=False)
    events: tuple[str, ...]
    observations: Mapping[StateSet, tuple[str, ...]] = field(repr=False)

    def successor(self, q: StateSet, event: str) -> StateSet | None:
        return self.transitions.get((q, event))

    def observation_of(self, q: StateSet) -> tuple[str, ...]:
        """Canonical (shortest, then declaration-ordered) observation reaching q."""
        return self.observations[q]

    def __len__(self) -> int:
        return len(self.states)


@dataclass(frozen=True)
class IndicatorSequence:
    """ℑ_0 = X_S, ℑ_{n+1} = F(ℑ_n), stored up to the first repeated set."""

    sets: tuple[StateSet, ...]
    cycle_start: int | None = None
    cycle_length: int | None = None

    def __post_init__(self):
        if (self.cycle_start is None) != (self.cycle_length is None):
            raise ValueError("cycle_start and cycle_length must be given together")
        if self.cycle_start is not None:
            if self.cycle_length < 1:
                raise ValueError(f"cycle_length must be positive, got {self.cycle_length}")
            end = self.cycle_start + self.cycle_length
            if end >= len(self.sets) or self.sets[self.cycle_start] != self.sets[end]:
                raise ValueError("cycle metadata does not match the stored sets")

    @property
    def has_cycle(self) -> bool:
        return self.cycle_start is not None

    @property
    def first_repeat(self) -> int | None:
        if not self.has_cycle:
            return None
        return self.cycle_start + self.cycle_length

    def at(self, n: int) -> StateSet:
        if n < 0:
            raise IndexError(f"instant must be non-negative, got {n}")
        if n < len(self.sets):
            return self.sets[n]
        if not self.has_cycle:
            raise IndexError(f"ℑ_{n} lies beyond the computed prefix of length {len(self.sets)}")
        return self.sets[self.cycle_start + (n - self.cycle_start) % self.cycle_length]

    def window(self, k: int) -> range:
        """Instants n >= k whose sets cover every ℑ_n with n >= k."""
        if not self.has_cycle:
            raise ValueError("window needs a detected cycle")
        return range(k, max(k, self.cycle_start) + self.cycle_length)


class Property(StrEnum):
    INSTANT = "instant-pre-opacity"
    TRAJECTORY = "trajectory-pre-opacity"
    CURRENT_STATE = "current-state-opacity"
    PATTERN_INSTANT = "pattern-instant"
    PATTERN_TRAJECTORY = "pattern-trajectory"
    K_STEP = "k-step-opacity"


@dataclass(frozen=True)
class Witness:
    alpha: tuple[str, ...]
    n: int
    estimate: StateSet

    def to_dict(self) -> dict:
        return {
            "alpha": list(self.alpha),
            "n": self.n,
            "estimate": sorted_states(self.estimate),
        }


@dataclass(frozen=True)
class Verdict:
    property: Property
    k: int | None
    holds: bool
    witness: Witness | None = None
    bounded: bool = False
    clamped_from: int | None = None

    def __post_init__(self):
        if self.holds and self.witness is not None:
            raise ValueError("a verdict that holds cannot carry a witness")
        if not self.holds and self.witness is None:
            raise ValueError("a violated verdict needs a witness")

    def to_dict(self) -> dict:
        return {
            "property": str(self.property),
            "k": self.k,
            "holds": self.holds,
            "witness": self.witness.to_dict() if self.witness else None,
            "bounded": self.bounded,
            "clamped_from": self.clamped_from,
        }

    def summary(self) -> str:
        k = "" if self.k is None else f" (K={self.k})"
        if self.holds:
            return f"{self.property}{k}: holds"
        w = self.witness
        return (
            f"{self.property}{k}: violated after observing {format_observation(w.alpha)}"
            f" (n={w.n}, estimate={{{', '.join(sorted_states(w.estimate))}}})"
        )
