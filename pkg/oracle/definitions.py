"""
Brute-force evaluation of the opacity definitions, used only as a test
instrument against the algorithmic verifier.

Nothing here touches the observer, indicator or verifier modules. Runs are
enumerated layer by layer from their definitions; a budget bounds every
enumeration and any truncation marks the verdict as `bounded`.
"""

import logging
from collections import deque
from collections.abc import Hashable, Iterable, Iterator
from dataclasses import dataclass, fields

from opacity.automaton import validate
from opacity.data_models import Automaton, PatternSpec, Property, StateSet, Verdict, Witness
from opacity.errors import InputError, PreconditionError
from oracle.semantics import PatternSecrets, SecretSemantics, StateSecrets

logger = logging.getLogger(__name__)

INSTANT_SLACK = 31

Configs = frozenset[Hashable]


@dataclass(frozen=True)
class OracleBudget:
    max_observation_length: int = 31
    max_instant: int | None = None  # None means K + INSTANT_SLACK
    max_string_length: int = 48

    def __post_init__(self):
        for f in fields(self):
            value = getattr(self, f.name)
            if value is not None and value < 0:
                raise ValueError(f"{f.name} must be non-negative, got {value}")

    def instant_limit(self, k: int) -> int:
        return k + INSTANT_SLACK if self.max_instant is None else self.max_instant


class _Explorer:
    def __init__(self, semantics: SecretSemantics, budget: OracleBudget):
        self.semantics = semantics
        self.budget = budget
        alphabet = semantics.system.alphabet
        self.events = alphabet.names
        self.observable = alphabet.observable
        self.unobservable = alphabet.unobservable
        self.complete = True

    def _image(self, configs: Iterable[Hashable], events: Iterable[str]) -> set:
        events = tuple(events)
        out = set()
        for c in configs:
            for event in events:
                nxt = self.semantics.successor(c, event)
                if nxt is not None:
                    out.add(nxt)
        return out

    def unobservable_tails(self, configs: Iterable[Hashable]) -> Configs:
        """Endpoints of every unobservable string of bounded length from configs."""
        reached = set(configs)
        layer = set(reached)
        for _ in range(self.budget.max_string_length):
            layer = self._image(layer, self.unobservable) - reached
            if not layer:
                return frozenset(reached)
            reached |= layer
        if self._image(layer, self.unobservable) - reached:
            self.complete = False
        return frozenset(reached)

    def observe(self, configs: Configs, sigma: str, closed: bool) -> Configs:
        nxt = frozenset(self._image(self.unobservable_tails(configs), [sigma]))
        return self.unobservable_tails(nxt) if closed and nxt else nxt

    def observation_classes(self, closed: bool = False) -> Iterator[tuple[tuple[str, ...], Configs]]:
        """
        Yield (α, configurations after any run observed as α), breadth first,
        one α per distinct configuration set. With closed=False a run must end
        on an observable event (or be empty); with closed=True it may continue
        unobservably.
        """
        start = frozenset(self.semantics.initial_configurations())
        if closed:
            start = self.unobservable_tails(start)
        seen = {start}
        queue = deque([((), start)])
        while queue:
            alpha, configs = queue.popleft()
            yield alpha, configs
            truncated = len(alpha) >= self.budget.max_observation_length
            for sigma in self.observable:
                nxt = self.observe(configs, sigma, closed)
                if not nxt or nxt in seen:
                    continue
                if truncated:
                    self.complete = False
                    continue
                seen.add(nxt)
                queue.append((alpha + (sigma,), nxt))

    def layers(self, configs: Configs, upto: int) -> tuple[list[Configs], tuple[int, int] | None]:
        """Exact-length forward layers 0..upto, cut at the first repeat (start, period)."""
        layers = [configs]
        first_seen = {configs: 0}
        for n in range(1, upto + 1):
            layer = frozenset(self._image(layers[-1], self.events))
            if layer in first_seen:
                return layers, (first_seen[layer], n - first_seen[layer])
            first_seen[layer] = n
            layers.append(layer)
        return layers, None

    @staticmethod
    def layer_at(layers: list[Configs], cycle: tuple[int, int] | None, n: int) -> Configs:
        if n < len(layers):
            return layers[n]
        start, period = cycle
        return layers[start + (n - start) % period]

    def all_secret(self, configs: Configs) -> bool:
        return all(self.semantics.is_secret(c) for c in configs)

    def first_blind_instant(self, configs: Configs, k: int) -> int | None:
        """Smallest n >= k at which every length-n continuation ends secret."""
        limit = self.budget.instant_limit(k)
        layers, cycle = self.layers(configs, limit)
        last = limit
        if cycle is None:
            self.complete = False
        else:
            start, period = cycle
            needed = max(k, start) + period - 1
            if needed > limit:
                self.complete = False
            last = min(limit, needed)
        for n in range(k, last + 1):
            if self.all_secret(self.layer_at(layers, cycle, n)):
                return n
        return None

    def first_exhausted_instant(self, configs: Configs, k: int) -> int | None:
        """
        Smallest n >= k by which every continuation has passed through a
        secret at some instant in k..n; None if some continuation avoids
        secrets from instant k onward.
        """
        layers, cycle = self.layers(configs, k)
        safe = frozenset(c for c in self.layer_at(layers, cycle, k) if not self.semantics.is_secret(c))
        seen = {safe}
        for n in range(k, self.budget.instant_limit(k) + 1):
            if not safe:
                return n
            safe = frozenset(c for c in self._image(safe, self.events) if not self.semantics.is_secret(c))
            if safe in seen:
                return None
            seen.add(safe)
        self.complete = False
        return None

    def labels(self, configs: Iterable[Hashable]) -> StateSet:
        return frozenset(self.semantics.label(c) for c in configs)


def _require_live(a: Automaton) -> None:
    report = validate(a)
    if not report.valid:
        raise InputError("automaton failed validation", report.dangling_references)
    if not report.live:
        raise PreconditionError("the oracle requires a live automaton")


def _budget(budget: OracleBudget | None) -> OracleBudget:
    return OracleBudget() if budget is None else budget


def oracle_estimate(a: Automaton, alpha: Iterable[str], budget: OracleBudget | None = None) -> StateSet:
    """
    Ê(α) by enumerating strings that end on an observable event (or are
    empty) and project to α; strings are grouped by (endpoint, matched
    prefix), up to max_string_length events.
    """
    budget = _budget(budget)
    alpha = tuple(alpha)
    for sigma in alpha:
        if sigma not in a.alphabet or not a.alphabet.is_observable(sigma):
            raise InputError(f"{sigma!r} is not an observable event")
    if not alpha:
        return frozenset(a.initial)

    found = set()
    frontier = {(x, 0) for x in a.initial}
    seen = set(frontier)
    for _ in range(budget.max_string_length):
        nxt = set()
        for x, matched in frontier:
            for event, y in a.outgoing(x):
                if not a.alphabet.is_observable(event):
                    nxt.add((y, matched))
                elif event == alpha[matched]:
                    if matched + 1 == len(alpha):
                        found.add(y)
                    else:
                        nxt.add((y, matched + 1))
        frontier = nxt - seen
        if not frontier:
            break
        seen |= frontier
    return frozenset(found)


def _instant(semantics: SecretSemantics, k: int, budget: OracleBudget, prop: Property) -> Verdict:
    explorer = _Explorer(semantics, budget)
    for alpha, configs in explorer.observation_classes():
        n = explorer.first_blind_instant(configs, k)
        if n is not None:
            return Verdict(prop, k, False, Witness(alpha, n, explorer.labels(configs)))
    return Verdict(prop, k, True, bounded=not explorer.complete)


def _trajectory(semantics: SecretSemantics, k: int, budget: OracleBudget, prop: Property) -> Verdict:
    explorer = _Explorer(semantics, budget)
    for alpha, configs in explorer.observation_classes():
        n = explorer.first_exhausted_instant(configs, k)
        if n is not None:
            return Verdict(prop, k, False, Witness(alpha, n, explorer.labels(configs)))
    return Verdict(prop, k, True, bounded=not explorer.complete)


def oracle_instant(a: Automaton, k: int, budget: OracleBudget | None = None) -> Verdict:
    _require_live(a)
    return _instant(StateSecrets(a), k, _budget(budget), Property.INSTANT)


def oracle_trajectory(a: Automaton, k: int, budget: OracleBudget | None = None) -> Verdict:
    _require_live(a)
    return _trajectory(StateSecrets(a), k, _budget(budget), Property.TRAJECTORY)


def oracle_pattern(
    a: Automaton,
    p: PatternSpec,
    k: int,
    kind: Property,
    budget: OracleBudget | None = None,
) -> Verdict:
    _require_live(a)
    if set(a.alphabet.names) != set(p.dfa.alphabet.names):
        raise InputError("pattern alphabet must equal the system alphabet")
    semantics = PatternSecrets(a, p)
    if kind is Property.PATTERN_INSTANT:
        return _instant(semantics, k, _budget(budget), kind)
    if kind is Property.PATTERN_TRAJECTORY:
        return _trajectory(semantics, k, _budget(budget), kind)
    raise ValueError(f"not a pattern property: {kind}")


def oracle_k_step_opacity(a: Automaton, k: int, budget: OracleBudget | None = None) -> Verdict:
    """
    K-step opacity by pairing each observation α with every continuation β
    of at most K observable events: violated when some run reaching a
    secret on α extends by β while no run leaving a non-secret on α does.

    Only α up to half the string budget are judged, so the verdict is
    always bounded.
    """
    report = validate(a)
    if not report.valid:
        raise InputError("automaton failed validation", report.dangling_references)
    budget = _budget(budget)
    explorer = _Explorer(StateSecrets(a), budget)
    horizon = budget.max_string_length // 2

    for alpha, configs in explorer.observation_classes(closed=True):
        if len(alpha) > horizon:
            break
        secret = frozenset(x for x in configs if x in a.secret)
        if not secret:
            continue
        frontier = [((), secret, configs - secret)]
        for depth in range(k + 1):
            extended = []
            for beta, revealed, cover in frontier:
                if revealed and not cover:
                    return Verdict(Property.K_STEP, k, False, Witness(alpha + beta, len(beta), secret), bounded=True)
                if depth == k:
                    continue
                for sigma in explorer.observable:
                    nxt = explorer.observe(revealed, sigma, closed=True)
                    if nxt:
                        extended.append((beta + (sigma,), nxt, explorer.observe(cover, sigma, closed=True)))
            frontier = extended
    return Verdict(Property.K_STEP, k, True, bounded=True)
