import logging
from collections import deque
from collections.abc import Iterable

from opacity import config
from opacity.data_models import Automaton, Observer, StateSet
from opacity.errors import InputError, QueryError, ResourceError

logger = logging.getLogger(__name__)


def unobservable_reach(a: Automaton, q: Iterable[str]) -> StateSet:
    """States reachable from q by a (possibly empty) unobservable string."""
    unobservable = a.alphabet.unobservable
    reached = set(q)
    stack = list(reached)
    while stack:
        x = stack.pop()
        for event in unobservable:
            y = a.transitions.get((x, event))
            if y is not None and y not in reached:
                reached.add(y)
                stack.append(y)
    return frozenset(reached)


def observer_step(a: Automaton, q: StateSet, sigma: str) -> StateSet:
    """
    States entered by an unobservable string followed by `sigma` from q.

    No unobservable closure is applied after `sigma`; an empty result means
    the observer transition is undefined.
    """
    if sigma not in a.alphabet or not a.alphabet.is_observable(sigma):
        raise InputError(f"{sigma!r} is not an observable event")
    targets = set()
    for x in unobservable_reach(a, q):
        y = a.transitions.get((x, sigma))
        if y is not None:
            targets.add(y)
    return frozenset(targets)


def build_observer(a: Automaton, cap: int | None = None) -> Observer:
    """
    Breadth-first subset construction from X_0 over observable events.

    Events are expanded in declaration order, so the first path discovered
    to each estimate is the shortest and, among equals, the first in that
    order.
    """
    if cap is None:
        cap = config.observer_cap()
    initial = frozenset(a.initial)
    events = a.alphabet.observable

    states: list[StateSet] = [initial]
    observations: dict[StateSet, tuple[str, ...]] = {initial: ()}
    transitions: dict[tuple[StateSet, str], StateSet] = {}
    queue = deque([initial])
    while queue:
        q = queue.popleft()
        for sigma in events:
            target = observer_step(a, q, sigma)
            if not target:
                continue
            transitions[(q, sigma)] = target
            if target not in observations:
                if len(states) >= cap:
                    raise ResourceError(
                        f"observer exceeds the cap of {cap} states "
                        f"(raise {config.OBSERVER_CAP_ENV} to allow more)",
                        cap,
                    )
                observations[target] = observations[q] + (sigma,)
                states.append(target)
                queue.append(target)

    logger.debug("observer built: %d states, %d transitions", len(states), len(transitions))
    return Observer(
        states=tuple(states),
        initial=initial,
        transitions=transitions,
        events=events,
        observations=observations,
    )


def estimate(obs: Observer, alpha: Iterable[str]) -> StateSet:
    """Ê(α): the observer state reached by α."""
    q = obs.initial
    walked = []
    for sigma in alpha:
        walked.append(sigma)
        nxt = obs.successor(q, sigma)
        if nxt is None:
            raise QueryError(f"observation {' '.join(walked)!r} cannot be produced by the system")
        q = nxt
    return q
