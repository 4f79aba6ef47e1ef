from abc import ABC, abstractmethod
from collections.abc import Hashable

from opacity.data_models import Automaton, PatternSpec, product_state_name

DEAD = "dump"


class SecretSemantics(ABC):
    """What a run looks like to the brute-force definitions and when it counts as secret."""

    def __init__(self, system: Automaton):
        self.system = system

    @abstractmethod
    def initial_configurations(self) -> list[Hashable]:
        pass

    @abstractmethod
    def successor(self, config: Hashable, event: str) -> Hashable | None:
        """Configuration after `event`, or None when the system cannot move."""
        pass

    @abstractmethod
    def is_secret(self, config: Hashable) -> bool:
        pass

    @abstractmethod
    def label(self, config: Hashable) -> str:
        """Name under which the configuration appears in witnesses."""
        pass


class StateSecrets(SecretSemantics):
    """A run is secret when it ends in X_S."""

    def initial_configurations(self) -> list[str]:
        return self.system.ordered(self.system.initial)

    def successor(self, config: str, event: str) -> str | None:
        return self.system.transitions.get((config, event))

    def is_secret(self, config: str) -> bool:
        return config in self.system.secret

    def label(self, config: str) -> str:
        return config


class PatternSecrets(SecretSemantics):
    """
    A run is secret when its whole event sequence is accepted by the pattern.

    The pattern is run as given (possibly partial); once it has no move the
    run can never be accepted again and its pattern component becomes None.
    """

    def __init__(self, system: Automaton, pattern: PatternSpec):
        super().__init__(system)
        self.pattern = pattern

    def initial_configurations(self) -> list[tuple[str, str | None]]:
        return [(x, self.pattern.initial) for x in self.system.ordered(self.system.initial)]

    def successor(self, config, event):
        x, y = config
        x_next = self.system.transitions.get((x, event))
        if x_next is None:
            return None
        y_next = None if y is None else self.pattern.dfa.transitions.get((y, event))
        return (x_next, y_next)

    def is_secret(self, config) -> bool:
        return config[1] is not None and config[1] in self.pattern.marked

    def label(self, config) -> str:
        x, y = config
        return product_state_name(x, DEAD if y is None else y)
