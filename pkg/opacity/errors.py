from dataclasses import dataclass


@dataclass(frozen=True)
class Diagnostic:
    location: str  # "line:column" for JSON syntax errors, a JSON path otherwise
    message: str

    def __str__(self):
        return f"{self.location}: {self.message}" if self.location else self.message


class OpacityError(Exception):
    """Base class for every failure raised by the verification library."""


class InputError(OpacityError, ValueError):
    """Malformed model, unknown event, alphabet mismatch or bad parameters."""

    def __init__(self, message: str, diagnostics: list[Diagnostic] | None = None):
        super().__init__(message)
        self.diagnostics = list(diagnostics or [])

    def __str__(self):
        if not self.diagnostics:
            return super().__str__()
        lines = [super().__str__()]
        lines.extend(f"  {d}" for d in self.diagnostics)
        return "\n".join(lines)


class PreconditionError(OpacityError):
    """The automaton does not satisfy a verification precondition (liveness)."""


class QueryError(OpacityError, LookupError):
    """An estimate was requested for an observation the system cannot produce."""


class ResourceError(OpacityError):
    """A configured size cap was exceeded."""

    def __init__(self, message: str, cap: int):
        super().__init__(message)
        self.cap = cap
