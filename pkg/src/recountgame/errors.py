"""Exception hierarchy shared by all recountgame modules."""


class GameError(Exception):
    """Base class for all errors raised by this package."""


class ValidationError(GameError):
    """An election, manipulation or instance file violates an invariant.

    ``violations`` holds the structured list produced by
    :func:`recountgame.model.validate_manipulation` when available.
    """

    def __init__(self, message, violations=None):
        super().__init__(message)
        self.violations = list(violations) if violations else []


class ResourceLimitError(GameError):
    """An exhaustive search exceeded its configured state or node cap."""


class UnsupportedError(GameError):
    """A precondition failed or an unsupported option combination was asked."""
