class InputError(ValueError):
    """Raised error when the input is invalid."""


class PreconditionError(InputError):
    """Raised error when an action is applied to a state that does not allow it."""


class UnreachableError(InputError):
    """Raised error when no path reaches the requested region."""


class PlanningExhaustedError(RuntimeError):
    """Raised error when every plan candidate failed feasibility checking."""

    def __init__(self, msg: str, violations=()):
        super().__init__(msg)
        self.violations = list(violations)


class BackendError(RuntimeError):
    """Raised error when a language-model backend cannot be reached."""
