"""Exception hierarchy shared by all modules."""


class HMCFError(Exception):
    """Base class for package errors."""


class InvalidInputError(HMCFError, ValueError):
    """Malformed arguments: wrong array lengths, out-of-range options."""


class InvalidFixtureError(InvalidInputError):
    """Initial-data generator called with parameters that give a bad curve."""


class ConvexityLossError(HMCFError):
    """min(S_thth + S) fell to or below the convexity floor.

    Carries the offending angle ``theta`` (and ``tau`` when raised while
    time stepping).
    """

    def __init__(self, message, theta=None, tau=None, index=None):
        super().__init__(message)
        self.theta = theta
        self.tau = tau
        self.index = index


class NotApplicableError(HMCFError):
    """A bound or check was requested outside the hypotheses it is proved under."""


class IntegrationFailure(HMCFError):
    """Non-finite state or exhausted step budget in an integrator."""


class InvalidComparisonError(InvalidInputError):
    """Two trajectories cannot be compared (grid or forcing mismatch)."""


class ConfigError(InvalidInputError):
    """A run configuration field is missing or violates its constraint."""

    def __init__(self, field, constraint, value=None):
        msg = f"{field}: {constraint}"
        if value is not None:
            msg += f" (got {value!r})"
        super().__init__(msg)
        self.field = field
        self.constraint = constraint
        self.value = value
