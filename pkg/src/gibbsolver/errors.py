"""Exception hierarchy shared by all gibbsolver modules."""


class GibbsError(Exception):
    """Base class for every error raised by gibbsolver."""


class InvalidSystemError(GibbsError, ValueError):
    """A transition matrix or circle map failed validation."""


class InvalidPotentialError(GibbsError, ValueError):
    """A potential table does not match its system."""


class NotExactError(GibbsError):
    """The dynamics is not exact (the transition pattern is not primitive)."""


class CapExceededError(GibbsError):
    """An enumeration would exceed the configured word cap."""


class ConvergenceError(GibbsError):
    """An iterative solver stopped before reaching its tolerance."""


class ConfigError(GibbsError, ValueError):
    """A job configuration is malformed or inconsistent."""
