"""Exceptions raised across eprsim; all derive from ValueError."""


class EprsimError(ValueError):
    """Base class for every error raised by eprsim."""


class ConfigurationError(EprsimError):
    """An experiment, source or estimator was configured with invalid parameters."""


class InputError(EprsimError):
    """An operation received malformed data (mismatched lengths, unsorted streams, non-finite angles)."""


class DegenerateInputError(EprsimError):
    """Well-formed input for which the requested quantity is undefined (e.g. a zero denominator)."""
