"""Exception types shared across the package."""


class ParameterError(ValueError):
    """An argument or configuration value is outside its valid range."""


class IngestionError(ValueError):
    """A graph input file is malformed; the message names the offending line."""


class SolverError(RuntimeError):
    """The LP routine failed to converge within its iteration cap."""
