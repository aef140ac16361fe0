"""Exception taxonomy shared by the simulation and CLI layers."""


class ConfigError(ValueError):
    """Invalid configuration or malformed input file (CLI exit code 1)."""


class NumericFailure(RuntimeError):
    """Numeric breakdown, e.g. 64-bit overflow of the generator value (exit 2)."""


class ConditioningUnreachable(RuntimeError):
    """Rejection sampling exhausted its attempt budget without hitting the event."""
