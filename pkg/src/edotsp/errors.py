"""Exception types raised across the package."""


class TsplibError(ValueError):
    """Malformed or unsupported TSPLIB input."""


class InstanceError(ValueError):
    """An instance or optimum violates its invariants."""


class InvalidMoveError(ValueError):
    """A 2-OPT move whose cut edges are equal or adjacent."""


class ConsistencyError(ValueError):
    """Frequency bookkeeping disagrees with the tours it describes."""


class ConfigError(ValueError):
    """An EA or experiment configuration that cannot be run."""


class MipSizeError(ValueError):
    """A MIP request beyond the supported guardrails."""


class DecodeError(ValueError):
    """A solver solution that does not describe valid tours."""
