"""Exception types shared across the package.

The CLI maps these onto exit codes: configuration problems exit 2,
numerical failures exit 3, I/O failures exit 4.
"""


class ConfigError(ValueError):
    """Invalid configuration, preset name, or command-line input."""


class CheckpointError(ConfigError):
    """Checkpoint file is malformed, truncated, or shape/version incompatible."""


class NumericalInstabilityError(RuntimeError):
    """State validation failed after integration, or training produced non-finite values."""
