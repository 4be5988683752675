"""Exception types shared across the package.

Grouped under three bases so the CLI can map failures to exit codes:
configuration problems (exit 2), numerical problems (exit 3) and I/O
problems (exit 4).
"""


class ConfigError(ValueError):
    """Base for configuration and validation failures."""


class ParseError(ConfigError):
    """A config document could not be parsed; message carries line info."""


class ValidationError(ConfigError):
    """A value violates a documented invariant; message names it."""


class UnknownKeyError(ConfigError):
    """An unrecognised configuration key (anti-typo strictness)."""


class NumericalError(RuntimeError):
    """Base for runtime numerical failures."""


class PoleError(NumericalError):
    """Susceptibility evaluated exactly at an undamped pole."""


class InstabilityError(NumericalError):
    """Integrator blow-up: a field norm exceeded the safety threshold."""


class MissingFieldError(NumericalError):
    """A record does not contain a required field."""


class EmptyWeightError(NumericalError):
    """A weight profile has (numerically) zero total weight."""


class WindowOutOfRangeError(NumericalError):
    """Requested Fourier window does not fit inside the record."""


class FitRangeError(NumericalError):
    """Spatial fit range has too few sites or unusable populations."""


class DegenerateFitError(NumericalError):
    """Velocity fit attempted on positions with no usable spread."""


class IoError(OSError):
    """Raised when reading or writing export files fails."""
