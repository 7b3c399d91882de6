"""Exception hierarchy shared across the toolkit.

Exit-code mapping used by the CLI: ConfigError -> 2, DataError -> 3,
NumericalGuardError -> 4.
"""


class GbsError(Exception):
    """Base class for all toolkit errors."""


class ConfigError(GbsError):
    """Invalid or incomplete run configuration."""


class DataError(GbsError):
    """Malformed input data or incompatible objects."""


class DimensionError(DataError):
    """Shape or index mismatch between operands."""


class RepresentationError(DataError):
    """Operation requested in a phase-space representation that cannot support it."""


class NumericalGuardError(GbsError):
    """A numerical safety guard tripped (divergent samples, cost limits)."""
