class CciRingError(Exception):
    """Base class for errors raised by cci_ring."""


class ConfigError(CciRingError, ValueError):
    """Invalid grid, model, solver or run configuration."""


class GridMismatchError(CciRingError, ValueError):
    """Two sampled functions do not live on the same grid."""


class NormalizationError(CciRingError, ValueError):
    """An orbital that must have unit norm does not."""


class DegenerateOrbitalError(CciRingError, ArithmeticError):
    """The projected norm of the orbital vanished to working precision."""


class BasisTooLargeError(CciRingError, MemoryError):
    """A Fock basis exceeds the configured dimension cap."""
