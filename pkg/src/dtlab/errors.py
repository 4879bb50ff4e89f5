"""Error taxonomy shared by all dtlab modules.

Every error carries a module-qualified ``code`` so the CLI can map failures
onto stable exit codes: configuration errors exit 2, numerical aborts exit 3.
"""

from __future__ import annotations


class DTLabError(Exception):
    """Base class. ``code`` is a stable short identifier like "matrix.singular"."""

    def __init__(self, code: str, message: str):
        self.code = code
        super().__init__(message)


class ConfigError(DTLabError):
    """Invalid configuration or input (CLI exit code 2)."""


class NumericalAbortError(DTLabError):
    """A numerical guard fired; results would not be trustworthy (exit code 3)."""


class MeasureResolutionError(ConfigError):
    """An atom of the measure would receive zero matrix slots."""

    def __init__(self, message: str):
        super().__init__("matrix.measure_resolution", message)


class SingularMatrixError(NumericalAbortError):
    def __init__(self, message: str):
        super().__init__("matrix.singular", message)


class SchurSwapError(NumericalAbortError):
    """Eigenvalue reordering failed (ill-conditioned swap)."""

    def __init__(self, message: str):
        super().__init__("matrix.schur_swap", message)


class BoundaryAmbiguityError(NumericalAbortError):
    """An eigenvalue sits too close to a region boundary to classify."""

    def __init__(self, message: str):
        super().__init__("spectral.boundary_ambiguity", message)


class TruncationError(NumericalAbortError):
    """A series truncation residual exceeded its cap."""

    def __init__(self, message: str):
        super().__init__("experiments.truncation", message)
