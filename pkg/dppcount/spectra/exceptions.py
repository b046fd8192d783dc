"""Errors raised by the numerical core.

Every error derives from :class:`DppError` so the command-line layer can map
numerical failures onto a single exit status.
"""


class DppError(Exception):
    """Base class for failures inside ``spectra``."""


class InvalidArgument(DppError, ValueError):
    """An argument is outside the range an operation accepts."""


class DomainError(DppError, ValueError):
    """A special function was asked for a value outside its supported range."""


class DegenerateConditioning(DppError):
    """Conditioning on a point where the one-point density vanishes."""


class NonContractiveOperator(DppError):
    """The discretised operator has eigenvalues outside [0, 1].

    Either the kernel is not a valid correlation kernel on the region or the
    quadrature does not resolve it.
    """

    def __init__(self, message, excursion=None):
        super().__init__(message)
        self.excursion = excursion


class DegenerateDistribution(DppError):
    """A diagnostic needs a positive variance but the count is deterministic."""


class ConventionError(DppError):
    """The GOE inter-relation recursion failed to produce a normalised law."""


class TruncationError(DppError):
    """An explicit spectrum was cut off before its tail became negligible."""
