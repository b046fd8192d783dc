"""Command-line identifiers for kernels, ensembles and numeric arguments."""

import math

from spectra import kernels
from spectra.exceptions import InvalidArgument

KERNEL_CHOICES = (
    "sine",
    "sine-plus",
    "sine-minus",
    "airy",
    "airy-conditioned:<s>",
    "sine-conditioned:<p1>[,<p2>]",
    "ginibre-disk",
)

COUNT_ENSEMBLES = ("gue-bulk", "gue-soft", "goe-bulk", "gse-bulk", "ginibre-disk")
SPACING_ENSEMBLES = ("spacing-bulk", "kth-largest-soft")
ENSEMBLE_CHOICES = COUNT_ENSEMBLES + SPACING_ENSEMBLES

REPRODUCIBLE_TABLES = ("table1", "table2", "softedge")


def parse_real(text):
    """Return a float, accepting ``inf`` and ``-inf``."""
    try:
        value = float(str(text).strip())
    except (TypeError, ValueError):
        raise InvalidArgument(f"{text!r} is not a number") from None
    if math.isnan(value):
        raise InvalidArgument("NaN is not a valid argument")
    return value


def parse_interval(text):
    """Parse ``a:b`` into a pair of floats with a < b."""
    parts = str(text).split(":")
    if len(parts) != 2:
        raise InvalidArgument(f"interval must look like a:b, got {text!r}")
    a, b = (parse_real(part) for part in parts)
    if not a < b:
        raise InvalidArgument(f"interval {text!r} is empty")
    return a, b


def parse_real_list(text):
    """Parse a comma-separated list of positive numbers, e.g. ``10,40,160``."""
    items = [item for item in str(text).split(",") if item.strip()]
    if not items:
        raise InvalidArgument("expected at least one value")
    values = [parse_real(item) for item in items]
    if any(not (math.isfinite(v) and v > 0) for v in values):
        raise InvalidArgument(f"values must be positive and finite, got {text!r}")
    return values


def resolve_kernel(identifier):
    """Return (kernel, region_kind) for a kernel identifier.

    ``region_kind`` is ``"disk"`` for the Ginibre identifier, whose spectrum is
    known explicitly, and ``"interval"`` otherwise.
    """
    name, _, argument = str(identifier).partition(":")
    if name == "sine" and not argument:
        return kernels.sine_kernel(), "interval"
    if name == "sine-plus" and not argument:
        return kernels.sine_pm_kernel("+"), "interval"
    if name == "sine-minus" and not argument:
        return kernels.sine_pm_kernel("-"), "interval"
    if name == "airy" and not argument:
        return kernels.airy_kernel(), "interval"
    if name == "ginibre-disk" and not argument:
        return kernels.ginibre_kernel(), "disk"
    if name == "airy-conditioned" and argument:
        return kernels.deflate(kernels.airy_kernel(), -parse_real(argument)), "interval"
    if name == "sine-conditioned" and argument:
        points = [parse_real(p) for p in argument.split(",")]
        if len(points) > 2:
            raise InvalidArgument("sine-conditioned takes one or two points")
        kernel = kernels.sine_kernel()
        for point in points:
            kernel = kernels.deflate(kernel, point)
        return kernel, "interval"
    raise InvalidArgument(
        f"unknown kernel {identifier!r}; expected one of {', '.join(KERNEL_CHOICES)}"
    )
