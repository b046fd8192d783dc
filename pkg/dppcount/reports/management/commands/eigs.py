from spectra.counting import distribution_from_spectrum, lclt_report
from spectra.ensembles import ginibre_spectrum
from spectra.exceptions import DegenerateDistribution
from spectra.fredholm import nystrom_spectrum

from reports.management.base import RunCommand
from reports.registry import KERNEL_CHOICES, resolve_kernel
from reports.tables import spectrum_report


def spectrum_for(config):
    """Spectrum of ``config.kernel`` on its interval, or the explicit Ginibre one."""
    kernel, region_kind = resolve_kernel(config.kernel)
    if region_kind == "disk":
        return ginibre_spectrum(config.radius)
    return nystrom_spectrum(kernel, config.interval, order=config.order, truncation=config.truncation)


def diagnostics(spectrum):
    dist = distribution_from_spectrum(spectrum)
    try:
        return dist, lclt_report(dist)
    except DegenerateDistribution:
        return dist, None


class Command(RunCommand):
    help = "Tabulate the eigenvalues of a kernel restricted to a region."
    command_name = "eigs"

    def add_arguments(self, parser):
        parser.add_argument("--kernel", help=f"one of {', '.join(KERNEL_CHOICES)}")
        parser.add_argument("--interval", help="region a:b (use --interval=-5:12 for negative a)")
        parser.add_argument("--radius", help="disk radius for ginibre-disk")
        self.add_common_arguments(parser)

    def build_report(self, config):
        spectrum = spectrum_for(config)
        dist, lclt = diagnostics(spectrum)
        return spectrum_report(spectrum, dist, lclt, config)
