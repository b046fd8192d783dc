from spectra import ensembles

from reports.management.base import RunCommand
from reports.management.commands.eigs import diagnostics, spectrum_for
from reports.registry import COUNT_ENSEMBLES, KERNEL_CHOICES
from reports.tables import count_report
from reports.writers import SUM_DIGITS, sig


class Command(RunCommand):
    help = "Tabulate E(k; J) with its Gaussian approximation and LCLT diagnostics."
    command_name = "count"

    def add_arguments(self, parser):
        target = parser.add_mutually_exclusive_group()
        target.add_argument("--kernel", help=f"one of {', '.join(KERNEL_CHOICES)}")
        target.add_argument("--ensemble", help=f"one of {', '.join(COUNT_ENSEMBLES)}")
        parser.add_argument("--interval", help="region a:b for --kernel")
        parser.add_argument("--s", help="ensemble parameter s")
        parser.add_argument("--radius", help="disk radius for ginibre-disk")
        parser.add_argument("--k", help="report only this count")
        self.add_common_arguments(parser)

    def build_report(self, config):
        if config.kernel:
            spectrum = spectrum_for(config)
            dist, lclt = diagnostics(spectrum)
            return count_report(config.kernel, spectrum, dist, lclt, config)

        result = ensembles.run(
            config.ensemble,
            s=config.s,
            radius=config.radius,
            order=config.order,
            truncation=config.truncation,
        )
        extra = {
            "ensemble": result.ensemble,
            "s": result.s,
            "asymptotic_mu": sig(result.asymptotic_mu, SUM_DIGITS),
            "asymptotic_sigma2": sig(result.asymptotic_sigma2, SUM_DIGITS),
        }
        if result.spectrum is None:
            # E_1 lives on (0, 2s), E_4 on (0, s).
            length = 2.0 * result.s if config.ensemble == "goe-bulk" else result.s
            extra["region"] = {"a": 0.0, "b": length}
        return count_report(
            config.ensemble, result.spectrum, result.distribution, result.lclt, config, extra=extra
        )
