from spectra import ensembles

from reports.management.base import RunCommand
from reports.registry import COUNT_ENSEMBLES
from reports.writers import SUM_DIGITS, Report, metadata, sig


class Command(RunCommand):
    help = "Sweep an ensemble over several s and tabulate the CLT and LCLT distances."
    command_name = "lclt"

    def add_arguments(self, parser):
        parser.add_argument("--ensemble", help=f"one of {', '.join(COUNT_ENSEMBLES)}")
        parser.add_argument("--s", help="comma-separated values, e.g. 10,40,160")
        parser.add_argument("--workers", help="thread pool size for the sweep")
        self.add_common_arguments(parser)

    def build_report(self, config):
        results = ensembles.lclt_sweep(
            config.ensemble,
            config.s_values,
            workers=config.workers,
            order=config.order,
            truncation=config.truncation,
        )
        rows = [
            [
                r.s,
                sig(r.distribution.mu, SUM_DIGITS),
                sig(r.distribution.sigma2, SUM_DIGITS),
                sig(r.lclt.lclt_sup),
                sig(r.lclt.clt_sup),
            ]
            for r in results
        ]
        header = ["s", "mu", "sigma2", "lclt_sup", "clt_sup"]
        payload = {
            "command": "lclt",
            "ensemble": config.ensemble,
            "rows": [dict(zip(header, row)) for row in rows],
            "metadata": metadata(truncation=config.truncation, order=config.order),
        }
        return Report(header=header, rows=rows, payload=payload)
