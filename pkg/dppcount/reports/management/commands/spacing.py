import numpy as np

from spectra import ensembles

from reports.management.base import RunCommand
from reports.registry import SPACING_ENSEMBLES
from reports.writers import SUM_DIGITS, Report, metadata, sig


def s_grid(srange, step):
    """Equally spaced points from a to b inclusive."""
    a, b = srange
    count = int(round((b - a) / step))
    return a + step * np.arange(count + 1)


class Command(RunCommand):
    help = "Tabulate the conditioned densities p^bulk(k; s) or p^soft(k; (-s, inf))."
    command_name = "spacing"

    def add_arguments(self, parser):
        parser.add_argument("--ensemble", help=f"one of {', '.join(SPACING_ENSEMBLES)}")
        parser.add_argument("--k", help="number of eigenvalues in the gap")
        parser.add_argument("--smax", help="grid 0:smax")
        parser.add_argument("--srange", help="grid a:b (use --srange=-6:6 for negative a)")
        parser.add_argument("--step", help="grid spacing")
        parser.add_argument("--workers", help="thread pool size for the grid")
        self.add_common_arguments(parser)

    def build_report(self, config):
        grid = s_grid(config.srange, config.step)
        values = ensembles.density_table(
            config.ensemble,
            config.k,
            grid,
            workers=config.workers,
            order=config.order,
            truncation=config.truncation,
        )
        integral, first_moment = ensembles.density_moments(grid, values)
        rows = [[sig(s, SUM_DIGITS), sig(p)] for s, p in zip(grid, values)]
        payload = {
            "command": "spacing",
            "ensemble": config.ensemble,
            "k": config.k,
            "s": [row[0] for row in rows],
            "p": [row[1] for row in rows],
            "integral": sig(integral, SUM_DIGITS),
            "first_moment": sig(first_moment, SUM_DIGITS),
            "metadata": metadata(truncation=config.truncation, order=config.order),
        }
        summary = [f"integral={payload['integral']!r} first_moment={payload['first_moment']!r}"]
        return Report(header=["s", "p"], rows=rows, payload=payload, summary=summary)
