from spectra import ensembles
from spectra.counting import gaussian_approximation
from spectra.ensembles import PUBLISHED_TABLES

from reports.management.base import RunCommand
from reports.registry import REPRODUCIBLE_TABLES
from reports.writers import SUM_DIGITS, Report, metadata, render_text, sig

HEADER = ["table", "row", "k", "exact", "gaussian", "published_exact", "published_gaussian", "deviation"]


def block(label, dist, ks, published_exact, published_gaussian, published_stat):
    gauss = gaussian_approximation(dist, ks)
    rows = []
    for k, g, pe, pg in zip(ks, gauss, published_exact, published_gaussian):
        exact = dist[k]
        rows.append({
            "k": k,
            "exact": sig(exact),
            "gaussian": sig(g),
            "published_exact": pe,
            "published_gaussian": pg,
            "deviation": sig(exact - pe),
        })
    return {
        "label": label,
        "mu": sig(dist.mu, SUM_DIGITS),
        "sigma2": sig(dist.sigma2, SUM_DIGITS),
        "published_stat": published_stat,
        "rows": rows,
    }


def table1_blocks(order):
    ref = PUBLISHED_TABLES["table1"]
    row = ref["rows"]["beta=2"]
    dist = ensembles.bulk_gue(10.0, order).distribution
    stat = f"mu={ref['mu']:g} sigma={ref['sigma']:g}"
    return "Bulk GUE, J = (0, 10)", [
        block("beta=2", dist, ref["ks"], row["exact"], row["gaussian"], stat),
    ]


def table2_blocks(order):
    ref = PUBLISHED_TABLES["table2"]
    goe = ensembles.goe_counts(5.0, order)
    gse = ensembles.gse_counts(10.0, order)
    blocks = []
    for label, dist in (("beta=1", goe), ("beta=4", gse)):
        row = ref["rows"][label]
        stat = f"sigma2={ref['sigma2'][label]:g}"
        blocks.append(block(label, dist, ref["ks"], row["exact"], row["gaussian"], stat))
    return "Bulk GOE and GSE, |J| = 10", blocks


def softedge_blocks(order, truncation):
    ref = PUBLISHED_TABLES["softedge"]
    dist = ensembles.soft_edge(ref["s"], order, truncation).distribution
    stat = f"mu={ref['mu']:g} sigma2={ref['sigma2']:g}"
    title = f"Soft edge GUE, J = (-{ref['s']:.6g}, inf)"
    return title, [block("soft", dist, [ref["k"]], [ref["exact"]], [ref["gaussian"]], stat)]


class Command(RunCommand):
    help = "Recompute a published table and print it next to the published values."
    command_name = "reproduce"

    def add_arguments(self, parser):
        parser.add_argument("table", help=f"one of {', '.join(REPRODUCIBLE_TABLES)}")
        self.add_common_arguments(parser, formats=("text", "csv", "json"))

    def build_report(self, config):
        if config.table == "table1":
            title, blocks = table1_blocks(config.order)
        elif config.table == "table2":
            title, blocks = table2_blocks(config.order)
        else:
            title, blocks = softedge_blocks(config.order, config.truncation)

        rows = [
            [config.table, b["label"]] + [r[key] for key in HEADER[2:]]
            for b in blocks
            for r in b["rows"]
        ]
        payload = {
            "command": "reproduce",
            "table": config.table,
            "title": title,
            "blocks": blocks,
            "metadata": metadata(truncation=config.truncation, order=config.order),
        }
        text = render_text("reports/reproduce.txt", {"title": title, "blocks": blocks})
        return Report(header=HEADER, rows=rows, payload=payload, text=text)
