"""Serialisation of command results as CSV, JSON or rendered text.

CSV and JSON are built from the same rounded values, so a CSV file can be
reconstructed from the JSON document of the same run and vice versa.
"""

import csv
import io
import json
import logging
import math
from dataclasses import dataclass, field
from pathlib import Path

from django.template.loader import render_to_string

import dppcount

logger = logging.getLogger(__name__)

PROBABILITY_DIGITS = 6
SUM_DIGITS = 12


def sig(value, digits=PROBABILITY_DIGITS):
    """Round to ``digits`` significant figures; non-finite values pass through."""
    if value is None:
        return None
    value = float(value)
    if value == 0.0 or not math.isfinite(value):
        return value
    return float(f"{value:.{digits}g}")


def json_number(value):
    """JSON has no infinities; they are written as strings."""
    if value is not None and isinstance(value, float) and not math.isfinite(value):
        return "inf" if value > 0 else ("-inf" if value < 0 else "nan")
    return value


@dataclass
class Report:
    header: list
    rows: list
    payload: dict
    text: str = ""
    summary: list = field(default_factory=list)


def metadata(truncation=None, clamped=0, order=None):
    return {
        "truncation": truncation,
        "clamped": int(clamped),
        "order": order,
        "version": dppcount.__version__,
    }


def render_csv(header, rows):
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow(["" if v is None else v for v in row])
    return buffer.getvalue()


def render_json(payload):
    return json.dumps(payload, indent=2) + "\n"


def render_text(template_name, context):
    text = render_to_string(template_name, context)
    return text if text.endswith("\n") else text + "\n"


def format_report(report, output_format):
    if output_format == "json":
        return render_json(report.payload)
    if output_format == "text":
        return report.text
    return render_csv(report.header, report.rows)


def emit(report, output_format, out, stdout, stderr=None):
    """Write the report to ``out`` (or stdout) and the summary lines to stderr."""
    content = format_report(report, output_format)
    if out:
        path = Path(out)
        path.write_text(content, encoding="utf-8", newline="\n")
        logger.info("wrote %s (%d bytes)", path, len(content.encode("utf-8")))
    else:
        stdout.write(content, ending="")
    if stderr is not None:
        for line in report.summary:
            stderr.write(line)
