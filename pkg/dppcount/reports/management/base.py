import logging

from django.core.management.base import BaseCommand, CommandError

from spectra.exceptions import DppError

from reports.forms import RunConfigForm
from reports.writers import emit

logger = logging.getLogger(__name__)

USAGE_ERROR = 2
NUMERICAL_ERROR = 1


class RunCommand(BaseCommand):
    """Shared plumbing: validate options, run, write the report.

    Subclasses set ``command_name`` and implement ``build_report(config)``.
    """

    command_name = None
    requires_system_checks = []

    def add_common_arguments(self, parser, formats=("csv", "json")):
        parser.add_argument("--order", help="Nystrom order (default: quadrature policy)")
        parser.add_argument("--truncation", help="soft-edge wall T for half-infinite regions")
        parser.add_argument("--format", choices=formats, help="output format")
        parser.add_argument("--out", help="write to this path instead of stdout")

    def handle(self, *args, **options):
        try:
            form = RunConfigForm(self.command_name, data=options)
            if not form.is_valid():
                raise CommandError(form.error_text(), returncode=USAGE_ERROR)
            config = form.to_config()
            report = self.build_report(config)
        except DppError as exc:
            logger.debug("%s failed", self.command_name, exc_info=True)
            raise CommandError(f"{type(exc).__name__}: {exc}", returncode=NUMERICAL_ERROR) from exc
        emit(report, config.output_format, config.out, self.stdout, self.stderr)

    def build_report(self, config):
        raise NotImplementedError
