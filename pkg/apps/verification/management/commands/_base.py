"""
Shared options and exit handling for the verification commands.
"""

import logging

from django.core.management.base import BaseCommand, CommandError

from apps.core.exceptions import ParseError
from apps.forms.polyform import FAMILIES
from apps.verification.runner import EXIT_OK, RunConfig, run

logger = logging.getLogger(__name__)


class VerificationCommand(BaseCommand):
    mode = "verify"

    def add_arguments(self, parser):
        parser.add_argument('--geometry', required=True, help='Geometry JSON file')
        parser.add_argument('--epsilon', help='Uniform half-width as "p/q" (default DERHAM_DEFAULT_EPSILON)')
        parser.add_argument('--degree', type=int, help='Polynomial degree cap r')
        parser.add_argument('--samples', type=int, help='Number of random elements for the bound check')
        parser.add_argument('--seed', type=int, help='Sampling seed')
        parser.add_argument('--weighted', action='store_true', help='Weight the simplicial norm by C(eps)^2')
        parser.add_argument('--untruncated', action='store_true', help='Also report Betti numbers of the full total complex')
        parser.add_argument('--family', choices=FAMILIES, help='Polynomial family of the complexes')
        parser.add_argument('--report', help='Write the JSON report here')
        parser.add_argument('--csv', help='Write a CSV summary here')
        parser.add_argument('--svg', help='Write an SVG render here')

    def handle(self, *args, **options):
        try:
            cfg = RunConfig.from_options(
                geometry_path=options['geometry'],
                epsilon=options.get('epsilon'),
                degree=options.get('degree'),
                samples=options.get('samples'),
                seed=options.get('seed'),
                weighted=options.get('weighted', False),
                untruncated=options.get('untruncated', False),
                family=options.get('family'),
                mode=self.mode,
                report_path=options.get('report'),
                csv_path=options.get('csv'),
                svg_path=options.get('svg'),
            )
        except ParseError as exc:
            raise CommandError(str(exc), returncode=2)

        report = run(cfg)
        for check in report.checks:
            line = f"{check.name} [{check.bigrade}]" if check.bigrade else check.name
            if check.passed:
                if options.get('verbosity', 1) > 1:
                    self.stdout.write(f"  ✓ {line}")
            else:
                self.stdout.write(self.style.WARNING(f"  ✗ {line}: {check.witness or check.status}"))
        self.summarize(report)

        if report.exit_status != EXIT_OK:
            failed = report.failed()
            first = failed[0].name if failed else 'run'
            raise CommandError(
                f"{len(failed)} of {len(report.checks)} checks did not pass (first: {first})",
                returncode=report.exit_status,
            )
        self.stdout.write(self.style.SUCCESS(f"All {len(report.checks)} checks passed"))

    def summarize(self, report):
        """Hook for mode-specific output."""
