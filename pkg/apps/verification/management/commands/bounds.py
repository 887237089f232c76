"""
Management command estimating the norm bounds of the cochain map
"""

from ._base import VerificationCommand


class Command(VerificationCommand):
    help = 'Compute the bound constants and check sampled norm ratios against them'
    mode = 'bounds'

    def summarize(self, report):
        for check in report.checks:
            if check.name != 'bounds.sandwich':
                continue
            values = check.values
            self.stdout.write(f"C1^2 = {values['c1_squared']}, C2^2 = {values['c2_squared']}")
            if 'min_ratio' in values:
                self.stdout.write(
                    f"sampled ratios in [{values['min_ratio']}, {values['max_ratio']}] "
                    f"over {values['samples']} samples"
                )
