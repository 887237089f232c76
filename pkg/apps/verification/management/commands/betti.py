"""
Management command comparing Betti numbers
"""

from ._base import VerificationCommand


class Command(VerificationCommand):
    help = 'Compute simplicial, Cech-de Rham and nerve Betti numbers and compare them'
    mode = 'betti'

    def summarize(self, report):
        for check in report.checks:
            if check.name.startswith('betti.') and 'betti' in check.values:
                self.stdout.write(f"{check.name}: ({', '.join(check.values['betti'])})")
