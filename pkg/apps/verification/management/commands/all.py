"""
Management command running every suite
"""

from ._base import VerificationCommand


class Command(VerificationCommand):
    help = 'Run verification, bounds and Betti suites in one report'
    mode = 'all'
