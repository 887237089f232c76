"""
Management command running the exact verification suites
"""

from ._base import VerificationCommand


class Command(VerificationCommand):
    help = 'Check both double complexes, the cochain map, truncation and interface cancellation'
    mode = 'verify'
