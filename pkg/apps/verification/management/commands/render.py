"""
Management command rendering a geometry and its cover as SVG
"""

from ._base import VerificationCommand


class Command(VerificationCommand):
    help = 'Render the geometry, its cover pieces and interfaces as SVG'
    mode = 'render'
