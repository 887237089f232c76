"""
Exception hierarchy for derhamlab.

Operations that check properties return reports; the classes below are
raised only when an input cannot be processed at all.
"""


class DerhamError(Exception):
    """Base class for every error raised by the toolkit."""


# Linear algebra / complexes

class ComplexError(DerhamError):
    pass


class ShapeMismatch(ComplexError):
    """Matrix or block dimensions are inconsistent."""


class AxiomViolation(ComplexError):
    """A double-complex identity does not hold."""


class SingularGram(ComplexError):
    """A Gram matrix is not symmetric positive-definite."""


# Geometry

class GeometryError(DerhamError):
    pass


class ParseError(GeometryError):
    """Geometry text does not follow the documented format."""


class NotPure(GeometryError):
    """Empty complex, or a labelled simplex that is not a face of any cell."""


class IndexMismatch(GeometryError):
    """Multi-index labels disagree with cell incidence."""


class IrrationalMeasure(GeometryError):
    """A labelled segment has irrational length."""


class UnsupportedDimension(GeometryError):
    pass


# Cover arrangement

class CoverError(DerhamError):
    pass


class EpsilonTooLarge(CoverError):
    """Band collision with a non-incident simplex, or overlapping pieces."""


class DegenerateCell(CoverError):
    pass


class LayoutError(CoverError):
    """The pieces do not add up to the geometry."""


class UnmatchedFacet(CoverError):
    pass


class ArrangementMismatch(CoverError):
    """Arrangement and geometry (or complex) were built from different inputs."""


# Forms

class FormError(DerhamError):
    pass


class DegreeOverflow(FormError):
    pass


class CellMismatch(FormError):
    pass


class NotAFace(FormError):
    pass


class DegreeMismatch(FormError):
    pass


# Cochain level

class CochainError(DerhamError):
    pass


class MissingComponent(CochainError):
    pass


class NotWeaklyDifferentiable(CochainError):
    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class DegenerateBand(CochainError):
    pass
