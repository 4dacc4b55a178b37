"""Exception hierarchy shared across the package."""


class AffSurf4Error(Exception):
    """Base class for all errors raised by this package."""


class InvalidOrder(AffSurf4Error):
    """Jet order outside the valid range for the requested operation."""


class DegenerateDivisor(AffSurf4Error):
    """Division by a jet whose value part is zero."""


class DomainError(AffSurf4Error):
    """Elementary function evaluated outside its domain."""


class UnboundVariable(AffSurf4Error):
    """Expression references a variable missing from the binding."""


class ExprSyntaxError(AffSurf4Error):
    """Located parse error.

    Attributes
    ----------
    offset : int
        Byte offset of the offending token in the source text.
    expected : frozenset[str]
        Token kinds that would have been accepted at this position.
    """

    def __init__(self, message, offset, expected=()):
        super().__init__(f"{message} at offset {offset}"
                         + (f" (expected {', '.join(sorted(expected))})" if expected else ""))
        self.offset = offset
        self.expected = frozenset(expected)


class SingularFrame(AffSurf4Error):
    """Frame columns fail the rank floor; no well-posed decomposition."""


class SingularTransform(AffSurf4Error):
    """A frame-change matrix is not invertible."""


class InsufficientOrder(AffSurf4Error):
    """Jets do not carry enough derivatives for the requested computation."""


class NotNormalized(AffSurf4Error):
    """Fundamental forms deviate from the expected normal form."""


class DegenerateCurve(AffSurf4Error):
    """The defining curve determinant (G or D) is below the rank floor."""


class DegenerateCoefficient(AffSurf4Error):
    """A curve coefficient required by the family construction vanishes."""


class SceneError(AffSurf4Error):
    """Scene file failed to parse or validate."""
