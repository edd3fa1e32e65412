"""
Domain exceptions raised by the computational services.

Every exception carries an ErrorCode so the CLI and the HTTP layer can render
it as an ErrorResponse without knowing the concrete class.
"""

from typing import Any, Dict, List, Optional

from app.schemas.errors import ErrorCode


class SGPointsError(Exception):
    """Base class for all toolkit errors."""

    code: ErrorCode = ErrorCode.INTERNAL_ERROR
    retryable: bool = False

    def __init__(self, message: str, details: Optional[Dict[str, Any]] = None):
        super().__init__(message)
        self.message = message
        self.details = details or {}


class TowerMismatch(SGPointsError):
    """Raised when operands live in different field towers."""
    code = ErrorCode.TOWER_MISMATCH


class NotMonic(SGPointsError):
    """Raised when an adjoined minimal polynomial is not monic."""
    code = ErrorCode.NOT_MONIC


class NotSquarefree(SGPointsError):
    """Raised when an adjoined minimal polynomial shares a factor with its derivative."""
    code = ErrorCode.NOT_SQUAREFREE


class ZeroDivisor(SGPointsError):
    """
    Raised when inversion discovers a nonconstant common factor of the top
    minimal polynomial. `factor` is a monic UPoly over the base tower.
    """
    code = ErrorCode.ZERO_DIVISOR

    def __init__(self, factor: Any):
        super().__init__(f"zero divisor detected; modulus has factor {factor}",
                         {"factor": str(factor)})
        self.factor = factor


class DivisionByZero(SGPointsError, ZeroDivisionError):
    """Raised when inverting the zero element."""
    code = ErrorCode.DIVISION_BY_ZERO


class Unresolved(SGPointsError):
    """
    Raised when roots needed by a computation lie outside the current tower.

    `suggestion` is an irreducible factor that may be adjoined before retrying,
    or None when no certified adjunction is known.
    """
    code = ErrorCode.UNRESOLVED
    retryable = True

    def __init__(
        self,
        message: str,
        polynomial: Any = None,
        residual: Any = None,
        roots: Optional[List[Any]] = None,
        suggestion: Any = None,
    ):
        super().__init__(message, {
            "polynomial": str(polynomial) if polynomial is not None else None,
            "residual": str(residual) if residual is not None else None,
            "suggestion": str(suggestion) if suggestion is not None else None,
        })
        self.polynomial = polynomial
        self.residual = residual
        self.roots = roots or []
        self.suggestion = suggestion


class DegreeTooHigh(SGPointsError):
    """Raised when a residual polynomial exceeds the radical strategies."""
    code = ErrorCode.DEGREE_TOO_HIGH


class CoincidentPoints(SGPointsError):
    """Raised when a line is requested through two equal points."""
    code = ErrorCode.COINCIDENT_POINTS


class SingularTransform(SGPointsError):
    """Raised when a projective transformation has zero determinant."""
    code = ErrorCode.SINGULAR_TRANSFORM


class SingularConic(SGPointsError):
    """Raised when a conic matrix has zero determinant."""
    code = ErrorCode.SINGULAR_CONIC


class CoincidentConics(SGPointsError):
    """Raised when two conics have proportional forms."""
    code = ErrorCode.COINCIDENT_CONICS


class NotHomogeneous(SGPointsError):
    """Raised when a parsed polynomial mixes total degrees."""
    code = ErrorCode.NOT_HOMOGENEOUS


class ExpressionSyntaxError(SGPointsError):
    """Raised by the grammar; `position` is the 0-based offset of the problem."""
    code = ErrorCode.SYNTAX_ERROR

    def __init__(self, message: str, position: int, text: str = ""):
        super().__init__(f"{message} at position {position}",
                         {"position": position, "text": text})
        self.position = position


class UnknownGenerator(SGPointsError):
    """Raised when an expression names a generator the field does not declare."""
    code = ErrorCode.UNKNOWN_GENERATOR


class InvalidInput(SGPointsError):
    """Raised for malformed points, matrices or field declarations."""
    code = ErrorCode.INVALID_INPUT


class InvalidCurve(SGPointsError):
    """Raised when a curve violates a precondition (singular, proportional, degree)."""
    code = ErrorCode.INVALID_CURVE


class MixedDegrees(SGPointsError):
    """Raised for SG analysis of components with different degrees."""
    code = ErrorCode.MIXED_DEGREES


class NoCandidateSource(SGPointsError):
    """Raised when enumeration has neither a normal-form match nor a candidate list."""
    code = ErrorCode.NO_CANDIDATE_SOURCE


class UnknownTool(SGPointsError):
    """Raised for a tool or suite fixture name that is not registered."""
    code = ErrorCode.UNKNOWN_TOOL


class InternalConsistencyError(SGPointsError):
    """Raised when a computed result contradicts a verified invariant."""
    code = ErrorCode.INTERNAL_ERROR
