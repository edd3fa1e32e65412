"""
Error schemas and codes for the SG point toolkit.
"""

from enum import Enum
from typing import Optional
from pydantic import BaseModel, ConfigDict


class ErrorCode(str, Enum):
    """Standardized error codes shared by the CLI and the HTTP surface."""

    # Authentication
    UNAUTHORIZED = "UNAUTHORIZED"

    # Field tower
    TOWER_MISMATCH = "TOWER_MISMATCH"
    NOT_MONIC = "NOT_MONIC"
    NOT_SQUAREFREE = "NOT_SQUAREFREE"
    ZERO_DIVISOR = "ZERO_DIVISOR"
    DIVISION_BY_ZERO = "DIVISION_BY_ZERO"

    # Root finding / elimination
    UNRESOLVED = "UNRESOLVED"
    DEGREE_TOO_HIGH = "DEGREE_TOO_HIGH"

    # Geometry
    COINCIDENT_POINTS = "COINCIDENT_POINTS"
    SINGULAR_TRANSFORM = "SINGULAR_TRANSFORM"
    SINGULAR_CONIC = "SINGULAR_CONIC"
    COINCIDENT_CONICS = "COINCIDENT_CONICS"

    # Input
    NOT_HOMOGENEOUS = "NOT_HOMOGENEOUS"
    SYNTAX_ERROR = "SYNTAX_ERROR"
    UNKNOWN_GENERATOR = "UNKNOWN_GENERATOR"
    INVALID_CURVE = "INVALID_CURVE"
    INVALID_INPUT = "INVALID_INPUT"

    # SG analysis
    MIXED_DEGREES = "MIXED_DEGREES"
    NO_CANDIDATE_SOURCE = "NO_CANDIDATE_SOURCE"

    # Tools
    UNKNOWN_TOOL = "UNKNOWN_TOOL"

    # System errors
    INTERNAL_ERROR = "INTERNAL_ERROR"


class ErrorResponse(BaseModel):
    """Standardized error response format."""

    model_config = ConfigDict(use_enum_values=True)

    error_code: ErrorCode
    message: str
    request_id: str
    retryable: bool
    details: Optional[dict] = None
