"""SG Points schemas."""

from .errors import ErrorCode, ErrorResponse
from .report import (
    CheckDoc,
    FiberPairDoc,
    GroupDoc,
    IntersectionDoc,
    PointDoc,
    ReportDocument,
    SGPointDoc,
    SuiteRowDoc,
    TransformDoc,
    VerdictDoc,
    WitnessDoc,
)
from .tools import ToolInfo, ToolRequest

__all__ = [
    "ErrorCode",
    "ErrorResponse",
    "CheckDoc",
    "FiberPairDoc",
    "GroupDoc",
    "IntersectionDoc",
    "PointDoc",
    "ReportDocument",
    "SGPointDoc",
    "SuiteRowDoc",
    "TransformDoc",
    "VerdictDoc",
    "WitnessDoc",
    "ToolInfo",
    "ToolRequest",
]
