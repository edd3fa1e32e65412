"""
ReportDocument schema: the machine-readable form of every computed result.

All field elements are strings in the input grammar over the declared tower,
so a document re-parses to the values it was rendered from.
"""

from typing import Dict, List, Literal, Optional
from pydantic import BaseModel, Field


# =============================================================================
# Geometry
# =============================================================================

class PointDoc(BaseModel):
    """Projective point with canonical coordinates (last nonzero coordinate is 1)."""
    text: str
    coords: List[str] = Field(min_length=3, max_length=3)


class TransformDoc(BaseModel):
    """3x3 matrix, row by row, scaled so its first nonzero entry is 1."""
    rows: List[List[str]]


class IntersectionDoc(BaseModel):
    point: PointDoc
    multiplicity: int


# =============================================================================
# SG results
# =============================================================================

class WitnessDoc(BaseModel):
    """pullback(c_to, transform) = scalar * c_from, preserving every line through point."""
    point: PointDoc
    transform: TransformDoc
    scalar: str
    direction: List[int]


class GroupDoc(BaseModel):
    h_order: int
    components: int
    descriptors: List[str]
    recipe: str


class SGPointDoc(BaseModel):
    point: PointDoc
    kind: Literal["inner", "outer"]
    witnesses: List[WitnessDoc] = []
    group: Optional[GroupDoc] = None
    tangents: List[str] = []


class VerdictDoc(BaseModel):
    point: PointDoc
    component: int
    is_galois: bool
    projection_degree: int
    group: List[TransformDoc] = []


class CheckDoc(BaseModel):
    point: PointDoc
    is_sg: bool
    kind: Literal["inner", "outer", "neither"]
    verdicts: List[VerdictDoc] = []
    witnesses: List[WitnessDoc] = []
    reason: str = ""
    pairwise: Dict[str, bool] = {}


class FiberPairDoc(BaseModel):
    sigma1: TransformDoc
    sigma2: TransformDoc
    scalar: str
    commutes: bool


class SuiteRowDoc(BaseModel):
    name: str
    passed: bool
    detail: str = ""
    seconds: float = 0.0


# =============================================================================
# Document
# =============================================================================

class ReportDocument(BaseModel):
    """
    One document per tool invocation. Which sections are filled depends on
    the tool: `dual` sets form, `intersect` sets intersection, `galois-check`
    sets galois, `sg-check` sets check, enumeration tools set the SG lists.
    """
    tool: str
    run_id: str = ""
    field: str = "Q"
    verdict: Optional[bool] = None
    degree: Optional[int] = None
    components: List[str] = []

    form: Optional[str] = None
    intersection: List[IntersectionDoc] = []
    galois: Optional[VerdictDoc] = None
    check: Optional[CheckDoc] = None
    fiber_pairs: List[FiberPairDoc] = []

    inner: List[SGPointDoc] = []
    outer: List[SGPointDoc] = []
    trivial_inner: List[PointDoc] = []
    checks: List[CheckDoc] = []
    dual_intersection: List[IntersectionDoc] = []
    candidate_source: str = ""
    complete: Optional[bool] = None
    inner_enumerated: Optional[bool] = None
    flags: Dict[str, bool] = {}
    notes: List[str] = []

    suite: List[SuiteRowDoc] = []
