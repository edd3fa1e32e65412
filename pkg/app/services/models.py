"""
Result types shared by the conic and SG analyses.
"""

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from app.services.field import FieldElement, FieldTower
from app.services.geom import ProjLine, ProjPoint, ProjTransform
from app.services.poly import HomPoly


@dataclass(frozen=True)
class SGWitness:
    """
    A transform certifying an SG point: pullback(c1, transform) equals
    scalar * c2 and the transform preserves every line through `point`.
    """
    point: ProjPoint
    transform: ProjTransform
    scalar: FieldElement
    direction: Tuple[int, int] = (2, 1)


@dataclass(frozen=True)
class GroupDescriptor:
    """Admissible Galois groups at an SG point (H the per-component group, n components)."""
    h_order: int
    components: int
    descriptors: Tuple[str, ...]
    recipe: str


@dataclass
class GaloisVerdict:
    point: ProjPoint
    component: int
    is_galois: bool
    projection_degree: int
    group: List[ProjTransform] = field(default_factory=list)


@dataclass
class SGPoint:
    point: ProjPoint
    kind: str  # "inner" | "outer"
    witnesses: List[SGWitness] = field(default_factory=list)
    group: Optional[GroupDescriptor] = None
    tangents: List[ProjLine] = field(default_factory=list)


@dataclass
class SGCheck:
    """Outcome of checking one candidate point."""
    point: ProjPoint
    is_sg: bool
    kind: str  # "inner" | "outer" | "neither"
    verdicts: List[GaloisVerdict] = field(default_factory=list)
    witnesses: List[SGWitness] = field(default_factory=list)
    reason: str = ""
    pairwise: Dict[Tuple[int, int], bool] = field(default_factory=dict)


@dataclass
class SGReport:
    """
    Everything an SG analysis established for a set of components.

    The function-field objects behind the Galois conditions (the function ring
    of the curve and its subring fixed by the projection) are not computed;
    they are witnessed by the transforms instead.
    """
    tower: FieldTower
    degree: int
    components: List[HomPoly]
    inner: List[SGPoint] = field(default_factory=list)
    outer: List[SGPoint] = field(default_factory=list)
    trivial_inner: List[ProjPoint] = field(default_factory=list)
    checks: List[SGCheck] = field(default_factory=list)
    dual_intersection: List[Tuple[ProjPoint, int]] = field(default_factory=list)
    candidate_source: str = ""
    complete: Optional[bool] = None
    inner_enumerated: bool = True
    flags: Dict[str, bool] = field(default_factory=dict)
    notes: List[str] = field(default_factory=list)
