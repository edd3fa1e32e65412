"""SG Points services."""

from .conic import Conic, dual_conic, intersect_conics, sg_outer_conics
from .field import QQ, FieldTower
from .parser import parse_curve, parse_field, parse_point
from .sg import CurvePair, galois_point_check, sg_enumerate, sg_point_check, solve_fiber_transforms
from .toolkit import ToolkitService

__all__ = [
    "Conic",
    "CurvePair",
    "FieldTower",
    "QQ",
    "ToolkitService",
    "dual_conic",
    "galois_point_check",
    "intersect_conics",
    "parse_curve",
    "parse_field",
    "parse_point",
    "sg_enumerate",
    "sg_outer_conics",
    "sg_point_check",
    "solve_fiber_transforms",
]
