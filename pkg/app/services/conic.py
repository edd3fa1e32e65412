"""
Nonsingular conics: duality by the adjugate, intersection through the pencil
of conics, tangent lines from a point, and the complete enumeration of outer
SG points of a pair of conics.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import List, Optional, Sequence, Tuple

from app.services.elimination import adjoining
from app.services.exceptions import (
    CoincidentConics,
    InternalConsistencyError,
    InvalidCurve,
    SingularConic,
    Unresolved,
)
from app.services.field import FieldElement, FieldTower, common_tower
from app.services.geom import (
    ProjLine,
    ProjPoint,
    ProjTransform,
    adjugate3,
    cross,
    det3,
    dual,
    line_through,
    standardize_center,
)
from app.services.groups import group_descriptor
from app.services.models import SGPoint, SGReport
from app.services.poly import HomPoly, MPoly, proportional, pullback, resultant
from app.services.roots import require_sqrt, roots_in_tower

logger = logging.getLogger(__name__)

Matrix = Tuple[Tuple[FieldElement, ...], ...]

_HALF = Fraction(1, 2)
# matrix position -> monomial exponent
_MONOMIALS = {
    (0, 0): (2, 0, 0), (1, 1): (0, 2, 0), (2, 2): (0, 0, 2),
    (0, 1): (1, 1, 0), (0, 2): (1, 0, 1), (1, 2): (0, 1, 1),
}


@dataclass(frozen=True)
class Conic:
    """A degree-2 form together with its symmetric matrix (form = v^T A v)."""

    form: HomPoly
    matrix: Matrix

    @classmethod
    def from_form(cls, form: HomPoly) -> "Conic":
        if form.is_zero() or form.degree != 2:
            raise InvalidCurve(f"{form} is not a quadratic form")
        zero = form.tower.zero()
        m = [[zero] * 3 for _ in range(3)]
        for (i, j), exps in _MONOMIALS.items():
            c = form.terms.get(exps, zero)
            if i == j:
                m[i][i] = c
            else:
                m[i][j] = m[j][i] = c * _HALF
        return cls(form, tuple(tuple(row) for row in m))

    @classmethod
    def from_matrix(cls, matrix: Sequence[Sequence[FieldElement]], tower: Optional[FieldTower] = None) -> "Conic":
        tower = tower or matrix[0][0].tower
        terms = {exps: matrix[i][j] if i == j else matrix[i][j] * 2 for (i, j), exps in _MONOMIALS.items()}
        return cls.from_form(HomPoly(tower, terms, 2))

    @property
    def tower(self) -> FieldTower:
        return self.form.tower

    def lift(self, tower: FieldTower) -> "Conic":
        return self if tower == self.tower else Conic.from_form(self.form.lift(tower))

    def det(self) -> FieldElement:
        return det3(self.matrix)

    def is_nonsingular(self) -> bool:
        return not self.det().is_zero()

    def contains(self, point: ProjPoint) -> bool:
        return self.form.at(point.coords).is_zero()

    def bilinear(self, u: Sequence[FieldElement], v: Sequence[FieldElement]) -> FieldElement:
        total = self.tower.zero()
        for i in range(3):
            for j in range(3):
                total = total + u[i] * self.matrix[i][j] * v[j]
        return total

    def polar(self, point: ProjPoint) -> ProjLine:
        return ProjLine([self.bilinear(point.coords, e) for e in _basis(self.tower)], self.tower)

    def __str__(self) -> str:
        return str(self.form)


def _basis(tower: FieldTower) -> List[Tuple[FieldElement, ...]]:
    one, zero = tower.one(), tower.zero()
    return [(one, zero, zero), (zero, one, zero), (zero, zero, one)]


def _require_nonsingular(C: Conic) -> None:
    if not C.is_nonsingular():
        raise SingularConic(f"conic {C} is singular")


def _validated_pair(C1: Conic, C2: Conic) -> Tuple[Conic, Conic]:
    tower = common_tower(C1.tower, C2.tower)
    c1, c2 = C1.lift(tower), C2.lift(tower)
    _require_nonsingular(c1)
    _require_nonsingular(c2)
    if proportional(c1.form, c2.form) is not None:
        raise CoincidentConics(f"{c1} and {c2} define the same conic")
    return c1, c2


def dual_conic(C: Conic) -> Conic:
    """The conic of tangent lines, given by the adjugate matrix (canonical form)."""
    _require_nonsingular(C)
    dual_form = Conic.from_matrix(adjugate3(C.matrix), C.tower).form.canonical()
    return Conic.from_form(dual_form)


# =============================================================================
# Intersection
# =============================================================================

def line_conic_points(line: ProjLine, C: Conic) -> List[ProjPoint]:
    """Points of C on `line` (one or two; adjoinable square root on failure)."""
    tower = C.tower
    spanning = [v for v in (cross(line.coords, e) for e in _basis(tower)) if any(not x.is_zero() for x in v)]
    u = spanning[0]
    v = next(w for w in spanning[1:] if any(not x.is_zero() for x in cross(u, w)))
    a, b, c = C.bilinear(u, u), 2 * C.bilinear(u, v), C.bilinear(v, v)
    if a.is_zero() and b.is_zero() and c.is_zero():
        raise InternalConsistencyError(f"line {line} lies on the nonsingular conic {C}")
    params: List[FieldElement] = []
    points: List[ProjPoint] = []
    if a.is_zero():
        points.append(ProjPoint(u, tower))
        if not b.is_zero():
            params.append(-c / b)
    else:
        s = require_sqrt(b * b - 4 * a * c)
        params.extend([(-b + s) / (2 * a), (-b - s) / (2 * a)])
    for lam in params:
        P = ProjPoint([lam * x + y for x, y in zip(u, v)], tower)
        if P not in points:
            points.append(P)
    return points


def _skew(p: Sequence[FieldElement]) -> List[List[FieldElement]]:
    zero = p[0] - p[0]
    return [[zero, -p[2], p[1]], [p[2], zero, -p[0]], [-p[1], p[0], zero]]


def _is_rank_one(m: Sequence[Sequence[FieldElement]]) -> bool:
    for r1, r2 in combinations(range(3), 2):
        for c1, c2 in combinations(range(3), 2):
            if not (m[r1][c1] * m[r2][c2] - m[r1][c2] * m[r2][c1]).is_zero():
                return False
    return True


def split_degenerate(D: Sequence[Sequence[FieldElement]], tower: FieldTower) -> List[ProjLine]:
    """The line pair (or double line) of a singular symmetric matrix."""
    adj = adjugate3(D)
    if all(x.is_zero() for row in adj for x in row):
        row = next(r for r in D if any(not x.is_zero() for x in r))
        return [ProjLine(row, tower)]
    i = next(k for k in range(3) if not adj[k][k].is_zero())
    beta = require_sqrt(-adj[i][i])
    p = [adj[k][i] / beta for k in range(3)]
    for sign in (1, -1):
        skew = _skew(p)
        R = [[D[r][c] + sign * skew[r][c] for c in range(3)] for r in range(3)]
        if _is_rank_one(R):
            break
    else:
        raise InternalConsistencyError("degenerate pencil member does not split")
    r0, c0 = next((r, c) for r in range(3) for c in range(3) if not R[r][c].is_zero())
    lines = [ProjLine(R[r0], tower), ProjLine([R[r][c0] for r in range(3)], tower)]
    return lines if lines[0] != lines[1] else lines[:1]


def _pencil_points(c1: Conic, c2: Conic) -> List[ProjPoint]:
    tower = c1.tower
    t = MPoly.variable(tower, ("t",), "t")
    A, B = c1.matrix, c2.matrix
    pencil = [[t * B[i][j] + A[i][j] for j in range(3)] for i in range(3)]
    cubic = det3(pencil).to_upoly("t")
    ts = roots_in_tower(cubic, strict=False) or roots_in_tower(cubic)
    first_error: Optional[Unresolved] = None
    for t0 in ts:
        member = [[A[i][j] + t0 * B[i][j] for j in range(3)] for i in range(3)]
        try:
            points: List[ProjPoint] = []
            for line in split_degenerate(member, tower):
                for P in line_conic_points(line, c1):
                    if P not in points:
                        points.append(P)
            logger.debug(f"Pencil member t={t0} splits; {len(points)} intersection points")
            return points
        except Unresolved as exc:
            first_error = first_error or exc
    raise first_error


def _center_to_z(center: ProjPoint) -> ProjTransform:
    swap_yz = ProjTransform([[1, 0, 0], [0, 0, 1], [0, 1, 0]], center.tower)
    return swap_yz @ standardize_center(center)


def _projection_center(c1: Conic, c2: Conic, points: List[ProjPoint]) -> ProjPoint:
    tower = c1.tower
    candidates = [(0, 0, 1), (1, 0, 0), (0, 1, 0)]
    candidates += [(a, b, 1) for a in range(-4, 5) for b in range(-4, 5)]
    for coords in candidates:
        c = ProjPoint(coords, tower)
        if c1.contains(c) or c2.contains(c):
            continue
        if all(not det3([c.coords, P.coords, Q.coords]).is_zero() for P, Q in combinations(points, 2)):
            return c
    raise InternalConsistencyError("no separating projection center found")


def _multiplicities(c1: Conic, c2: Conic, points: List[ProjPoint]) -> List[Tuple[ProjPoint, int]]:
    # project from a center separating the points; root orders of Res_Z are the multiplicities
    center = _projection_center(c1, c2, points)
    T = _center_to_z(center)
    T_inv = T.inverse()
    R = resultant(pullback(c1.form, T_inv), pullback(c2.form, T_inv), "Z")
    r = R.substitute({"Y": 1}).to_upoly("X")
    out = []
    for P in points:
        x, y, _ = T.apply(P).coords
        if y.is_zero():
            m = 4 - r.degree
        else:
            root, m, q = x / y, 0, r
            while not q.is_zero() and q(root).is_zero():
                q = q.deflate(root)
                m += 1
        out.append((P, m))
    if sum(m for _, m in out) != 4 or any(m < 1 for _, m in out):
        raise InternalConsistencyError(f"intersection multiplicities {[m for _, m in out]} do not sum to 4")
    return out


def intersect_conics(C1: Conic, C2: Conic) -> List[Tuple[ProjPoint, int]]:
    """
    Distinct common points with multiplicities (summing to 4), sorted by the
    canonical point order. The points live in the tower reached after any
    adjunctions the pencil needed.
    """
    c1, c2 = _validated_pair(C1, C2)

    def compute(tower: FieldTower) -> List[Tuple[ProjPoint, int]]:
        a, b = c1.lift(tower), c2.lift(tower)
        points = _pencil_points(a, b)
        for P in points:
            if not (a.contains(P) and b.contains(P)):
                raise InternalConsistencyError(f"{P} is not on both conics")
        return _multiplicities(a, b, points)

    result = adjoining(compute, c1.tower)
    return sorted(result, key=lambda pm: pm[0].sort_key())


# =============================================================================
# Tangents and outer SG points
# =============================================================================

def tangent_lines_from(P: ProjPoint, C: Conic) -> List[ProjLine]:
    """Tangent lines to C through P: two when P is off C, the tangent at P otherwise."""
    _require_nonsingular(C)

    def compute(tower: FieldTower) -> List[ProjLine]:
        c, p = C.lift(tower), P.lift(tower)
        polar = c.polar(p)
        if c.contains(p):
            return [polar]
        return [line_through(p, q) for q in line_conic_points(polar, c)]

    return adjoining(compute, common_tower(P.tower, C.tower))


def _lift_sg_point(sp: SGPoint, tower: FieldTower) -> SGPoint:
    return SGPoint(sp.point.lift(tower), sp.kind, sp.witnesses, sp.group, [l.lift(tower) for l in sp.tangents])


def sg_outer_conics(C1: Conic, C2: Conic) -> SGReport:
    """
    All outer SG points of two nonsingular conics: each pair of distinct
    points of the dual intersection spans a line of the dual plane whose
    corresponding point is SG, certified by its common tangent lines.
    """
    c1, c2 = _validated_pair(C1, C2)
    dual_points = intersect_conics(dual_conic(c1), dual_conic(c2))
    tower = dual_points[0][0].tower
    c1, c2 = c1.lift(tower), c2.lift(tower)
    distinct = [p for p, _ in dual_points]

    outer: List[SGPoint] = []
    for p, q in combinations(distinct, 2):
        P = dual(line_through(p, q))
        expected = {dual(p), dual(q)}
        for conic in (c1, c2):
            tangents = [l.lift(tower) for l in tangent_lines_from(P, conic)]
            if set(tangents) != expected:
                raise InternalConsistencyError(f"tangent certification failed at {P} for {conic}")
        outer.append(SGPoint(P, "outer", group=group_descriptor(2, 2), tangents=sorted(expected, key=lambda l: l.sort_key())))
    outer.sort(key=lambda sp: sp.point.sort_key())

    k = len(distinct)
    flags = {
        "outer_equals_k_choose_2": len(outer) == k * (k - 1) // 2,
        "outer_in_0_1_3_6": len(outer) in (0, 1, 3, 6),
    }
    if not all(flags.values()):
        logger.error(f"Count check failed for conic pair: {flags}")
        raise InternalConsistencyError(f"outer SG count {len(outer)} violates the conic count theorem")

    report = SGReport(
        tower=tower,
        degree=2,
        components=[c1.form, c2.form],
        outer=outer,
        dual_intersection=dual_points,
        candidate_source="dual-intersection",
        complete=True,
        flags=flags,
    )
    _attach_trivial_inner(report, c1, c2)
    logger.info(f"Conic pair has {len(outer)} outer SG points from {k} dual intersections")
    return report


def _attach_trivial_inner(report: SGReport, c1: Conic, c2: Conic) -> None:
    # common points project with degree 1; listed but never counted
    try:
        common = intersect_conics(c1, c2)
    except Unresolved as exc:
        report.notes.append(f"trivial inner points not resolved: {exc.message}")
        return
    tower = common[0][0].tower
    if tower != report.tower:
        report.tower = tower
        report.components = [f.lift(tower) for f in report.components]
        report.outer = [_lift_sg_point(sp, tower) for sp in report.outer]
        report.dual_intersection = [(p.lift(tower), m) for p, m in report.dual_intersection]
    report.trivial_inner = [p for p, _ in common]
