"""
Galois and SG points of nonsingular plane curves.

Every check reduces to one question: which projective transformations that
preserve each line through P carry one form onto a multiple of another. The
answer is computed exactly by coefficient comparison after moving P to
(0:1:0), where such transformations are [[1,0,0],[p,q,r],[0,0,1]].
"""

import logging
from dataclasses import dataclass
from itertools import combinations
from typing import Dict, List, Optional, Sequence, Tuple

from app.services.conic import Conic, sg_outer_conics
from app.services.elimination import PositiveDimensional, solve_system
from app.services.exceptions import (
    InternalConsistencyError,
    InvalidCurve,
    MixedDegrees,
    NoCandidateSource,
)
from app.services.field import FieldElement, FieldTower, common_tower
from app.services.geom import FiberFamily, ProjPoint, ProjTransform, cross, fiber_family
from app.services.groups import group_descriptor
from app.services.knowledge import NormalForm, match_normal_form
from app.services.models import GaloisVerdict, SGCheck, SGPoint, SGReport, SGWitness
from app.services.poly import (
    XYZ,
    HomPoly,
    MPoly,
    is_nonsingular,
    proportional,
    pullback,
    split_coefficients,
    substitute_linear,
)

logger = logging.getLogger(__name__)

__all__ = [
    "CurvePair",
    "FiberPair",
    "galois_point_check",
    "group_descriptor",
    "sg_enumerate",
    "sg_enumerate_multi",
    "sg_point_check",
    "sg_point_check_multi",
    "solve_fiber_pairs",
    "solve_fiber_transforms",
    "verify_witness",
]

_PARAMS = ("p", "q", "r")
_VARIABLES = XYZ + _PARAMS


@dataclass(frozen=True)
class CurvePair:
    """Two nonsingular, non-proportional components over one tower."""

    c1: HomPoly
    c2: HomPoly

    @classmethod
    def create(cls, c1: HomPoly, c2: HomPoly, check: bool = True) -> "CurvePair":
        tower = common_tower(c1.tower, c2.tower)
        c1, c2 = c1.lift(tower), c2.lift(tower)
        for i, c in enumerate((c1, c2), start=1):
            if c.is_zero() or c.degree < 2:
                raise InvalidCurve(f"component {i} must have degree >= 2, got {c}")
            if check and not is_nonsingular(c):
                raise InvalidCurve(f"component {i} is singular: {c}", {"component": i})
        if c1.degree == c2.degree and proportional(c1, c2) is not None:
            raise InvalidCurve("the components are proportional", {"c1": str(c1), "c2": str(c2)})
        return cls(c1, c2)

    @property
    def tower(self) -> FieldTower:
        return self.c1.tower

    @property
    def degrees(self) -> Tuple[int, int]:
        return self.c1.degree, self.c2.degree

    @property
    def components(self) -> List[HomPoly]:
        return [self.c1, self.c2]

    def lift(self, tower: FieldTower) -> "CurvePair":
        return CurvePair(self.c1.lift(tower), self.c2.lift(tower))


@dataclass(frozen=True)
class FiberPair:
    """A solution of the paired system: sigma1 and sigma2 pull C back to proportional forms."""

    sigma1: ProjTransform
    sigma2: ProjTransform
    scalar: FieldElement
    commutes: bool


# =============================================================================
# Lifting helpers
# =============================================================================

def _lift_witness(w: SGWitness, tower: FieldTower) -> SGWitness:
    return SGWitness(w.point.lift(tower), w.transform.lift(tower), tower.lift(w.scalar), w.direction)


def _lift_verdict(v: GaloisVerdict, tower: FieldTower) -> GaloisVerdict:
    return GaloisVerdict(v.point.lift(tower), v.component, v.is_galois, v.projection_degree,
                         [g.lift(tower) for g in v.group])


def _lift_check(c: SGCheck, tower: FieldTower) -> SGCheck:
    return SGCheck(
        c.point.lift(tower), c.is_sg, c.kind,
        [_lift_verdict(v, tower) for v in c.verdicts],
        [_lift_witness(w, tower) for w in c.witnesses],
        c.reason, dict(c.pairwise),
    )


def _lift_sg_point(sp: SGPoint, tower: FieldTower) -> SGPoint:
    return SGPoint(sp.point.lift(tower), sp.kind, [_lift_witness(w, tower) for w in sp.witnesses],
                   sp.group, [l.lift(tower) for l in sp.tangents])


def _transform_key(T: ProjTransform) -> Tuple:
    return tuple(c.flat() for row in T.canonical().matrix for c in row)


# =============================================================================
# Fiber-preserving transforms
# =============================================================================

def _fiber_transforms(P: ProjPoint, source: HomPoly, target: HomPoly) -> List[SGWitness]:
    tower = P.tower
    family = fiber_family(P)
    back = family.conjugator.inverse()
    s, t = pullback(source, back), pullback(target, back)

    # with P at (0:1:0) the top Y-degree part only scales by q^e
    e = t.degree_in("Y")
    if s.degree_in("Y") != e:
        return []
    rho = proportional(t.coefficients_in("Y")[e], s.coefficients_in("Y")[e])
    if rho is None:
        return []

    x, y, z, p, q, r = (MPoly.variable(tower, _VARIABLES, v) for v in _VARIABLES)
    image = substitute_linear(t, [x, p * x + q * y + r * z, z])
    residual = image - s.with_variables(_VARIABLES) * rho * q ** e
    equations = [c for c in split_coefficients(residual, XYZ).values() if not c.is_zero()]
    if not equations:
        raise PositiveDimensional(f"every transform fixing the lines through {P} works", free=_PARAMS)

    tower, solutions = solve_system(equations, _PARAMS, nonzero=("q",), tower=tower)
    family = fiber_family(P.lift(tower))
    source, target = source.lift(tower), target.lift(tower)
    witnesses = []
    for sol in solutions:
        phi = family.member(sol["p"], sol["q"], sol["r"])
        xi = proportional(pullback(target, phi), source)
        if xi is None:
            raise InternalConsistencyError(f"transform {phi} fails verification at {P}")
        witnesses.append(SGWitness(family.center, phi, xi))
    witnesses.sort(key=lambda w: _transform_key(w.transform))
    return witnesses


def solve_fiber_transforms(P: ProjPoint, source: HomPoly, target: HomPoly) -> List[SGWitness]:
    """
    Every transform phi preserving each line through P with pullback(target, phi)
    proportional to source. Witnesses live in the (possibly extended) tower the
    solutions needed, sorted by canonical matrix.
    """
    if source.degree != target.degree:
        raise MixedDegrees(f"degrees {source.degree} and {target.degree} differ")
    if source.degree < 2:
        raise InvalidCurve(f"fiber transforms need degree >= 2, got {source.degree}")
    tower = common_tower(P.tower, source.tower, target.tower)
    witnesses = _fiber_transforms(P.lift(tower), source.lift(tower), target.lift(tower))
    logger.debug(f"Found {len(witnesses)} fiber transforms at {P}")
    return witnesses


def verify_witness(P: ProjPoint, pair: CurvePair, T: ProjTransform) -> Optional[SGWitness]:
    """The witness T gives for P when it preserves the lines through P and pullback(c1, T) ~ c2."""
    tower = common_tower(P.tower, pair.tower, T.tower)
    P, T, pair = P.lift(tower), T.lift(tower), pair.lift(tower)
    if not fiber_family(P).contains(T):
        return None
    xi = proportional(pullback(pair.c1, T), pair.c2)
    return None if xi is None else SGWitness(P, T, xi)


def _check_group(P: ProjPoint, group: Sequence[ProjTransform]) -> None:
    members = set(group)
    if not any(g.is_identity() for g in group):
        raise InternalConsistencyError(f"fiber transforms at {P} miss the identity")
    for a in group:
        for b in group:
            if a @ b not in members:
                raise InternalConsistencyError(f"fiber transforms at {P} are not closed under composition")


def projection_degree(P: ProjPoint, C: HomPoly) -> int:
    """d when P is off C, d - 1 when P lies on the (nonsingular) curve."""
    tower = common_tower(P.tower, C.tower)
    on = C.lift(tower).at(P.lift(tower).coords).is_zero()
    return C.degree - 1 if on else C.degree


def galois_point_check(P: ProjPoint, C: HomPoly, component: int = 1) -> GaloisVerdict:
    """
    P is Galois for C iff the transforms preserving C and every line through P
    number exactly deg(projection from P). Degree <= 2 projections are always Galois.
    """
    degree = projection_degree(P, C)
    P = P.lift(common_tower(P.tower, C.tower))
    if degree <= 2:
        return GaloisVerdict(P, component, True, degree)
    group = [w.transform for w in solve_fiber_transforms(P, C, C)]
    if len(group) > degree:
        raise InternalConsistencyError(f"{len(group)} fiber automorphisms exceed projection degree {degree}")
    _check_group(P, group)
    tower = group[0].tower
    return GaloisVerdict(P.lift(tower), component, len(group) == degree, degree, group)


def classify_point(P: ProjPoint, components: Sequence[HomPoly]) -> str:
    """inner when P lies on every component, outer when on none, otherwise neither."""
    on = [c.at(P.coords).is_zero() for c in components]
    if all(on):
        return "inner"
    if not any(on):
        return "outer"
    return "neither"


def sg_point_check(P: ProjPoint, pair: CurvePair) -> SGCheck:
    """P is SG for the pair iff it is Galois for both and some fiber transform carries c1 onto c2."""
    if pair.degrees[0] != pair.degrees[1]:
        raise MixedDegrees(
            f"components of degrees {pair.degrees} have projection fibers of different sizes",
            {"degrees": list(pair.degrees)},
        )
    tower = common_tower(P.tower, pair.tower)
    P, pair = P.lift(tower), pair.lift(tower)
    kind = classify_point(P, pair.components)
    if kind == "neither":
        return SGCheck(P, False, kind, reason="the point lies on some but not all components")

    verdicts = []
    for i, c in enumerate(pair.components, start=1):
        v = galois_point_check(P, c.lift(tower), i)
        verdicts.append(v)
        tower = common_tower(tower, v.point.tower)
        if not v.is_galois:
            check = SGCheck(P, False, kind, verdicts, reason=f"not a Galois point for component {i}")
            return _lift_check(check, tower)

    pair = pair.lift(tower)
    witnesses = solve_fiber_transforms(P.lift(tower), pair.c2, pair.c1)
    if not witnesses:
        check = SGCheck(P, False, kind, verdicts, reason="no fiber-preserving transform maps c1 onto c2")
        return _lift_check(check, tower)
    return _lift_check(SGCheck(P, True, kind, verdicts, witnesses), witnesses[0].transform.tower)


# =============================================================================
# Paired fiber system
# =============================================================================

_PAIR_PARAMS = ("p1", "q1", "r1", "p2", "q2", "r2", "lam")
_PAIR_VARIABLES = XYZ + _PAIR_PARAMS


def _symbolic_member(family: FiberFamily, names: Sequence[str]) -> List[List[MPoly]]:
    """conjugator^-1 [[1,0,0],[p,q,r],[0,0,1]] conjugator with symbolic p, q, r."""
    tower = family.tower
    const = lambda c: MPoly.constant(tower, _PAIR_VARIABLES, c)
    p, q, r = (MPoly.variable(tower, _PAIR_VARIABLES, n) for n in names)
    middle = [[const(1), const(0), const(0)], [p, q, r], [const(0), const(0), const(1)]]
    A = [[const(c) for c in row] for row in family.conjugator.matrix]
    B = [[const(c) for c in row] for row in family.conjugator.inverse().matrix]

    def matmul(u, v):
        return [[sum((u[i][k] * v[k][j] for k in range(3)), const(0)) for j in range(3)] for i in range(3)]

    return matmul(matmul(B, middle), A)


def _symbolic_pullback(C: HomPoly, sigma: List[List[MPoly]]) -> MPoly:
    tower = C.tower
    xyz = [MPoly.variable(tower, _PAIR_VARIABLES, v) for v in XYZ]
    forms = [sum((sigma[i][j] * xyz[j] for j in range(3)), MPoly.constant(tower, _PAIR_VARIABLES, 0))
             for i in range(3)]
    return substitute_linear(C, forms)


def _fixes(sigma: List[List[MPoly]], P: ProjPoint) -> List[MPoly]:
    image = [sum((sigma[i][j] * P.coords[j] for j in range(1, 3)), sigma[i][0] * P.coords[0]) for i in range(3)]
    return cross(image, P.coords)


def solve_fiber_pairs(P1: ProjPoint, P2: ProjPoint, C: HomPoly) -> List[FiberPair]:
    """
    Pairs (sigma1, sigma2) with sigma_i preserving the lines through P_i and
    fixing the other center, such that pullback(C, sigma1) is a multiple of
    pullback(C, sigma2). On XY^3 + X^4 + Z^4 with centers (0:1:0) and (-1:1:0)
    these are the four matrices with a^4 = 1 and c = a^3.
    """
    tower = common_tower(P1.tower, P2.tower, C.tower)
    P1, P2, C = P1.lift(tower), P2.lift(tower), C.lift(tower)
    f1, f2 = fiber_family(P1), fiber_family(P2)
    s1, s2 = _symbolic_member(f1, _PAIR_PARAMS[:3]), _symbolic_member(f2, _PAIR_PARAMS[3:6])
    lam = MPoly.variable(tower, _PAIR_VARIABLES, "lam")

    residual = _symbolic_pullback(C, s1) - _symbolic_pullback(C, s2) * lam
    polys = _fixes(s1, P2) + _fixes(s2, P1) + [residual]
    equations = []
    for poly in polys:
        equations.extend(c for c in split_coefficients(poly, XYZ).values() if not c.is_zero())

    tower, solutions = solve_system(equations, _PAIR_PARAMS, nonzero=("q1", "q2", "lam"), tower=tower)
    f1, f2 = fiber_family(P1.lift(tower)), fiber_family(P2.lift(tower))
    C, P1, P2 = C.lift(tower), f1.center, f2.center
    pairs = []
    for sol in solutions:
        sigma1 = f1.member(sol["p1"], sol["q1"], sol["r1"])
        sigma2 = f2.member(sol["p2"], sol["q2"], sol["r2"])
        xi = proportional(pullback(C, sigma1), pullback(C, sigma2))
        if xi is None or sigma1.apply(P2) != P2 or sigma2.apply(P1) != P1:
            raise InternalConsistencyError(f"paired solution {sigma1}, {sigma2} fails verification")
        pairs.append(FiberPair(sigma1, sigma2, xi, sigma1 @ sigma2 == sigma2 @ sigma1))
    pairs.sort(key=lambda fp: (_transform_key(fp.sigma1), _transform_key(fp.sigma2)))
    logger.info(f"Paired fiber system at {P1}, {P2}: {len(pairs)} solutions")
    return pairs


# =============================================================================
# Several components
# =============================================================================

def _validated_components(components: Sequence[HomPoly]) -> List[HomPoly]:
    if len(components) < 2:
        raise InvalidCurve("an SG analysis needs at least two components")
    tower = common_tower(*(c.tower for c in components))
    components = [c.lift(tower) for c in components]
    degrees = sorted({c.degree for c in components})
    if len(degrees) > 1:
        raise MixedDegrees(f"components have degrees {degrees}", {"degrees": degrees})
    for i, j in combinations(range(len(components)), 2):
        if proportional(components[i], components[j]) is not None:
            raise InvalidCurve(f"components {i + 1} and {j + 1} are proportional")
    return components


def sg_point_check_multi(P: ProjPoint, components: Sequence[HomPoly], pairwise: bool = False) -> SGCheck:
    """
    P is SG for C1 + ... + Cn iff it is Galois for every component and each
    C_j is reached from C_1 by a fiber transform. With `pairwise` the check is
    also run on every pair of components and recorded per pair.
    """
    components = _validated_components(components)
    tower = common_tower(P.tower, components[0].tower)
    P = P.lift(tower)
    kind = classify_point(P, [c.lift(tower) for c in components])
    result = SGCheck(P, False, kind)

    if kind == "neither":
        result.reason = "the point lies on some but not all components"
    else:
        for i, c in enumerate(components, start=1):
            v = galois_point_check(P, c.lift(tower), i)
            result.verdicts.append(v)
            tower = common_tower(tower, v.point.tower)
            if not v.is_galois:
                result.reason = f"not a Galois point for component {i}"
                break
        else:
            for j, c in enumerate(components[1:], start=2):
                found = solve_fiber_transforms(P.lift(tower), c.lift(tower), components[0].lift(tower))
                if not found:
                    result.reason = f"no fiber-preserving transform maps component 1 onto component {j}"
                    break
                tower = found[0].transform.tower
                result.witnesses.extend(
                    SGWitness(w.point, w.transform, w.scalar, (j, 1)) for w in found
                )
            else:
                result.is_sg = True

    if pairwise:
        for i, j in combinations(range(len(components)), 2):
            pair = CurvePair(components[i].lift(tower), components[j].lift(tower))
            check = sg_point_check(P.lift(tower), pair)
            result.pairwise[(i + 1, j + 1)] = check.is_sg
            tower = common_tower(tower, check.point.tower)
    return _lift_check(result, tower)


# =============================================================================
# Enumeration
# =============================================================================

def count_flags(d: int, inner: int, outer: int, inner_enumerated: bool = True) -> Dict[str, bool]:
    """Count bounds for equal-degree components of degree d >= 3."""
    flags = {"outer_at_most_one": outer <= 1}
    if d == 4 and inner_enumerated:
        flags["inner_at_most_two"] = inner <= 2
    if d >= 5:
        flags["inner_at_most_one"] = inner <= 1
    if d >= 4:
        flags["never_both"] = not (inner and outer)
    return flags


def _match(C: HomPoly, normalizer: Optional[ProjTransform]) -> Optional[NormalForm]:
    entry = match_normal_form(C)
    if entry is not None or normalizer is None:
        return entry
    T = normalizer.lift(common_tower(normalizer.tower, C.tower))
    entry = match_normal_form(pullback(C.lift(T.tower), T))
    if entry is None:
        return None
    return entry.transformed(T.lift(entry.tower), C)


def _knowledge_candidates(
    components: List[HomPoly], normalizer: Optional[ProjTransform]
) -> Tuple[FieldTower, List[NormalForm], Optional[List[ProjPoint]], List[ProjPoint]]:
    tower = components[0].tower
    entries: List[NormalForm] = []
    for c in components:
        entry = _match(c.lift(tower), normalizer)
        if entry is not None:
            tower = entry.tower
            entries.append(entry)
    entries = [e.lift(tower) for e in entries]
    if not entries:
        return tower, [], None, []

    inner: Optional[set] = None
    for e in entries:
        if e.inner is not None:
            inner = set(e.inner) if inner is None else inner & set(e.inner)
    outer = set(entries[0].outer)
    for e in entries[1:]:
        outer &= set(e.outer)
    key = lambda p: p.sort_key()
    return tower, entries, None if inner is None else sorted(inner, key=key), sorted(outer, key=key)


def _sg_point(check: SGCheck, d: int, n: int) -> SGPoint:
    h = d - 1 if check.kind == "inner" else d
    return SGPoint(check.point, check.kind, check.witnesses, group_descriptor(h, n, check.witnesses))


def _enumerate(
    components: List[HomPoly],
    candidates: Optional[Sequence[ProjPoint]],
    normalizer: Optional[ProjTransform],
) -> SGReport:
    d, n = components[0].degree, len(components)
    tower, entries, inner_candidates, outer_candidates = _knowledge_candidates(components, normalizer)
    if not entries and not candidates:
        raise NoCandidateSource(
            "no component matches a known normal form and no candidate points were given",
            {"components": [str(c) for c in components]},
        )

    pool: List[ProjPoint] = list(outer_candidates) + list(inner_candidates or [])
    for p in candidates or []:
        tower = common_tower(tower, p.tower)
    pool = [p.lift(tower) for p in pool] + [p.lift(tower) for p in candidates or []]
    pool = list(dict.fromkeys(pool))

    report = SGReport(
        tower=tower,
        degree=d,
        components=components,
        candidate_source="+".join(s for s, used in (("knowledge-base", entries), ("user", candidates)) if used),
        complete=bool(entries),
        inner_enumerated=bool(entries) and inner_candidates is not None,
    )
    if entries:
        report.notes.append("matched normal forms: " + ", ".join(e.name for e in entries))
    if entries and inner_candidates is None:
        report.notes.append("inner SG points not enumerated: every point of a nonsingular cubic is an inner Galois point")

    for P in pool:
        if n == 2:
            check = sg_point_check(P.lift(tower), CurvePair(*(c.lift(tower) for c in components)))
        else:
            check = sg_point_check_multi(P.lift(tower), [c.lift(tower) for c in components])
        tower = common_tower(tower, check.point.tower)
        report.checks.append(check)
        if check.is_sg:
            target = report.inner if check.kind == "inner" else report.outer
            target.append(_sg_point(check, d, n))

    report.tower = tower
    report.components = [c.lift(tower) for c in components]
    report.checks = [_lift_check(c, tower) for c in report.checks]
    report.inner = sorted((_lift_sg_point(sp, tower) for sp in report.inner), key=lambda sp: sp.point.sort_key())
    report.outer = sorted((_lift_sg_point(sp, tower) for sp in report.outer), key=lambda sp: sp.point.sort_key())

    report.flags = count_flags(d, len(report.inner), len(report.outer), report.inner_enumerated)
    if not all(report.flags.values()):
        logger.error(f"Count check failed for degree {d}: {report.flags}")
        raise InternalConsistencyError(f"SG counts violate the count theorems: {report.flags}", report.flags)
    logger.info(
        f"Checked {len(pool)} candidates ({report.candidate_source}): "
        f"{len(report.inner)} inner, {len(report.outer)} outer SG points"
    )
    return report


def sg_enumerate(
    pair: CurvePair,
    candidates: Optional[Sequence[ProjPoint]] = None,
    normalizer: Optional[ProjTransform] = None,
) -> SGReport:
    """
    SG points of a pair. Conics are enumerated completely from the dual
    intersection; higher degrees check the candidates given by known normal
    forms (complete) and/or by the caller (not known to be complete).
    """
    if pair.degrees[0] != pair.degrees[1]:
        raise MixedDegrees(
            f"components of degrees {pair.degrees}: differing degrees are not supported",
            {"degrees": list(pair.degrees)},
        )
    if pair.degrees[0] == 2:
        report = sg_outer_conics(Conic.from_form(pair.c1), Conic.from_form(pair.c2))
        if candidates:
            report.notes.append("candidate points ignored: conic pairs are enumerated completely")
        return report
    return _enumerate(pair.components, candidates, normalizer)


def sg_enumerate_multi(
    components: Sequence[HomPoly],
    candidates: Optional[Sequence[ProjPoint]] = None,
    normalizer: Optional[ProjTransform] = None,
) -> SGReport:
    """SG points of n >= 2 components of one degree."""
    components = _validated_components(components)
    if len(components) == 2:
        return sg_enumerate(CurvePair(*components), candidates, normalizer)
    if components[0].degree > 2:
        return _enumerate(components, candidates, normalizer)

    # conics: the outer SG points of all components are among those of the first two
    first = sg_outer_conics(Conic.from_form(components[0]), Conic.from_form(components[1]))
    tower = first.tower
    report = SGReport(
        tower=tower, degree=2, components=components,
        dual_intersection=first.dual_intersection,
        candidate_source="dual-intersection", complete=True,
    )
    for sp in first.outer:
        check = sg_point_check_multi(sp.point.lift(tower), [c.lift(tower) for c in components])
        tower = common_tower(tower, check.point.tower)
        report.checks.append(check)
        if check.is_sg:
            report.outer.append(_sg_point(check, 2, len(components)))
    report.tower = tower
    report.components = [c.lift(tower) for c in components]
    report.checks = [_lift_check(c, tower) for c in report.checks]
    report.outer = [_lift_sg_point(sp, tower) for sp in report.outer]
    report.dual_intersection = [(p.lift(tower), m) for p, m in report.dual_intersection]
    report.flags = {"outer_subset_of_first_pair": len(report.outer) <= len(first.outer)}
    report.notes.append("trivial inner points are listed for conic pairs only")
    return report
