"""
Normal forms of nonsingular plane curves with known Galois points.

Entries cover the Fermat curves, the curves XY^(d-1) + X^d + Z^d and the
quartic family C2^(j) obtained from XY^3 + X^4 + Z^4 by the transforms
Y -> (a-1)X + aY, a = zeta4^j. Diagonally scaled versions of the first two
families are recognized as well, since coordinate points are fixed by
diagonal transforms.
"""

import logging
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

from app.services.elimination import roots_with_adjunction
from app.services.exceptions import InvalidCurve
from app.services.field import QQ, FieldElement, FieldTower, UPoly, adjoin, cyclotomic_minpoly
from app.services.geom import ProjPoint, ProjTransform
from app.services.poly import HomPoly, proportional, pullback

logger = logging.getLogger(__name__)

INNER_PAIR_STATEMENT = (
    "If two nonsingular quartics C1, C2 have two inner SG points, some projective "
    "transformation T gives T(C1) = XY^3 + X^4 + Z^4 and T(C2) one of C2^(1), C2^(2), C2^(3)."
)


@dataclass
class NormalForm:
    """A curve whose Galois points are known exactly; inner None means every point of the curve."""
    name: str
    form: HomPoly
    inner: Optional[List[ProjPoint]]
    outer: List[ProjPoint]
    statement: str = ""

    @property
    def tower(self) -> FieldTower:
        return self.form.tower

    def lift(self, tower: FieldTower) -> "NormalForm":
        return NormalForm(
            self.name,
            self.form.lift(tower),
            None if self.inner is None else [p.lift(tower) for p in self.inner],
            [p.lift(tower) for p in self.outer],
            self.statement,
        )

    def transformed(self, T: ProjTransform, form: HomPoly) -> "NormalForm":
        """Entry for `form` where pullback(form, T) is this entry's form: points move by T."""
        tower = T.tower
        moved = lambda pts: [T.apply(p.lift(tower)) for p in pts]
        return NormalForm(
            self.name,
            form.lift(tower),
            None if self.inner is None else moved(self.inner),
            moved(self.outer),
            self.statement,
        )


@dataclass
class AutomorphismCheck:
    name: str
    transform: ProjTransform
    preserves: bool
    scalar: Optional[FieldElement]
    inner_image: List[ProjPoint] = field(default_factory=list)
    permutes_inner: bool = False


# =============================================================================
# Forms
# =============================================================================

def fermat(d: int, tower: FieldTower = QQ, coeffs: Tuple = (1, 1, 1)) -> HomPoly:
    a, b, c = coeffs
    return HomPoly(tower, {(d, 0, 0): a, (0, d, 0): b, (0, 0, d): c})


def xy_form(d: int, tower: FieldTower = QQ, coeffs: Tuple = (1, 1, 1)) -> HomPoly:
    """a*X*Y^(d-1) + b*X^d + c*Z^d."""
    a, b, c = coeffs
    return HomPoly(tower, {(1, d - 1, 0): a, (d, 0, 0): b, (0, 0, d): c})


def coordinate_points(tower: FieldTower = QQ) -> List[ProjPoint]:
    return [ProjPoint((0, 0, 1), tower), ProjPoint((0, 1, 0), tower), ProjPoint((1, 0, 0), tower)]


def with_zeta4(tower: FieldTower) -> Tuple[FieldTower, FieldElement]:
    """The tower (extended by zeta4 when needed) and a primitive 4th root of unity in it."""
    if "zeta4" in tower.names:
        return tower, tower.generator("zeta4")
    zeta, n = tower.root_of_unity
    if n % 4 != 0:
        tower = adjoin(tower, "zeta4", cyclotomic_minpoly(4).lift(tower))
        return tower, tower.generator("zeta4")
    return tower, zeta ** (n // 4)


def sigma_one(a: FieldElement) -> ProjTransform:
    """[[1,0,0],[a-1,a,0],[0,0,1]]: fixes (0:1:0) and (-1:1:0)."""
    return ProjTransform([[1, 0, 0], [a - 1, a, 0], [0, 0, 1]], a.tower)


def c2_forms(tower: FieldTower) -> Tuple[FieldTower, List[Tuple[int, HomPoly, ProjTransform]]]:
    """(j, C2^(j), transform) for j = 1, 2, 3 with C2^(j) = pullback(XY^3 + X^4 + Z^4, transform)."""
    tower, zeta4 = with_zeta4(tower)
    base = xy_form(4, tower)
    out = []
    for j in (1, 2, 3):
        sigma = sigma_one(zeta4 ** j)
        out.append((j, pullback(base, sigma), sigma))
    return tower, out


# =============================================================================
# Galois point sets
# =============================================================================

def _xy_points(d: int, a: FieldElement, b: FieldElement) -> Tuple[List[ProjPoint], List[ProjPoint]]:
    tower = a.tower
    inner = [ProjPoint((0, 1, 0), tower)]
    if d == 4:
        # remaining inner points are the other intersections with Z = 0: b*x^3 + a = 0
        tower, roots = roots_with_adjunction(UPoly(tower, [a, 0, 0, b]))
        inner = [p.lift(tower) for p in inner] + [ProjPoint((x, 1, 0), tower) for x in roots]
    return inner, [ProjPoint((0, 0, 1), tower)]


def _fermat_entry(form: HomPoly) -> NormalForm:
    d = form.degree
    return NormalForm(
        "fermat",
        form,
        None if d == 3 else [],
        coordinate_points(form.tower),
        "outer Galois points are the three coordinate points",
    )


def _xy_entry(form: HomPoly) -> NormalForm:
    d = form.degree
    a, b = form.terms[(1, d - 1, 0)], form.terms[(d, 0, 0)]
    inner, outer = _xy_points(d, a, b)
    tower = outer[0].tower
    statement = (
        "four inner Galois points and one outer" if d == 4
        else "one inner Galois point (0:1:0) and one outer (0:0:1)"
    )
    return NormalForm("xy", form.lift(tower), inner, outer, statement)


def _c2_entries(tower: FieldTower) -> List[NormalForm]:
    tower, forms = c2_forms(tower)
    base = _xy_entry(xy_form(4, tower))
    entries = []
    for j, form, sigma in forms:
        sigma = sigma.lift(base.tower)
        entry = base.transformed(sigma.inverse(), form)
        entry.name = f"c2^({j})"
        entry.statement = INNER_PAIR_STATEMENT
        entries.append(entry)
    return entries


def knowledge_base(d: int, tower: FieldTower = QQ) -> List[NormalForm]:
    """Literal normal forms of degree d with their Galois point sets, in a common tower."""
    if d < 3:
        raise InvalidCurve(f"the knowledge base starts at degree 3, got {d}")
    entries = [_fermat_entry(fermat(d, tower))]
    if d == 4:
        entries.extend(_c2_entries(tower))
        entries.insert(1, _xy_entry(xy_form(4, entries[-1].tower)))
    elif d >= 5:
        entries.append(_xy_entry(xy_form(d, tower)))
    final = max((e.tower for e in entries), key=lambda t: t.depth)
    return [e.lift(final) for e in entries]


def match_normal_form(form: HomPoly) -> Optional[NormalForm]:
    """The knowledge-base entry literally matching `form` (diagonal scalings allowed)."""
    d = form.degree
    if d < 3:
        return None
    keys = set(form.terms)
    if keys == {(d, 0, 0), (0, d, 0), (0, 0, d)}:
        return _fermat_entry(form)
    if d >= 4 and keys == {(1, d - 1, 0), (d, 0, 0), (0, 0, d)}:
        return _xy_entry(form)
    if d == 4 and form.tower.root_of_unity[1] % 4 == 0:
        _, forms = c2_forms(form.tower)
        for j, c2, _ in forms:
            if proportional(form, c2) is not None:
                entry = next(e for e in _c2_entries(form.tower) if e.name == f"c2^({j})")
                return NormalForm(entry.name, form.lift(entry.tower), entry.inner, entry.outer, entry.statement)
    return None


# =============================================================================
# Printed automorphisms of XY^3 + X^4 + Z^4
# =============================================================================

def printed_automorphisms(tower: Optional[FieldTower] = None) -> Tuple[FieldTower, List[Tuple[str, ProjTransform]]]:
    """diag(1, w^2, 1) and [[1, w^2, 0], [2w^2, -w, 0], [0, 0, sqrt3]] over Q(zeta3, sqrt3)."""
    if tower is None:
        tower = adjoin(QQ, "zeta3", cyclotomic_minpoly(3))
        tower = adjoin(tower, "sqrt3", UPoly(tower, [-3, 0, 1]))
    w, s = tower.generator("zeta3"), tower.generator("sqrt3")
    sigma1 = ProjTransform.diagonal(1, w * w, 1, tower)
    sigma2 = ProjTransform([[1, w * w, 0], [2 * w * w, -w, 0], [0, 0, s]], tower)
    return tower, [("sigma1", sigma1), ("sigma2", sigma2)]


def verify_printed_automorphisms() -> List[AutomorphismCheck]:
    """Pull XY^3 + X^4 + Z^4 back through each printed matrix and record what holds."""
    tower, transforms = printed_automorphisms()
    curve = xy_form(4, tower)
    w = tower.generator("zeta3")
    inner = [ProjPoint((x, 1, 0), tower) for x in (0, -1, -w, -w * w)]
    checks = []
    for name, T in transforms:
        xi = proportional(pullback(curve, T), curve)
        image = [T.apply(p) for p in inner]
        check = AutomorphismCheck(name, T, xi is not None, xi, image, set(image) == set(inner))
        if not check.preserves:
            logger.warning(f"Printed matrix {name} does not preserve {curve}")
        checks.append(check)
    return checks
