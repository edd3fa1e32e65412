from fractions import Fraction
from itertools import combinations

import pytest
import sympy

from app.services.conic import (
    Conic,
    dual_conic,
    intersect_conics,
    line_conic_points,
    sg_outer_conics,
    split_degenerate,
    tangent_lines_from,
)
from app.services.exceptions import CoincidentConics, InvalidCurve, SingularConic
from app.services.geom import ProjLine, ProjPoint, det3, line_through
from app.services.parser import parse_point, parse_points
from app.services.poly import HomPoly, proportional
from helpers import X, Y, curve, to_sympy


def _conic(text: str) -> Conic:
    return Conic.from_form(curve(text))


def _lifted(points, tower):
    return {p.lift(tower) for p in points}


@pytest.mark.parametrize("form,dual_form", [
    ("X^2 + Y^2 - Z^2", "X^2 + Y^2 - Z^2"),
    ("X^2 + Y^2 - 4*Y*Z + 3*Z^2", "X^2 - 3*Y^2 - 4*Y*Z - Z^2"),
    ("X^2 - 4*Y*Z", "X^2 - Y*Z"),
    ("X^2 + 4*Y^2 - 4*Y*Z", "X^2 - Y*Z - Z^2"),
])
def test_dual_conics_of_the_worked_examples(form, dual_form):
    assert proportional(dual_conic(_conic(form)).form, curve(dual_form)) is not None


def test_dual_matches_sympy_adjugate():
    C = _conic("2*X^2 + X*Y - 3*Y*Z + Z^2 + 5*X*Z")
    A = sympy.Matrix([[sympy.Rational(c.to_fraction().numerator, c.to_fraction().denominator) for c in row]
                      for row in C.matrix])
    adj = A.adjugate()
    x, y, z = sympy.symbols("X Y Z")
    v = sympy.Matrix([x, y, z])
    expected = sympy.expand((v.T * adj * v)[0])
    ratio = sympy.simplify(to_sympy(dual_conic(C).form) / expected)
    assert ratio.is_number and ratio != 0


def test_dual_twice_is_the_conic():
    C = _conic("X^2 + 2*Y^2 - 3*Z^2 + X*Y")
    assert proportional(dual_conic(dual_conic(C)).form, C.form) is not None


def test_singular_and_non_quadratic_inputs():
    with pytest.raises(SingularConic):
        dual_conic(_conic("X*Y"))
    with pytest.raises(InvalidCurve):
        Conic.from_form(curve("X^3 + Y^3 + Z^3"))
    with pytest.raises(CoincidentConics):
        intersect_conics(_conic("X^2 + Y^2 - Z^2"), _conic("2*X^2 + 2*Y^2 - 2*Z^2"))


def test_dual_intersection_with_multiplicities():
    points = intersect_conics(_conic("X^2 + Y^2 - Z^2"), _conic("X^2 - 3*Y^2 - 4*Y*Z - Z^2"))
    found = {p: m for p, m in points}
    assert found == {
        parse_point("(-1:0:1)"): 1,
        parse_point("(1:0:1)"): 1,
        parse_point("(0:-1:1)"): 2,
    }
    assert [p for p, _ in points] == sorted(found, key=lambda p: p.sort_key())


def test_fourfold_contact():
    points = intersect_conics(_conic("X^2 - Y*Z"), _conic("X^2 - Y*Z - Z^2"))
    assert points == [(parse_point("(0:1:0)"), 4)]


def test_intersection_needing_an_extension():
    points = intersect_conics(_conic("X^2 + Y^2 - Z^2"), _conic("X^2 + Y^2 - 4*Y*Z + 3*Z^2"))
    tower = points[0][0].tower
    assert tower.depth == 1
    assert sum(m for _, m in points) == 4
    assert dict(points)[parse_point("(0:1:1)").lift(tower)] == 2
    assert len(points) == 3


def test_intersection_matches_sympy_on_rational_pencils(rng):
    checked = 0
    while checked < 4:
        pts = [ProjPoint((rng.randint(-4, 4), rng.randint(-4, 4), 1)) for _ in range(4)]
        if any(det3([p.coords, q.coords, r.coords]).is_zero() for p, q, r in combinations(pts, 3)):
            continue
        l12, l34 = line_through(pts[0], pts[1]).form(), line_through(pts[2], pts[3]).form()
        l13, l24 = line_through(pts[0], pts[2]).form(), line_through(pts[1], pts[3]).form()
        f1 = HomPoly.from_mpoly(l12 * l34 + l13 * l24)
        f2 = HomPoly.from_mpoly(l12 * l34 - l13 * l24 * 2)
        c1, c2 = Conic.from_form(f1), Conic.from_form(f2)
        if not (c1.is_nonsingular() and c2.is_nonsingular()):
            continue
        found = intersect_conics(c1, c2)
        assert all(m == 1 for _, m in found)
        solved = sympy.solve([to_sympy(f1).subs("Z", 1), to_sympy(f2).subs("Z", 1)], [X, Y], dict=True)
        expected = {ProjPoint((Fraction(str(s[X])), Fraction(str(s[Y])), 1)) for s in solved}
        assert {p for p, _ in found} == expected
        checked += 1


def test_tangent_lines_from_outside_and_on():
    C = _conic("X^2 + Y^2 - Z^2")
    assert set(tangent_lines_from(parse_point("(0:1:0)"), C)) == {ProjLine((1, 0, 1)), ProjLine((1, 0, -1))}
    assert tangent_lines_from(parse_point("(1:0:1)"), C) == [ProjLine((1, 0, -1))]
    imaginary = tangent_lines_from(parse_point("(0:0:1)"), C)
    assert len(imaginary) == 2 and imaginary[0].tower.depth == 1


def test_line_conic_points_and_split():
    C = _conic("X^2 + Y^2 - Z^2")
    assert set(line_conic_points(ProjLine((0, 1, 0)), C)) == set(parse_points("(1:0:1); (-1:0:1)"))
    tower = C.tower
    pair = Conic.from_form(curve("X^2 - Y^2")).matrix
    assert set(split_degenerate(pair, tower)) == {ProjLine((1, 1, 0)), ProjLine((1, -1, 0))}
    double = Conic.from_form(curve("Y^2")).matrix
    assert split_degenerate(double, tower) == [ProjLine((0, 1, 0))]


def test_outer_sg_points_with_tangent_certificates():
    report = sg_outer_conics(_conic("X^2 + Y^2 - Z^2"), _conic("X^2 + Y^2 - 4*Y*Z + 3*Z^2"))
    tower = report.tower
    outer = {sp.point: sp for sp in report.outer}
    assert set(outer) == _lifted(parse_points("(0:1:0); (1:1:1); (-1:1:1)"), tower)
    l, l_prime, l_sharp = (ProjLine(c).lift(tower) for c in ((1, 0, 1), (1, 0, -1), (0, 1, -1)))
    assert set(outer[parse_point("(0:1:0)").lift(tower)].tangents) == {l, l_prime}
    assert set(outer[parse_point("(1:1:1)").lift(tower)].tangents) == {l_prime, l_sharp}
    assert set(outer[parse_point("(-1:1:1)").lift(tower)].tangents) == {l_sharp, l}
    assert report.flags == {"outer_equals_k_choose_2": True, "outer_in_0_1_3_6": True}
    assert report.complete is True
    assert all(sp.group.descriptors == ("Z/2 x Z/2", "Z/4") for sp in report.outer)
    assert len(report.trivial_inner) == 3


def test_no_outer_point_for_tangent_duals():
    report = sg_outer_conics(_conic("X^2 - 4*Y*Z"), _conic("X^2 + 4*Y^2 - 4*Y*Z"))
    assert report.outer == []
    assert [p for p, _ in report.dual_intersection] == [parse_point("(0:1:0)")]


@pytest.mark.parametrize("i,j", [(1, 2), (2, 3), (1, 4), (3, 4)])
def test_diagonal_family_has_six_outer_points(i, j):
    c1 = _conic(f"X^2 + 1/{i}*Y^2 - 1/{i + 1}*Z^2")
    c2 = _conic(f"X^2 + 1/{j}*Y^2 - 1/{j + 1}*Z^2")
    report = sg_outer_conics(c1, c2)
    tower = report.tower
    assert {p for p, _ in report.dual_intersection} == _lifted(
        parse_points("(1:1:1); (-1:1:1); (1:-1:1); (1:1:-1)"), tower)
    assert {sp.point for sp in report.outer} == _lifted(
        parse_points("(0:1:1); (1:0:1); (1:1:0); (0:-1:1); (-1:0:1); (-1:1:0)"), tower)
