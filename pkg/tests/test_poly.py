import pytest
import sympy

from app.services.exceptions import NotHomogeneous, TowerMismatch
from app.services.field import QQ, UPoly
from app.services.geom import ProjTransform
from app.services.poly import (
    XYZ,
    HomPoly,
    MPoly,
    is_nonsingular,
    proportional,
    pullback,
    resultant,
    split_coefficients,
    univariate_resultant,
)
from helpers import X, Y, Z, curve, from_sympy, random_form, to_sympy


def test_product_matches_sympy(rng):
    for _ in range(5):
        f, g = random_form(rng, 3), random_form(rng, 2)
        assert to_sympy(f * g) == sympy.expand(to_sympy(f) * to_sympy(g))
        assert to_sympy(f ** 2 - f) == sympy.expand(to_sympy(f) ** 2 - to_sympy(f))


def test_homogeneity_is_enforced():
    with pytest.raises(NotHomogeneous):
        HomPoly(QQ, {(2, 0, 0): 1, (0, 1, 0): 1})
    assert curve("X^2 + Y^2 - Z^2").degree == 2


def test_canonical_representative():
    F = curve("3*X^2 - 6*Y*Z")
    canon = F.canonical()
    assert canon.leading_term()[1] == 1
    assert proportional(F, canon) == 3


def test_pullback_matches_sympy_substitution(rng):
    F = random_form(rng, 4)
    rows = [[1, 2, 0], [0, 1, -1], [3, 0, 1]]
    T = ProjTransform(rows)
    expr = to_sympy(F).subs({X: X + 2 * Y, Y: Y - Z, Z: 3 * X + Z}, simultaneous=True)
    assert pullback(F, T) == from_sympy(expr)


def test_pullback_rejects_foreign_towers(zeta4_spec):
    F = curve("X^2 + Y^2 - Z^2")
    T = ProjTransform([[zeta4_spec.lookup("zeta4"), 0, 0], [0, 1, 0], [0, 0, 1]])
    with pytest.raises(TowerMismatch):
        pullback(F, T)
    assert pullback(F.lift(T.tower), T) == curve("-X^2 + Y^2 - Z^2", zeta4_spec)


def test_proportional_detects_scalars():
    F = curve("X^3 + 2*Y^3 - Z^3")
    assert proportional(F.scale(-5), F) == -5
    assert proportional(F, curve("X^3 + 2*Y^3 + Z^3")) is None


def test_split_coefficients_groups_by_outer_variables():
    F = MPoly(QQ, ("X", "Y", "p"), {(1, 0, 1): 2, (1, 0, 0): 3, (0, 1, 2): 1})
    parts = split_coefficients(F, ("X", "Y"))
    assert list(parts) == [(0, 1), (1, 0)]
    assert parts[(1, 0)] == MPoly(QQ, ("p",), {(1,): 2, (0,): 3})
    assert parts[(0, 1)] == MPoly(QQ, ("p",), {(2,): 1})


@pytest.mark.parametrize("f_text,g_text", [
    ("x^2 + y^2 - 1", "x - y"),
    ("x^3 - 2*x*y + 1", "x^2*y + y - 3"),
    ("y*x^2 + x + y", "x*y^2 - 1"),
])
def test_resultant_matches_sympy(f_text, g_text):
    xs, ys = sympy.symbols("x y")
    f_expr, g_expr = sympy.sympify(f_text.replace("^", "**")), sympy.sympify(g_text.replace("^", "**"))

    def ours(expr):
        poly = sympy.Poly(expr, xs, ys)
        return MPoly(QQ, ("x", "y"), {e: int(c) for e, c in poly.terms()})

    r = resultant(ours(f_expr), ours(g_expr), "x")
    expected = sympy.expand(sympy.resultant(f_expr, g_expr, xs))
    assert to_sympy(r) == expected


def test_univariate_resultant_vanishes_on_common_root():
    f = UPoly(QQ, [-1, 0, 1])
    assert univariate_resultant(f, UPoly(QQ, [-1, 1])).is_zero()
    assert univariate_resultant(f, UPoly(QQ, [-2, 1])) == 3


@pytest.mark.parametrize("text,expected", [
    ("X^2 + Y^2 - Z^2", True),
    ("X*Y", False),
    ("X^4 + Y^4 + Z^4", True),
    ("X*Y^3 + X^4 + Z^4", True),
    ("Y^2*Z - X^3", False),
    ("Y^2*Z - X^3 - X*Z^2", True),
    ("(X^2 + Y^2 - Z^2)^2", False),
    ("X^5 + Y^5 + Z^5", True),
])
def test_is_nonsingular(text, expected):
    assert is_nonsingular(curve(text)) is expected


def test_variables_align_on_arithmetic():
    a = MPoly.variable(QQ, ("p",), "p")
    b = MPoly.variable(QQ, ("q",), "q")
    s = a + b
    assert s.variables == ("p", "q")
    assert s.evaluate({"p": 2, "q": 3}) == 5
    assert XYZ == ("X", "Y", "Z")
