from fractions import Fraction

import pytest

from app.services.elimination import roots_with_adjunction
from app.services.exceptions import DegreeTooHigh, Unresolved
from app.services.field import QQ, UPoly, adjoin, cyclotomic_minpoly, cyclotomic_tower
from app.services.roots import (
    adjoinable_factor,
    binomial_roots,
    quadratic_roots,
    rational_root,
    roots_in_tower,
    sqrt_in_tower,
)


def _poly(tower, *coeffs):
    return UPoly(tower, list(coeffs))


def test_rational_roots_with_denominators():
    f = _poly(QQ, -1, 2) * _poly(QQ, 3, 1) * _poly(QQ, -5, 1)
    roots = {r.to_fraction() for r in roots_in_tower(f)}
    assert roots == {Fraction(1, 2), Fraction(-3), Fraction(5)}


def test_rational_root_helper():
    assert rational_root(Fraction(27, 8), 3) == Fraction(3, 2)
    assert rational_root(Fraction(2), 2) is None
    assert rational_root(Fraction(-8), 3) == -2


def test_unresolved_suggests_the_residual():
    with pytest.raises(Unresolved) as info:
        roots_in_tower(_poly(QQ, 1, 0, 1))
    assert info.value.suggestion == _poly(QQ, 1, 0, 1)
    assert info.value.retryable


def test_partial_roots_without_strict():
    f = _poly(QQ, -1, 1) * _poly(QQ, 1, 0, 1)
    assert roots_in_tower(f, strict=False) == [QQ(1)]
    with pytest.raises(Unresolved) as info:
        roots_in_tower(f)
    assert info.value.roots == [QQ(1)]


def test_gaussian_roots():
    tower = cyclotomic_tower(4)
    i = tower.generator()
    assert set(roots_in_tower(_poly(QQ, 1, 0, 1), tower)) == {i, -i}
    assert len(roots_in_tower(_poly(tower, -1, 0, 0, 0, 1))) == 4


def test_cube_roots_of_two_need_zeta3():
    cubic = adjoin(QQ, "c", _poly(QQ, -2, 0, 0, 1))
    tower = adjoin(cubic, "zeta3", cyclotomic_minpoly(3).lift(cubic))
    roots = binomial_roots(tower(2), 3)
    assert len(set(roots)) == 3
    assert all(r ** 3 == 2 for r in roots)


def test_sqrt_inside_a_quadratic_level(sqrt2_tower):
    s = sqrt2_tower.generator()
    r = sqrt_in_tower(3 + 2 * s)
    assert r is not None and r * r == 3 + 2 * s
    assert sqrt_in_tower(sqrt2_tower(3)) is None
    assert sqrt_in_tower(QQ(Fraction(9, 4))) in (QQ(Fraction(3, 2)), QQ(Fraction(-3, 2)))


def test_quadratic_roots_double_root():
    assert quadratic_roots(QQ(1), QQ(-4), QQ(4)) == [QQ(2)]
    assert quadratic_roots(QQ(1), QQ(0), QQ(1)) is None


def test_cubic_and_quartic_split_completely():
    cubic = _poly(QQ, -1, 1) * _poly(QQ, -2, 1) * _poly(QQ, 3, 1)
    assert {r.to_fraction() for r in roots_in_tower(cubic)} == {1, 2, -3}
    tower = adjoin(QQ, "sqrt2", _poly(QQ, -2, 0, 1))
    quartic = (_poly(tower, -2, 0, 1) * _poly(tower, -1, 1) * _poly(tower, 1, 1))
    roots = roots_in_tower(quartic)
    assert len(roots) == 4
    assert all(quartic(r).is_zero() for r in roots)


def test_degree_too_high_without_strategy():
    with pytest.raises(DegreeTooHigh):
        roots_in_tower(_poly(QQ, -1, -1, 0, 0, 0, 1))


def test_adjoinable_factor_prefers_cyclotomic():
    assert adjoinable_factor(_poly(QQ, 1, 0, 0, 0, 1)) == cyclotomic_minpoly(8)
    assert adjoinable_factor(_poly(QQ, -2, 0, 0, 1)) == _poly(QQ, -2, 0, 0, 1)


def test_roots_with_adjunction_grows_the_tower():
    tower, roots = roots_with_adjunction(_poly(QQ, 1, 0, 0, 0, 1))
    assert tower.depth == 1
    assert len(roots) == 4
    assert all(r ** 4 == -1 for r in roots)


def test_biquadratic_over_two_square_roots():
    sqrt2 = adjoin(QQ, "sqrt2", _poly(QQ, -2, 0, 1))
    tower = adjoin(sqrt2, "sqrt3", _poly(sqrt2, -3, 0, 1))
    roots = set(roots_in_tower(_poly(QQ, 1, 0, -10, 0, 1), tower))
    a, b = tower.generators()
    assert roots == {a + b, a - b, -a + b, -a - b}


def test_shifted_biquadratic_suggests_the_quadratic_in_x_squared():
    # (x+1)^4 - 10(x+1)^2 + 1
    f = _poly(QQ, -8, -16, -4, 4, 1)
    assert adjoinable_factor(f) == _poly(QQ, 1, -10, 1)
    tower, roots = roots_with_adjunction(f)
    assert tower.depth == 2
    assert len(roots) == 4
    assert all(f.lift(tower)(r).is_zero() for r in roots)


def test_split_biquadratic_suggests_a_square_root():
    # (x+1)^4 - 5(x+1)^2 + 6 = ((x+1)^2 - 2)((x+1)^2 - 3)
    f = _poly(QQ, 2, -6, 1, 4, 1)
    assert adjoinable_factor(f) in (_poly(QQ, -2, 2, 1), _poly(QQ, -1, 2, 1))


def test_suggestions_never_carry_a_root():
    # (x+1)^4 + (x+1)^2 + 2: the resolvent has the root 0 and nothing else in Q
    f = _poly(QQ, 4, 6, 7, 4, 1)
    suggestion = adjoinable_factor(f)
    assert suggestion == _poly(QQ, 2, 1, 1)
    assert not roots_in_tower(suggestion, strict=False)


def test_binomials_over_roots_of_unity_are_adjoined_whole():
    tower = cyclotomic_tower(4)
    i = tower.generator()
    assert adjoinable_factor(_poly(tower, -i, 0, 0, 0, 1)) == _poly(tower, -i, 0, 0, 0, 1)
    # x^4 + 4 splits into two quadratics, so the binomial itself is not adjoined
    assert adjoinable_factor(_poly(QQ, 4, 0, 0, 0, 1)) == _poly(QQ, 4, 0, 1)
