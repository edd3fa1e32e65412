"""Shared fixtures: towers, worked-example curves and a seeded RNG."""

import random

import pytest

from app.config import get_settings
from app.services.field import QQ, FieldTower, UPoly, adjoin
from app.services.parser import FieldSpec, parse_field
from helpers import curve


@pytest.fixture(autouse=True)
def _fresh_settings():
    get_settings.cache_clear()
    yield
    get_settings.cache_clear()


@pytest.fixture
def rng() -> random.Random:
    return random.Random(20240611)


@pytest.fixture
def q_spec() -> FieldSpec:
    return parse_field("Q")


@pytest.fixture
def zeta4_spec() -> FieldSpec:
    return parse_field("Q(zeta4)")


@pytest.fixture
def quartic_spec() -> FieldSpec:
    return parse_field("Q(zeta4, w)")


@pytest.fixture
def sqrt2_tower() -> FieldTower:
    return adjoin(QQ, "sqrt2", UPoly(QQ, [-2, 0, 1]))


@pytest.fixture
def conic_pair_three_points(q_spec):
    return curve("X^2 + Y^2 - Z^2", q_spec), curve("X^2 + Y^2 - 4*Y*Z + 3*Z^2", q_spec)


@pytest.fixture
def quartic_pair(quartic_spec):
    return (
        curve("X*Y^3 + X^4 + Z^4", quartic_spec),
        curve("X*((zeta4 - 1)*X + zeta4*Y)^3 + X^4 + Z^4", quartic_spec),
    )
