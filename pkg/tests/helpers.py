"""Test helpers: curve construction, random forms and sympy conversions."""

import random
from fractions import Fraction

import sympy

from app.services.field import QQ, FieldTower, UPoly
from app.services.parser import parse_curve, parse_field
from app.services.poly import HomPoly, MPoly

X, Y, Z = sympy.symbols("X Y Z")
x = sympy.Symbol("x")


def curve(text: str, spec=None) -> HomPoly:
    return parse_curve(text, spec or parse_field("Q")).form


def to_sympy(F: MPoly):
    """Rational polynomial as a sympy expression in its own variables."""
    symbols = [sympy.Symbol(v) for v in F.variables]
    expr = sympy.Integer(0)
    for exps, c in F.terms.items():
        q = c.to_fraction()
        term = sympy.Rational(q.numerator, q.denominator)
        for s, e in zip(symbols, exps):
            term *= s ** e
        expr += term
    return sympy.expand(expr)


def upoly_to_sympy(f: UPoly) -> sympy.Poly:
    return sympy.Poly([sympy.Rational(c.numerator, c.denominator) for c in reversed(f.rational_coefficients())], x)


def from_sympy(expr, tower: FieldTower = QQ) -> HomPoly:
    poly = sympy.Poly(sympy.expand(expr), X, Y, Z)
    terms = {}
    for exps, c in poly.terms():
        c = sympy.Rational(c)
        terms[tuple(exps)] = Fraction(int(c.p), int(c.q))
    return HomPoly(tower, terms)


def random_form(rng: random.Random, degree: int, tower: FieldTower = QQ, density: float = 0.6) -> HomPoly:
    terms = {}
    for i in range(degree + 1):
        for j in range(degree + 1 - i):
            if rng.random() < density:
                terms[(i, j, degree - i - j)] = rng.randint(-5, 5)
    terms[(degree, 0, 0)] = rng.choice([1, 2, -3])
    return HomPoly(tower, terms)
