from fractions import Fraction

import pytest

from app.services.exceptions import (
    ExpressionSyntaxError,
    InvalidInput,
    NotHomogeneous,
    UnknownGenerator,
)
from app.services.field import QQ
from app.services.geom import ProjPoint, ProjTransform
from app.services.parser import (
    parse_curve,
    parse_expression,
    parse_field,
    parse_matrix,
    parse_point,
    parse_points,
    read_input_file,
    tokenize,
)
from helpers import curve


def test_tokenizer_positions():
    tokens = tokenize("2X^2 - zeta4*Y")
    assert [(t.kind, t.text, t.position) for t in tokens] == [
        ("int", "2", 0), ("name", "X", 1), ("op", "^", 2), ("int", "2", 3),
        ("op", "-", 5), ("name", "zeta4", 7), ("op", "*", 12), ("name", "Y", 13),
        ("end", "", 14),
    ]


def test_surrounding_whitespace_is_ignored():
    assert [t.kind for t in tokenize("X  ")] == ["name", "end"]
    assert parse_curve("X^2 + Y^2 - Z^2 ").form == curve("X^2 + Y^2 - Z^2")
    assert parse_point("(0:1:0) ") == ProjPoint((0, 1, 0))
    assert parse_point("\t(0:1:0)\n") == ProjPoint((0, 1, 0))
    assert parse_matrix("[[1, 0, 0], [0, 1, 0], [0, 0, 1]] ").is_identity()


def test_juxtaposition_and_division():
    assert curve("2X^2 - 3X*Y + Z^2") == curve("2*X^2 - 3*X*Y + Z^2")
    assert curve("X^2/4 - Y*Z") == curve("1/4*X^2 - Y*Z")
    assert curve("(X + Y)^2") == curve("X^2 + 2*X*Y + Y^2")
    assert curve("-(X - Y)*Z") == curve("Y*Z - X*Z")


@pytest.mark.parametrize("text,position", [
    ("X^2 + * Y", 6),
    ("(X + Y", 6),
    ("X^Y", 2),
    ("X / Y", 2),
    ("X^2 Y^2 )", 8),
])
def test_syntax_errors_report_positions(text, position):
    with pytest.raises(ExpressionSyntaxError) as info:
        parse_curve(text)
    assert info.value.position == position
    assert info.value.details["text"] == text


def test_unknown_generator_and_inhomogeneous_input():
    with pytest.raises(UnknownGenerator) as info:
        parse_curve("X^2 + a*Y^2")
    assert info.value.details["name"] == "a"
    with pytest.raises(UnknownGenerator):
        parse_curve("X^4 + zeta4*Y^4 + Z^4")
    with pytest.raises(NotHomogeneous):
        parse_curve("X^2 + Y^2 - Z")


def test_field_declarations():
    spec = parse_field("Q(zeta4, sqrt3)")
    assert spec.tower.names == ["zeta4", "sqrt3"]
    assert spec.declaration == "Q(zeta4, sqrt3)"
    assert spec.lookup("zeta4") ** 2 == -1
    assert spec.lookup("zeta2") == -1
    assert spec.lookup("sqrt3") ** 2 == 3
    assert spec.lookup("w") is None

    cubic = parse_field("Q(w)")
    assert cubic.tower.names == ["zeta3"]
    assert cubic.lookup("omega") == cubic.lookup("w")

    custom = parse_field("Q(c: x^3 - 2)")
    assert parse_expression("c^3", custom, ()).constant_value() == 2
    assert parse_field(None).tower == QQ


def test_square_roots_already_in_the_field_become_aliases():
    spec = parse_field("Q(zeta4, sqrtm4)")
    assert spec.tower.depth == 1
    assert spec.lookup("sqrtm4") ** 2 == -4
    assert parse_field("Q(sqrt(9/4))").tower == QQ
    half = parse_field("Q(sqrt(1/2))")
    assert half.lookup("sqrt1_2") ** 2 == Fraction(1, 2)


@pytest.mark.parametrize("text,error", [
    ("Q[zeta4]", ExpressionSyntaxError),
    ("Q(zeta2)", ExpressionSyntaxError),
    ("Q(foo)", ExpressionSyntaxError),
    ("Q(X: x^2 + 1)", ExpressionSyntaxError),
    ("Q(t: x^2 - 4)", InvalidInput),
    ("Q(t: 2*x^2 - 1)", InvalidInput),
])
def test_bad_field_declarations(text, error):
    with pytest.raises(error):
        parse_field(text)


def test_points():
    spec = parse_field("Q(zeta4)")
    assert parse_point("(2:4:2)") == ProjPoint((1, 2, 1))
    assert parse_point("(-zeta4 : 1 : 0)", spec) == ProjPoint((-spec.lookup("zeta4"), 1, 0), spec.tower)
    assert parse_points("(1:0:0); (0:1:0);") == [ProjPoint((1, 0, 0)), ProjPoint((0, 1, 0))]
    with pytest.raises(InvalidInput):
        parse_point("(0:0:0)")
    with pytest.raises(ExpressionSyntaxError) as info:
        parse_point("(1:2)")
    assert info.value.position == 4
    with pytest.raises(ExpressionSyntaxError):
        parse_point("(1:2:3) x")


def test_matrices():
    assert parse_matrix("[[1,0,0],[0,1,0],[0,0,1]]").is_identity()
    spec = parse_field("Q(zeta4)")
    T = parse_matrix("1, 0, 0; zeta4 - 1, zeta4, 0; 0, 0, 1", spec)
    assert T == ProjTransform([[1, 0, 0], [spec.lookup("zeta4") - 1, spec.lookup("zeta4"), 0], [0, 0, 1]], spec.tower)
    with pytest.raises(ExpressionSyntaxError):
        parse_matrix("1, 0, 0, 0, 1, 0, 0, 0")


@pytest.mark.parametrize("declaration,text", [
    ("Q", "1/2*X^3 - 3*X*Y^2 + Z^3"),
    ("Q(sqrt2)", "1/2*X^3 - 3*sqrt2*X*Y^2 + (1 + sqrt2)*Z^3"),
    ("Q(zeta4, w)", "X*((zeta4 - 1)*X + zeta4*Y)^3 + X^4 + Z^4"),
])
def test_printed_curves_parse_back(declaration, text):
    spec = parse_field(declaration)
    F = curve(text, spec)
    assert curve(str(F), spec) == F
    assert parse_field(spec.declaration).tower.names == spec.tower.names


def test_read_input_file(tmp_path):
    path = tmp_path / "pair.txt"
    path.write_text("# quartic pair\nField: Q(zeta4)\n\nc1: X*Y^3 + X^4 + Z^4\nPOINT: (0:1:0)\n")
    assert read_input_file(path) == {"field": "Q(zeta4)", "c1": "X*Y^3 + X^4 + Z^4", "point": "(0:1:0)"}
    path.write_text("field Q\n")
    with pytest.raises(ExpressionSyntaxError):
        read_input_file(path)
