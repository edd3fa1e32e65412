"""
Input grammar for fields, curves, points and matrices.

    field   := "Q" | "Q(" item ("," item)* ")"
    item    := "zeta" N | "w" | "omega" | "sqrt" N | "sqrtm" N | "sqrt(" rational ")"
             | name ":" polynomial-in-x
    expr    := term (("+" | "-") term)*
    term    := factor (("*" | "/")? factor)*      juxtaposition multiplies
    factor  := ("-" | "+") factor | atom ("^" integer)?
    atom    := integer | name | "(" expr ")"
    point   := "(" expr ":" expr ":" expr ")"

Generators are referenced by name; w and omega stand for zeta3 and zetaN for
a power of any declared zetaM with N dividing M.
"""

import logging
import re
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple, Union

from app.services.exceptions import (
    ExpressionSyntaxError,
    InvalidCurve,
    InvalidInput,
    UnknownGenerator,
)
from app.services.field import (
    QQ,
    FieldElement,
    FieldTower,
    UPoly,
    adjoin,
    cyclotomic_minpoly,
)
from app.services.geom import ProjPoint, ProjTransform
from app.services.poly import XYZ, HomPoly, MPoly
from app.services.roots import roots_in_tower, sqrt_in_tower

logger = logging.getLogger(__name__)

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)|(\S))")
_RESERVED = {"Q", "X", "Y", "Z", "x"}


@dataclass(frozen=True)
class Token:
    kind: str  # "int" | "name" | "op" | "end"
    text: str
    position: int


def tokenize(text: str) -> List[Token]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            break
        if m.group(1):
            tokens.append(Token("int", m.group(1), m.start(1)))
        elif m.group(2):
            tokens.append(Token("name", m.group(2), m.start(2)))
        elif m.group(3):
            tokens.append(Token("op", m.group(3), m.start(3)))
        pos = m.end()
    tokens.append(Token("end", "", len(text)))
    return tokens


# =============================================================================
# Fields
# =============================================================================

@dataclass
class FieldSpec:
    """A tower plus the extra names (aliases) the grammar resolves in it."""
    tower: FieldTower = QQ
    aliases: Dict[str, FieldElement] = field(default_factory=dict)

    @property
    def declaration(self) -> str:
        return self.tower.declaration()

    def lookup(self, name: str) -> Optional[FieldElement]:
        if name in self.tower.names:
            return self.tower.generator(name)
        if name in self.aliases:
            return self.tower.lift(self.aliases[name])
        if name in ("w", "omega"):
            return self.lookup("zeta3")
        m = re.fullmatch(r"zeta(\d+)", name)
        if m:
            n = int(m.group(1))
            zeta, order = self.tower.root_of_unity
            if n and order % n == 0:
                return zeta ** (order // n)
        return None

    def lift(self, tower: FieldTower) -> "FieldSpec":
        return FieldSpec(tower, {k: tower.lift(v) for k, v in self.aliases.items()})


def _split_items(body: str, offset: int) -> List[Tuple[str, int]]:
    items, depth, start = [], 0, 0
    for i, ch in enumerate(body):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch == "," and depth == 0:
            items.append((body[start:i], offset + start))
            start = i + 1
    items.append((body[start:], offset + start))
    return [(s, p) for s, p in items if s.strip()]


def _sqrt_name(r: Fraction) -> str:
    if r.denominator == 1:
        return f"sqrt{r.numerator}" if r >= 0 else f"sqrtm{-r.numerator}"
    sign = "m" if r < 0 else ""
    return f"sqrt{sign}{abs(r.numerator)}_{r.denominator}"


def _adjoin_checked(spec: FieldSpec, name: str, minpoly: UPoly, position: int, text: str) -> FieldSpec:
    if name in _RESERVED or name in spec.tower.names or name in spec.aliases:
        raise ExpressionSyntaxError(f"generator name {name!r} is reserved or already declared", position, text)
    found = roots_in_tower(minpoly, strict=False) if minpoly.degree <= 4 else []
    if found:
        raise InvalidInput(f"{minpoly} has the root {found[0]} in {spec.declaration}; it is not irreducible",
                            {"generator": name})
    return FieldSpec(adjoin(spec.tower, name, minpoly), dict(spec.aliases))


def _field_item(spec: FieldSpec, item: str, position: int, text: str) -> FieldSpec:
    stripped = item.strip()
    position += len(item) - len(item.lstrip())
    tower = spec.tower

    if stripped in ("w", "omega"):
        stripped = "zeta3"
    m = re.fullmatch(r"zeta(\d+)", stripped)
    if m:
        n = int(m.group(1))
        if n < 3:
            raise ExpressionSyntaxError(f"zeta{n} is rational; declare zeta3 or higher", position, text)
        if spec.lookup(stripped) is not None:
            return spec
        return _adjoin_checked(spec, stripped, cyclotomic_minpoly(n).lift(tower), position, text)

    m = re.fullmatch(r"sqrt(m?)(\d+)|sqrt\s*\(\s*(-?\d+(?:\s*/\s*\d+)?)\s*\)", stripped)
    if m:
        if m.group(3) is not None:
            r = Fraction(m.group(3).replace(" ", ""))
        else:
            r = Fraction(int(m.group(2))) * (-1 if m.group(1) else 1)
        name = _sqrt_name(r)
        existing = sqrt_in_tower(tower(r))
        if existing is not None:
            out = FieldSpec(tower, dict(spec.aliases))
            out.aliases[name] = existing
            return out
        return _adjoin_checked(spec, name, UPoly(tower, [-r, 0, 1]), position, text)

    name, sep, poly_text = stripped.partition(":")
    name = name.strip()
    if not sep or not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", name):
        raise ExpressionSyntaxError(f"cannot read field item {stripped!r}", position, text)
    poly = _Parser(poly_text, spec, ("x",), text, position + stripped.index(":") + 1).parse()
    minpoly = poly.to_upoly("x")
    if minpoly.degree < 2 or not minpoly.is_monic():
        raise InvalidInput(f"minimal polynomial of {name} must be monic of degree >= 2, got {minpoly}")
    return _adjoin_checked(spec, name, minpoly, position, text)


def parse_field(text: Optional[str]) -> FieldSpec:
    """Field declaration such as "Q", "Q(zeta4, sqrt3)" or "Q(zeta3, t: x^3 - 2)"."""
    text = (text or "Q").strip()
    if text == "Q":
        return FieldSpec()
    if not (text.startswith("Q(") and text.endswith(")")):
        raise ExpressionSyntaxError("field declarations look like Q or Q(zeta4, sqrt3)", 0, text)
    spec = FieldSpec()
    for item, position in _split_items(text[2:-1], 2):
        spec = _field_item(spec, item, position, text)
    logger.debug(f"Parsed field {spec.declaration}")
    return spec


def _as_spec(field_: Union[None, str, FieldSpec, FieldTower]) -> FieldSpec:
    if isinstance(field_, FieldSpec):
        return field_
    if isinstance(field_, FieldTower):
        return FieldSpec(field_)
    return parse_field(field_)


# =============================================================================
# Expressions
# =============================================================================

class _Parser:
    """Recursive descent over the token list; values are MPoly in `variables`."""

    def __init__(self, text: str, spec: FieldSpec, variables: Sequence[str], full: str = "", offset: int = 0):
        self.text = text
        self.full = full or text
        self.offset = offset
        self.spec = spec
        self.tower = spec.tower
        self.variables = tuple(variables)
        self.tokens = tokenize(text)
        self.i = 0

    @property
    def token(self) -> Token:
        return self.tokens[self.i]

    def error(self, message: str, token: Optional[Token] = None) -> ExpressionSyntaxError:
        token = token or self.token
        return ExpressionSyntaxError(message, self.offset + token.position, self.full)

    def expect(self, op: str) -> None:
        if self.token.kind != "op" or self.token.text != op:
            found = self.token.text or "end of input"
            raise self.error(f"expected {op!r}, found {found!r}")
        self.i += 1

    def parse(self, stop: Sequence[str] = ()) -> MPoly:
        value = self.expr()
        if self.token.kind != "end" and not (self.token.kind == "op" and self.token.text in stop):
            raise self.error(f"unexpected {self.token.text!r}")
        return value

    def expr(self) -> MPoly:
        value = self.term()
        while self.token.kind == "op" and self.token.text in "+-":
            op = self.token.text
            self.i += 1
            rhs = self.term()
            value = value + rhs if op == "+" else value - rhs
        return value

    def _starts_atom(self) -> bool:
        t = self.token
        return t.kind in ("int", "name") or (t.kind == "op" and t.text == "(")

    def term(self) -> MPoly:
        value = self.factor()
        while True:
            t = self.token
            if t.kind == "op" and t.text == "*":
                self.i += 1
                value = value * self.factor()
            elif t.kind == "op" and t.text == "/":
                self.i += 1
                divisor = self.factor()
                if not divisor.is_constant() or divisor.is_zero():
                    raise self.error("division only by nonzero constants", t)
                value = value * divisor.constant_value().inverse()
            elif self._starts_atom():
                value = value * self.factor()
            else:
                return value

    def factor(self) -> MPoly:
        t = self.token
        if t.kind == "op" and t.text in "+-":
            self.i += 1
            inner = self.factor()
            return -inner if t.text == "-" else inner
        base = self.atom()
        if self.token.kind == "op" and self.token.text == "^":
            self.i += 1
            exp = self.token
            if exp.kind != "int":
                raise self.error("exponents are nonnegative integer literals", exp)
            self.i += 1
            return base ** int(exp.text)
        return base

    def atom(self) -> MPoly:
        t = self.token
        if t.kind == "int":
            self.i += 1
            return MPoly.constant(self.tower, self.variables, int(t.text))
        if t.kind == "name":
            self.i += 1
            if t.text in self.variables:
                return MPoly.variable(self.tower, self.variables, t.text)
            value = self.spec.lookup(t.text)
            if value is None:
                raise UnknownGenerator(
                    f"{t.text!r} is not declared in {self.spec.declaration}",
                    {"name": t.text, "position": self.offset + t.position},
                )
            return MPoly.constant(self.tower, self.variables, value)
        if t.kind == "op" and t.text == "(":
            self.i += 1
            value = self.expr()
            self.expect(")")
            return value
        raise self.error(f"unexpected {t.text or 'end of input'!r}")


def parse_expression(text: str, field_=None, variables: Sequence[str] = XYZ) -> MPoly:
    spec = _as_spec(field_)
    return _Parser(text, spec, variables).parse()


def parse_scalar(text: str, field_=None) -> FieldElement:
    value = parse_expression(text, field_, ())
    return value.constant_value()


# =============================================================================
# Curves, points, matrices
# =============================================================================

@dataclass(frozen=True)
class CurveSpec:
    declaration: str
    source: str
    form: HomPoly


def parse_curve(text: str, field_=None) -> CurveSpec:
    """A homogeneous form in X, Y, Z over the declared field."""
    spec = _as_spec(field_)
    poly = _Parser(text, spec, XYZ).parse()
    if poly.is_zero():
        raise InvalidCurve("the zero polynomial is not a curve", {"text": text})
    return CurveSpec(spec.declaration, text, HomPoly.from_mpoly(poly))


def parse_point(text: str, field_=None) -> ProjPoint:
    """A point written (a:b:c)."""
    spec = _as_spec(field_)
    parser = _Parser(text, spec, ())
    parser.expect("(")
    coords = []
    for i, closing in enumerate((":", ":", ")")):
        coords.append(parser.parse(stop=(closing,)).constant_value())
        parser.expect(closing)
    if parser.token.kind != "end":
        raise parser.error(f"unexpected {parser.token.text!r} after the point")
    return ProjPoint(coords, spec.tower)


def parse_points(text: str, field_=None) -> List[ProjPoint]:
    """Points separated by ';'."""
    spec = _as_spec(field_)
    return [parse_point(part, spec) for part in text.split(";") if part.strip()]


def parse_matrix(text: str, field_=None) -> ProjTransform:
    """Nine entries, row by row, separated by ',' or ';'; brackets are ignored."""
    spec = _as_spec(field_)
    cleaned = text.replace("[", " ").replace("]", " ")
    entries = [e for e in re.split(r"[,;]", cleaned) if e.strip()]
    if len(entries) != 9:
        raise ExpressionSyntaxError(f"a transform needs 9 entries, got {len(entries)}", 0, text)
    values = [parse_scalar(e, spec) for e in entries]
    return ProjTransform([values[0:3], values[3:6], values[6:9]], spec.tower)


def read_input_file(path: Union[str, Path]) -> Dict[str, str]:
    """`key: value` lines; blank lines and lines starting with '#' are skipped."""
    values: Dict[str, str] = {}
    for number, line in enumerate(Path(path).read_text().splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, value = line.partition(":")
        if not sep:
            raise ExpressionSyntaxError(f"line {number} is not 'key: value'", 0, line)
        values[key.strip().lower()] = value.strip()
    return values
