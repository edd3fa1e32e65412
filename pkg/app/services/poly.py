"""
Sparse multivariate polynomials over a field tower, the homogeneous
trivariate forms that define plane curves, Sylvester resultants and the
nonsingularity test.
"""

import logging
from fractions import Fraction
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

from app.services.exceptions import InvalidCurve, NotHomogeneous, TowerMismatch
from app.services.field import FieldElement, FieldTower, Scalar, UPoly

logger = logging.getLogger(__name__)

XYZ = ("X", "Y", "Z")
Exponents = Tuple[int, ...]


class MPoly:
    """Polynomial in named variables; `terms` maps exponent tuples to nonzero coefficients."""

    __slots__ = ("tower", "variables", "terms")

    def __init__(
        self,
        tower: FieldTower,
        variables: Sequence[str],
        terms: Optional[Mapping[Exponents, Scalar]] = None,
    ):
        self.tower = tower
        self.variables = tuple(variables)
        clean: Dict[Exponents, FieldElement] = {}
        for exps, c in (terms or {}).items():
            c = tower.coerce(c)
            if not c.is_zero():
                clean[tuple(exps)] = c
        self.terms = clean

    @classmethod
    def _make(cls, tower, variables, terms) -> "MPoly":
        # trusted constructor: coefficients already coerced and nonzero
        obj = MPoly.__new__(MPoly)
        obj.tower, obj.variables, obj.terms = tower, variables, terms
        return obj

    @classmethod
    def constant(cls, tower: FieldTower, variables: Sequence[str], c: Scalar) -> "MPoly":
        return MPoly(tower, variables, {(0,) * len(variables): c})

    @classmethod
    def variable(cls, tower: FieldTower, variables: Sequence[str], name: str) -> "MPoly":
        exps = tuple(1 if v == name else 0 for v in variables)
        if name not in variables:
            raise ValueError(f"unknown variable {name!r}")
        return MPoly(tower, variables, {exps: 1})

    # ------------------------------------------------------------------
    # structure
    # ------------------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(not any(e) for e in self.terms)

    def constant_value(self) -> FieldElement:
        return self.terms.get((0,) * len(self.variables), self.tower.zero())

    def support(self) -> List[str]:
        """Variables that actually occur."""
        used = [False] * len(self.variables)
        for exps in self.terms:
            for i, e in enumerate(exps):
                if e:
                    used[i] = True
        return [v for v, u in zip(self.variables, used) if u]

    def degree_in(self, var: str) -> int:
        i = self.variables.index(var)
        return max((e[i] for e in self.terms), default=-1)

    def total_degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def leading_term(self) -> Tuple[Exponents, FieldElement]:
        exps = max(self.terms)
        return exps, self.terms[exps]

    def coefficients_in(self, var: str) -> List["MPoly"]:
        """Coefficients of powers of `var` (index = power), as polynomials free of `var`."""
        i = self.variables.index(var)
        buckets: List[Dict[Exponents, FieldElement]] = [dict() for _ in range(self.degree_in(var) + 1)]
        for exps, c in self.terms.items():
            rest = exps[:i] + (0,) + exps[i + 1:]
            buckets[exps[i]][rest] = c
        return [MPoly._make(self.tower, self.variables, b) for b in buckets]

    def with_variables(self, variables: Sequence[str]) -> "MPoly":
        variables = tuple(variables)
        if variables == self.variables:
            return self
        index = {v: i for i, v in enumerate(variables)}
        terms = {}
        for exps, c in self.terms.items():
            new = [0] * len(variables)
            for v, e in zip(self.variables, exps):
                if e:
                    if v not in index:
                        raise ValueError(f"variable {v!r} missing from {variables}")
                    new[index[v]] = e
            terms[tuple(new)] = c
        return MPoly._make(self.tower, variables, terms)

    def lift(self, tower: FieldTower) -> "MPoly":
        if tower == self.tower:
            return self
        return MPoly._make(tower, self.variables, {e: tower.lift(c) for e, c in self.terms.items()})

    # ------------------------------------------------------------------
    # arithmetic
    # ------------------------------------------------------------------

    def _align(self, other) -> Tuple["MPoly", "MPoly"]:
        if not isinstance(other, MPoly):
            return self, MPoly.constant(self.tower, self.variables, other)
        if other.tower != self.tower:
            raise TowerMismatch(f"{self.tower.declaration()} vs {other.tower.declaration()}")
        if other.variables == self.variables:
            return self, other
        union = self.variables + tuple(v for v in other.variables if v not in self.variables)
        return self.with_variables(union), other.with_variables(union)

    def __add__(self, other):
        a, b = self._align(other)
        terms = dict(a.terms)
        for e, c in b.terms.items():
            s = terms[e] + c if e in terms else c
            if s.is_zero():
                terms.pop(e, None)
            else:
                terms[e] = s
        return MPoly._make(a.tower, a.variables, terms)

    __radd__ = __add__

    def __neg__(self):
        return MPoly._make(self.tower, self.variables, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        a, b = self._align(other)
        return a + (-b)

    def __rsub__(self, other):
        a, b = self._align(other)
        return b + (-a)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, FieldElement)):
            c = self.tower.coerce(other)
            if c.is_zero():
                return MPoly._make(self.tower, self.variables, {})
            return MPoly._make(self.tower, self.variables, {e: v * c for e, v in self.terms.items()})
        a, b = self._align(other)
        terms: Dict[Exponents, FieldElement] = {}
        for e1, c1 in a.terms.items():
            for e2, c2 in b.terms.items():
                e = tuple(x + y for x, y in zip(e1, e2))
                terms[e] = terms[e] + c1 * c2 if e in terms else c1 * c2
        return MPoly._make(a.tower, a.variables, {e: c for e, c in terms.items() if not c.is_zero()})

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "MPoly":
        result = MPoly.constant(self.tower, self.variables, 1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def scale(self, c: Scalar) -> "MPoly":
        return self * self.tower.coerce(c)

    def exact_div(self, other: "MPoly") -> "MPoly":
        """Quotient of an exact division (lex leading-term reduction)."""
        a, d = self._align(other)
        if d.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        if d.is_constant():
            return a * d.constant_value().inverse()
        lead_e, lead_c = d.leading_term()
        lead_inv = lead_c.inverse()
        quot = MPoly._make(a.tower, a.variables, {})
        rem = a
        while not rem.is_zero():
            e, c = rem.leading_term()
            diff = tuple(x - y for x, y in zip(e, lead_e))
            if any(x < 0 for x in diff):
                raise ArithmeticError("polynomial division is not exact")
            t = MPoly._make(a.tower, a.variables, {diff: c * lead_inv})
            quot = quot + t
            rem = rem - t * d
        return quot

    def derivative(self, var: str) -> "MPoly":
        i = self.variables.index(var)
        terms = {}
        for exps, c in self.terms.items():
            if exps[i]:
                terms[exps[:i] + (exps[i] - 1,) + exps[i + 1:]] = c * exps[i]
        return MPoly._make(self.tower, self.variables, terms)

    def substitute(self, values: Mapping[str, Union[Scalar, "MPoly"]]) -> "MPoly":
        """Replace variables by scalars or polynomials; the variable tuple is kept."""
        targets = {self.variables.index(v): x for v, x in values.items() if v in self.variables}
        if not targets:
            return self
        powers: Dict[Tuple[int, int], MPoly] = {}

        def power(i: int, e: int) -> "MPoly":
            key = (i, e)
            if key not in powers:
                x = targets[i]
                if not isinstance(x, MPoly):
                    x = MPoly.constant(self.tower, self.variables, x)
                powers[key] = x ** e
            return powers[key]

        out = MPoly._make(self.tower, self.variables, {})
        for exps, c in self.terms.items():
            kept = tuple(0 if i in targets else e for i, e in enumerate(exps))
            term = MPoly._make(self.tower, self.variables, {kept: c})
            for i, e in enumerate(exps):
                if e and i in targets:
                    term = term * power(i, e)
            out = out + term
        return out

    def evaluate(self, values: Mapping[str, Scalar]) -> FieldElement:
        rest = self.substitute(values)
        if not rest.is_constant():
            raise ValueError(f"variables {rest.support()} left unassigned")
        return rest.constant_value()

    def to_upoly(self, var: str) -> UPoly:
        if any(v != var for v in self.support()):
            raise ValueError(f"{self} is not univariate in {var}")
        return UPoly(self.tower, [c.constant_value() for c in self.coefficients_in(var)])

    # ------------------------------------------------------------------
    # comparison and printing
    # ------------------------------------------------------------------

    def __eq__(self, other) -> bool:
        if not isinstance(other, MPoly):
            return NotImplemented
        if self.tower != other.tower:
            return False
        a, b = self._align(other)
        return a.terms == b.terms

    def __hash__(self) -> int:
        return hash((self.tower, frozenset(self.support()), frozenset(self.terms.items())))

    def format(self) -> str:
        if not self.terms:
            return "0"
        pieces = []
        for exps in sorted(self.terms, reverse=True):
            c = self.terms[exps]
            mono = "*".join(
                v if e == 1 else f"{v}^{e}" for v, e in zip(self.variables, exps) if e
            )
            text = str(c)
            multi = len(c.terms()) > 1
            negative = not multi and text.startswith("-")
            if negative:
                text = text[1:]
            if multi:
                text = f"({text})"
            if not mono:
                body = text
            elif text == "1":
                body = mono
            else:
                body = f"{text}*{mono}"
            pieces.append(("-" if negative else "+", body))
        out = ("-" if pieces[0][0] == "-" else "") + pieces[0][1]
        for sign, body in pieces[1:]:
            out += f" {sign} {body}"
        return out

    def __str__(self) -> str:
        return self.format()

    def __repr__(self) -> str:
        return f"MPoly({self.format()})"


class HomPoly(MPoly):
    """A homogeneous form in X, Y, Z; the defining form of a plane curve."""

    __slots__ = ("degree",)

    def __init__(self, tower: FieldTower, terms: Optional[Mapping[Exponents, Scalar]] = None,
                 degree: Optional[int] = None):
        super().__init__(tower, XYZ, terms)
        degrees = {sum(e) for e in self.terms}
        if len(degrees) > 1:
            raise NotHomogeneous(f"terms of total degrees {sorted(degrees)} in one form")
        if degrees:
            d = degrees.pop()
            if degree is not None and degree != d:
                raise NotHomogeneous(f"expected degree {degree}, found {d}")
            degree = d
        self.degree = degree or 0

    @classmethod
    def from_mpoly(cls, m: MPoly, degree: Optional[int] = None) -> "HomPoly":
        return cls(m.tower, m.with_variables(XYZ).terms, degree)

    def lift(self, tower: FieldTower) -> "HomPoly":
        if tower == self.tower:
            return self
        return HomPoly(tower, {e: tower.lift(c) for e, c in self.terms.items()}, self.degree)

    def scale(self, c: Scalar) -> "HomPoly":
        return HomPoly.from_mpoly(self * self.tower.coerce(c), self.degree)

    def canonical(self) -> "HomPoly":
        """The proportional representative whose lexicographically first term has coefficient 1."""
        if self.is_zero():
            return self
        _, lead = self.leading_term()
        return self.scale(lead.inverse())

    def proportional(self, other: "HomPoly") -> Optional[FieldElement]:
        return proportional(self, other)

    def partials(self) -> Tuple["HomPoly", "HomPoly", "HomPoly"]:
        d = max(self.degree - 1, 0)
        return tuple(HomPoly.from_mpoly(self.derivative(v), d) for v in XYZ)

    def at(self, coords: Sequence[Scalar]) -> FieldElement:
        return self.evaluate(dict(zip(XYZ, coords)))

    def pullback(self, transform) -> "HomPoly":
        return pullback(self, transform)

    def __repr__(self) -> str:
        return f"HomPoly({self.format()})"


# =============================================================================
# Operations on forms
# =============================================================================

def substitute_linear(F: MPoly, forms: Sequence[MPoly]) -> MPoly:
    """F with its i-th variable replaced by forms[i]; forms share one variable tuple."""
    if len(forms) != len(F.variables):
        raise ValueError("one replacement form per variable required")
    target_vars = forms[0].variables
    tower = forms[0].tower
    cache: Dict[Tuple[int, int], MPoly] = {}

    def power(i: int, e: int) -> MPoly:
        if (i, e) not in cache:
            cache[(i, e)] = forms[i] ** e
        return cache[(i, e)]

    out = MPoly._make(tower, target_vars, {})
    for exps, c in F.terms.items():
        term = MPoly.constant(tower, target_vars, tower.lift(c) if c.tower != tower else c)
        for i, e in enumerate(exps):
            if e:
                term = term * power(i, e)
        out = out + term
    return out


def _rows(transform) -> List[List[FieldElement]]:
    return [list(r) for r in getattr(transform, "matrix", transform)]


def pullback(F: HomPoly, transform) -> HomPoly:
    """F(T·v): substitute the row-linear forms of T for X, Y, Z."""
    rows = _rows(transform)
    if any(x.tower != F.tower for r in rows for x in r):
        raise TowerMismatch("form and transform live in different towers")
    xyz = [MPoly.variable(F.tower, XYZ, v) for v in XYZ]
    forms = [sum((xyz[j] * rows[i][j] for j in range(3)), MPoly._make(F.tower, XYZ, {})) for i in range(3)]
    return HomPoly.from_mpoly(substitute_linear(F, forms), F.degree)


def split_coefficients(F: MPoly, outer: Sequence[str]) -> Dict[Tuple[int, ...], MPoly]:
    """Coefficients of F as a polynomial in `outer`, keyed by exponent, over the remaining variables."""
    take = [i for i, v in enumerate(F.variables) if v in outer]
    keep = [i for i, v in enumerate(F.variables) if v not in outer]
    rest = tuple(F.variables[i] for i in keep)
    groups: Dict[Tuple[int, ...], Dict[Exponents, FieldElement]] = {}
    for exps, c in F.terms.items():
        groups.setdefault(tuple(exps[i] for i in take), {})[tuple(exps[i] for i in keep)] = c
    return {key: MPoly._make(F.tower, rest, terms) for key, terms in sorted(groups.items())}


def proportional(F: MPoly, G: MPoly) -> Optional[FieldElement]:
    """ξ with F = ξ·G, or None."""
    if F.tower != G.tower:
        raise TowerMismatch("proportionality across towers")
    a, b = F._align(G)
    if a.is_zero() and b.is_zero():
        return a.tower.one()
    if a.is_zero() or b.is_zero() or a.terms.keys() != b.terms.keys():
        return None
    key = next(iter(a.terms))
    xi = a.terms[key] / b.terms[key]
    for e, c in a.terms.items():
        if c != xi * b.terms[e]:
            return None
    return xi


# =============================================================================
# Resultants
# =============================================================================

def bareiss_determinant(matrix: Sequence[Sequence[MPoly]]) -> MPoly:
    """Fraction-free determinant of a square matrix of polynomials."""
    m = [list(row) for row in matrix]
    n = len(m)
    if n == 0:
        raise ValueError("empty matrix")
    tower, variables = m[0][0].tower, m[0][0].variables
    sign, prev = 1, MPoly.constant(tower, variables, 1)
    for k in range(n - 1):
        if m[k][k].is_zero():
            swap = next((i for i in range(k + 1, n) if not m[i][k].is_zero()), None)
            if swap is None:
                return MPoly._make(tower, variables, {})
            m[k], m[swap] = m[swap], m[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]).exact_div(prev)
        prev = m[k][k]
    return m[n - 1][n - 1] * sign


def sylvester_matrix(f: MPoly, g: MPoly, var: str) -> List[List[MPoly]]:
    f, g = f._align(g)
    a = list(reversed(f.coefficients_in(var)))
    b = list(reversed(g.coefficients_in(var)))
    n, m = len(a) - 1, len(b) - 1
    zero = MPoly._make(f.tower, f.variables, {})
    rows = []
    for i in range(m):
        rows.append([zero] * i + a + [zero] * (m - 1 - i))
    for i in range(n):
        rows.append([zero] * i + b + [zero] * (n - 1 - i))
    return rows


def resultant(f: MPoly, g: MPoly, var: str) -> MPoly:
    """Res_var(f, g) as the Sylvester determinant; zero iff f, g share a factor in var."""
    f, g = f._align(g)
    n, m = f.degree_in(var), g.degree_in(var)
    if n < 0 or m < 0:
        raise ValueError("resultant of the zero polynomial")
    if n == 0:
        return f ** m
    if m == 0:
        return g ** n
    return bareiss_determinant(sylvester_matrix(f, g, var))


def univariate_resultant(f: UPoly, g: UPoly) -> FieldElement:
    """Resultant of two univariate polynomials over a common tower."""
    ff = MPoly(f.tower, ("x",), {(i,): c for i, c in enumerate(f.coeffs)})
    gg = MPoly(g.tower, ("x",), {(i,): c for i, c in enumerate(g.coeffs)})
    return resultant(ff, gg, "x").constant_value()


# =============================================================================
# Nonsingularity
# =============================================================================

def is_nonsingular(F: HomPoly) -> bool:
    """True iff the partials of F have no common projective zero (F reduced included)."""
    from app.services.elimination import PositiveDimensional, solve_system

    if F.is_zero() or F.degree < 1:
        raise InvalidCurve("a curve needs a nonzero form of degree >= 1")
    if F.degree == 1:
        return True
    partials = [p for p in F.partials()]
    if all(p.at((1, 0, 0)).is_zero() for p in partials):
        logger.debug(f"{F} is singular at (1:0:0)")
        return False
    charts = [({"Z": 1}, ["X", "Y"]), ({"Z": 0, "Y": 1}, ["X"])]
    try:
        for fixed, unknowns in charts:
            equations = [p.substitute(fixed) for p in partials]
            _, solutions = solve_system(equations, unknowns, tower=F.tower)
            if solutions:
                logger.debug(f"{F} is singular at {fixed} chart: {solutions[0]}")
                return False
    except PositiveDimensional:
        logger.debug(f"{F} has a positive-dimensional singular locus")
        return False
    return True
