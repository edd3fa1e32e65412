"""
Exact arithmetic in towers of simple algebraic extensions of the rationals.

A tower is an ordered list of levels; level k adjoins a root of a monic,
squarefree polynomial whose coefficients live in level k-1 (level 0 is Q).
Elements are stored as nested coefficient tuples ("raw" values) and wrapped
in FieldElement for operator arithmetic. Irreducibility of a modulus is the
caller's responsibility; a reducible modulus is detected when an inversion
meets a nontrivial common factor (ZeroDivisor).
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from math import gcd, lcm
from typing import Any, List, Optional, Sequence, Tuple, Union

from cachetools import LRUCache, cached

from app.config import get_settings
from app.services.exceptions import (
    DivisionByZero,
    InvalidInput,
    NotMonic,
    NotSquarefree,
    SGPointsError,
    TowerMismatch,
    ZeroDivisor,
)

logger = logging.getLogger(__name__)

Raw = Union[Fraction, tuple]
Scalar = Union[int, Fraction, "FieldElement"]


# =============================================================================
# Dense polynomial helpers over a level (lists of raw values, low to high)
# =============================================================================

def _trim(ops, p: List[Raw]) -> List[Raw]:
    p = list(p)
    while p and ops.is_zero(p[-1]):
        p.pop()
    return p


def _padd(ops, p, q):
    n = max(len(p), len(q))
    zero = ops.zero()
    return _trim(ops, [ops.add(p[i] if i < len(p) else zero, q[i] if i < len(q) else zero)
                       for i in range(n)])


def _psub(ops, p, q):
    n = max(len(p), len(q))
    zero = ops.zero()
    return _trim(ops, [ops.sub(p[i] if i < len(p) else zero, q[i] if i < len(q) else zero)
                       for i in range(n)])


def _pmul(ops, p, q):
    if not p or not q:
        return []
    out = [ops.zero()] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if ops.is_zero(a):
            continue
        for j, b in enumerate(q):
            if ops.is_zero(b):
                continue
            out[i + j] = ops.add(out[i + j], ops.mul(a, b))
    return _trim(ops, out)


def _pdivmod(ops, p, q):
    q = _trim(ops, q)
    if not q:
        raise DivisionByZero("polynomial division by zero")
    rem = _trim(ops, p)
    lc_inv = ops.inv(q[-1])
    quot = [ops.zero()] * max(len(rem) - len(q) + 1, 0)
    while len(rem) >= len(q):
        shift = len(rem) - len(q)
        c = ops.mul(rem[-1], lc_inv)
        quot[shift] = c
        for i, b in enumerate(q):
            rem[shift + i] = ops.sub(rem[shift + i], ops.mul(c, b))
        rem = _trim(ops, rem[:-1])
    return _trim(ops, quot), rem


def _invmod(ops, a, m):
    """Inverse of a modulo m over the level described by ops; raises ZeroDivisor."""
    r0, r1 = _trim(ops, m), _trim(ops, a)
    s0, s1 = [], [ops.one()]
    while r1:
        quot, rem = _pdivmod(ops, r0, r1)
        r0, r1 = r1, rem
        s0, s1 = s1, _psub(ops, s0, _pmul(ops, quot, s1))
    if len(r0) > 1:
        lc_inv = ops.inv(r0[-1])
        factor = [ops.mul(c, lc_inv) for c in r0]
        raise ZeroDivisor(UPoly(ops.tower, [FieldElement(ops.tower, c) for c in factor]))
    c = ops.inv(r0[0])
    return [ops.mul(s, c) for s in s0]


# =============================================================================
# Level arithmetic
# =============================================================================

class _RationalOps:
    """Arithmetic on level 0 (arbitrary-precision rationals)."""

    depth = 0
    degree = 1

    def __init__(self, tower: "FieldTower"):
        self.tower = tower

    def zero(self):
        return Fraction(0)

    def one(self):
        return Fraction(1)

    def from_rational(self, q) -> Raw:
        return Fraction(q)

    def is_zero(self, a) -> bool:
        return a == 0

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def neg(self, a):
        return -a

    def mul(self, a, b):
        return a * b

    def inv(self, a):
        if a == 0:
            raise DivisionByZero("inverse of zero")
        return 1 / a

    def is_rational(self, a) -> bool:
        return True

    def to_rational(self, a) -> Fraction:
        return a

    def flat(self, a) -> Tuple[Fraction, ...]:
        return (a,)


class _ExtensionOps:
    """Arithmetic on level k: polynomials over level k-1 reduced modulo the level's modulus."""

    def __init__(self, base, modulus: Sequence[Raw], tower: "FieldTower"):
        self.base = base
        self.modulus = list(modulus)
        self.degree = len(modulus) - 1
        self.depth = base.depth + 1
        self.tower = tower

    def zero(self):
        return tuple(self.base.zero() for _ in range(self.degree))

    def one(self):
        return (self.base.one(),) + tuple(self.base.zero() for _ in range(self.degree - 1))

    def from_rational(self, q) -> Raw:
        return (self.base.from_rational(q),) + tuple(self.base.zero() for _ in range(self.degree - 1))

    def is_zero(self, a) -> bool:
        return all(self.base.is_zero(c) for c in a)

    def add(self, a, b):
        return tuple(self.base.add(x, y) for x, y in zip(a, b))

    def sub(self, a, b):
        return tuple(self.base.sub(x, y) for x, y in zip(a, b))

    def neg(self, a):
        return tuple(self.base.neg(x) for x in a)

    def mul(self, a, b):
        return self._reduce(_pmul(self.base, list(a), list(b)))

    def inv(self, a):
        if self.is_zero(a):
            raise DivisionByZero("inverse of zero")
        return self._reduce(_invmod(self.base, list(a), self.modulus))

    def _reduce(self, p):
        base, n = self.base, self.degree
        p = list(p)
        for i in range(len(p) - 1, n - 1, -1):
            c = p[i]
            if base.is_zero(c):
                continue
            for j in range(n):
                p[i - n + j] = base.sub(p[i - n + j], base.mul(c, self.modulus[j]))
            p[i] = base.zero()
        p = p[:n]
        p.extend(base.zero() for _ in range(n - len(p)))
        return tuple(p)

    def is_rational(self, a) -> bool:
        return self.base.is_rational(a[0]) and all(self.base.is_zero(c) for c in a[1:])

    def to_rational(self, a) -> Fraction:
        return self.base.to_rational(a[0])

    def flat(self, a) -> Tuple[Fraction, ...]:
        out: Tuple[Fraction, ...] = ()
        for c in a:
            out += self.base.flat(c)
        return out


# =============================================================================
# Towers
# =============================================================================

@dataclass(frozen=True)
class Level:
    """One simple extension: generator name and monic modulus (raw, low to high)."""
    name: str
    modulus: tuple


@dataclass(frozen=True)
class FieldTower:
    """A tower Q = K0 ⊂ K1 ⊂ ... ⊂ Kn of simple extensions; immutable and hashable."""

    levels: Tuple[Level, ...] = ()

    @cached_property
    def ops(self):
        if not self.levels:
            return _RationalOps(self)
        return _ExtensionOps(self.base.ops, self.levels[-1].modulus, self)

    @cached_property
    def base(self) -> "FieldTower":
        if not self.levels:
            raise SGPointsError("the rationals have no base field")
        return FieldTower(self.levels[:-1])

    @property
    def depth(self) -> int:
        return len(self.levels)

    @property
    def names(self) -> List[str]:
        return [level.name for level in self.levels]

    @cached_property
    def degree(self) -> int:
        """Absolute degree over Q."""
        d = 1
        for level in self.levels:
            d *= len(level.modulus) - 1
        return d

    def prefix(self, depth: int) -> "FieldTower":
        return FieldTower(self.levels[:depth])

    def extends(self, other: "FieldTower") -> bool:
        """True when `other` is a prefix of this tower."""
        return self.levels[:len(other.levels)] == other.levels

    # ------------------------------------------------------------------
    # element construction
    # ------------------------------------------------------------------

    def element(self, raw: Raw) -> "FieldElement":
        return FieldElement(self, raw)

    def zero(self) -> "FieldElement":
        return FieldElement(self, self.ops.zero())

    def one(self) -> "FieldElement":
        return FieldElement(self, self.ops.one())

    def __call__(self, value: Scalar) -> "FieldElement":
        return self.coerce(value)

    def coerce(self, value: Scalar) -> "FieldElement":
        if isinstance(value, FieldElement):
            if value.tower is self or value.tower == self:
                return value
            raise TowerMismatch(
                f"element of {value.tower.declaration()} used in {self.declaration()}"
            )
        if isinstance(value, (int, Fraction)):
            return FieldElement(self, self.ops.from_rational(value))
        raise TypeError(f"cannot coerce {type(value).__name__} into a field element")

    def generator(self, which: Union[int, str] = -1) -> "FieldElement":
        """The generator of a level (index or name) as an element of this tower."""
        index = self.names.index(which) if isinstance(which, str) else which % self.depth
        level_tower = self.prefix(index + 1)
        ops = level_tower.ops
        raw = (ops.base.zero(), ops.base.one()) + tuple(ops.base.zero() for _ in range(ops.degree - 2))
        if ops.degree == 1:
            raise SGPointsError("degree-1 levels have no proper generator")
        return self.lift(FieldElement(level_tower, raw))

    def generators(self) -> List["FieldElement"]:
        return [self.generator(i) for i in range(self.depth)]

    def lift(self, value: Scalar) -> "FieldElement":
        """Embed an element of a prefix tower by padding its coordinates."""
        if not isinstance(value, FieldElement):
            return self.coerce(value)
        src = value.tower
        if src == self:
            return value
        if not self.extends(src):
            raise TowerMismatch(f"{src.declaration()} is not a prefix of {self.declaration()}")
        raw = value.raw
        for depth in range(src.depth + 1, self.depth + 1):
            ops = self.prefix(depth).ops
            raw = (raw,) + tuple(ops.base.zero() for _ in range(ops.degree - 1))
        return FieldElement(self, raw)

    # ------------------------------------------------------------------
    # extension
    # ------------------------------------------------------------------

    def adjoin(self, name: str, minpoly: "UPoly") -> "FieldTower":
        return adjoin(self, name, minpoly)

    # ------------------------------------------------------------------
    # roots of unity
    # ------------------------------------------------------------------

    @cached_property
    def generator_orders(self) -> Tuple[Optional[int], ...]:
        """Multiplicative order of each generator, or None when it is not a small root of unity."""
        limit = get_settings().root_of_unity_search
        orders: List[Optional[int]] = []
        for g in self.generators():
            power, found = g, None
            for m in range(1, limit + 1):
                if power == 1:
                    found = m
                    break
                power = power * g
            orders.append(found)
        return tuple(orders)

    @cached_property
    def root_of_unity(self) -> Tuple["FieldElement", int]:
        """A primitive N-th root of unity generating the roots of unity visible from the generators."""
        sources = [(self.coerce(-1), 2)]
        for g, order in zip(self.generators(), self.generator_orders):
            if order:
                sources.append((g, order))
        n = 1
        for _, order in sources:
            n = lcm(n, order)
        zeta = self.one()
        for p, e in _factor_small(n):
            pe = p ** e
            for g, order in sources:
                if order % pe == 0:
                    zeta = zeta * g ** (order // pe)
                    break
        return zeta, n

    # ------------------------------------------------------------------
    # rendering
    # ------------------------------------------------------------------

    def declaration(self) -> str:
        """Field declaration in the shell grammar, e.g. "Q(zeta4, t2: x^2 + zeta4*x - 1)"."""
        if not self.levels:
            return "Q"
        parts = []
        for depth, level in enumerate(self.levels, start=1):
            prefix = self.prefix(depth - 1)
            minpoly = UPoly(prefix, [FieldElement(prefix, c) for c in level.modulus])
            parts.append(_describe_level(level.name, minpoly))
        return "Q(" + ", ".join(parts) + ")"

    def __repr__(self) -> str:
        return f"FieldTower({self.declaration()})"


QQ = FieldTower()


def common_tower(*towers: FieldTower) -> FieldTower:
    """The tower among `towers` that extends all the others."""
    best = QQ
    for t in towers:
        if t.extends(best):
            best = t
        elif not best.extends(t):
            raise TowerMismatch(f"{best.declaration()} and {t.declaration()} are not nested")
    return best


def _describe_level(name: str, minpoly: "UPoly") -> str:
    if name.startswith("zeta") and name[4:].isdigit():
        n = int(name[4:])
        if minpoly.is_rational() and minpoly.rational_coefficients() == cyclotomic_minpoly(n).rational_coefficients():
            return name
    if name.startswith("sqrt") and minpoly.degree == 2 and minpoly.is_rational():
        c = minpoly.rational_coefficients()
        if c[1] == 0 and c[0].denominator == 1:
            radicand = -c[0].numerator
            expected = f"sqrt{radicand}" if radicand >= 0 else f"sqrtm{-radicand}"
            if name == expected:
                return name
    return f"{name}: {minpoly}"


def _factor_small(n: int) -> List[Tuple[int, int]]:
    out, p = [], 2
    while p * p <= n:
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out.append((p, e))
        p += 1
    if n > 1:
        out.append((n, 1))
    return out


# =============================================================================
# Elements
# =============================================================================

class FieldElement:
    """An exact element of a FieldTower."""

    __slots__ = ("tower", "raw")

    def __init__(self, tower: FieldTower, raw: Raw):
        self.tower = tower
        self.raw = raw

    def _other(self, other) -> Optional["FieldElement"]:
        if isinstance(other, FieldElement):
            if other.tower is not self.tower and other.tower != self.tower:
                raise TowerMismatch(
                    f"{self.tower.declaration()} vs {other.tower.declaration()}"
                )
            return other
        if isinstance(other, (int, Fraction)):
            return self.tower.coerce(other)
        return None

    def __add__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return FieldElement(self.tower, self.tower.ops.add(self.raw, o.raw))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return FieldElement(self.tower, self.tower.ops.sub(self.raw, o.raw))

    def __rsub__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return FieldElement(self.tower, self.tower.ops.sub(o.raw, self.raw))

    def __mul__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return FieldElement(self.tower, self.tower.ops.mul(self.raw, o.raw))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return self * try_invert(o)

    def __rtruediv__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return o * try_invert(self)

    def __neg__(self):
        return FieldElement(self.tower, self.tower.ops.neg(self.raw))

    def __pow__(self, exponent: int):
        if exponent < 0:
            return try_invert(self) ** (-exponent)
        result, base = self.tower.one(), self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = self.tower.coerce(other)
        if not isinstance(other, FieldElement):
            return NotImplemented
        if other.tower is not self.tower and other.tower != self.tower:
            return False
        return self.raw == other.raw

    def __hash__(self) -> int:
        return hash((self.tower, self.raw))

    def __bool__(self) -> bool:
        return not self.is_zero()

    def is_zero(self) -> bool:
        return self.tower.ops.is_zero(self.raw)

    def is_rational(self) -> bool:
        return self.tower.ops.is_rational(self.raw)

    def to_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return self.tower.ops.to_rational(self.raw)

    def flat(self) -> Tuple[Fraction, ...]:
        """Rational coordinate vector over the tower's power basis."""
        return self.tower.ops.flat(self.raw)

    def inverse(self) -> "FieldElement":
        return try_invert(self)

    def terms(self) -> List[Tuple[Fraction, Tuple[int, ...]]]:
        """Nonzero (coefficient, generator exponents) pairs, highest exponents first."""
        out = _monomials(self.tower, self.raw, self.tower.depth)
        out.sort(key=lambda t: tuple(reversed(t[1])), reverse=True)
        return out

    def __str__(self) -> str:
        return format_element(self)

    def __repr__(self) -> str:
        return f"FieldElement({self})"


def _monomials(tower: FieldTower, raw: Raw, depth: int):
    if depth == 0:
        return [(raw, ())] if raw != 0 else []
    out = []
    for i, c in enumerate(raw):
        for coeff, exps in _monomials(tower, c, depth - 1):
            out.append((coeff, exps + (i,)))
    return out


def _format_fraction(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def format_element(a: FieldElement) -> str:
    """Render an element in the shell grammar (polynomial in the generator names)."""
    terms = a.terms()
    if not terms:
        return "0"
    names = a.tower.names
    pieces = []
    for coeff, exps in terms:
        gens = [names[i] if e == 1 else f"{names[i]}^{e}" for i, e in enumerate(exps) if e]
        mag = abs(coeff)
        if not gens:
            body = _format_fraction(mag)
        elif mag == 1:
            body = "*".join(gens)
        else:
            body = _format_fraction(mag) + "*" + "*".join(gens)
        pieces.append(("-" if coeff < 0 else "+", body))
    text = ("-" if pieces[0][0] == "-" else "") + pieces[0][1]
    for sign, body in pieces[1:]:
        text += f" {sign} {body}"
    return text


def arith(a: FieldElement, b: FieldElement, op: str) -> FieldElement:
    """Field arithmetic in a shared tower; op is one of add, sub, mul."""
    if a.tower != b.tower:
        raise TowerMismatch(f"{a.tower.declaration()} vs {b.tower.declaration()}")
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown operation {op!r}")


def try_invert(a: FieldElement) -> FieldElement:
    """Inverse by extended gcd against the top modulus; raises ZeroDivisor or DivisionByZero."""
    return FieldElement(a.tower, a.tower.ops.inv(a.raw))


# =============================================================================
# Univariate polynomials over a tower
# =============================================================================

class UPoly:
    """Dense univariate polynomial with FieldElement coefficients (low to high)."""

    __slots__ = ("tower", "coeffs")

    def __init__(self, tower: FieldTower, coeffs: Sequence[Scalar]):
        self.tower = tower
        cs = [tower.coerce(c) for c in coeffs]
        while cs and cs[-1].is_zero():
            cs.pop()
        self.coeffs = tuple(cs)

    @classmethod
    def x(cls, tower: FieldTower) -> "UPoly":
        return cls(tower, [0, 1])

    @classmethod
    def constant(cls, tower: FieldTower, c: Scalar) -> "UPoly":
        return cls(tower, [c])

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def __getitem__(self, i: int) -> FieldElement:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else self.tower.zero()

    @property
    def lc(self) -> FieldElement:
        return self.coeffs[-1]

    def monic(self) -> "UPoly":
        inv = try_invert(self.lc)
        return UPoly(self.tower, [c * inv for c in self.coeffs])

    def is_monic(self) -> bool:
        return bool(self.coeffs) and self.lc == 1

    def is_rational(self) -> bool:
        return all(c.is_rational() for c in self.coeffs)

    def rational_coefficients(self) -> List[Fraction]:
        return [c.to_fraction() for c in self.coeffs]

    def lift(self, tower: FieldTower) -> "UPoly":
        return UPoly(tower, [tower.lift(c) for c in self.coeffs])

    def _coerce(self, other) -> "UPoly":
        if isinstance(other, UPoly):
            if other.tower != self.tower:
                raise TowerMismatch("polynomials over different towers")
            return other
        return UPoly(self.tower, [other])

    def __add__(self, other):
        o = self._coerce(other)
        n = max(len(self.coeffs), len(o.coeffs))
        return UPoly(self.tower, [self[i] + o[i] for i in range(n)])

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        n = max(len(self.coeffs), len(o.coeffs))
        return UPoly(self.tower, [self[i] - o[i] for i in range(n)])

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __neg__(self):
        return UPoly(self.tower, [-c for c in self.coeffs])

    def __mul__(self, other):
        o = self._coerce(other)
        ops = self.tower.ops
        raw = _pmul(ops, [c.raw for c in self.coeffs], [c.raw for c in o.coeffs])
        return UPoly(self.tower, [FieldElement(self.tower, r) for r in raw])

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "UPoly":
        out = UPoly(self.tower, [1])
        for _ in range(n):
            out = out * self
        return out

    def __divmod__(self, other):
        o = self._coerce(other)
        ops = self.tower.ops
        q, r = _pdivmod(ops, [c.raw for c in self.coeffs], [c.raw for c in o.coeffs])
        wrap = lambda raw: UPoly(self.tower, [FieldElement(self.tower, c) for c in raw])
        return wrap(q), wrap(r)

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def __eq__(self, other) -> bool:
        if not isinstance(other, UPoly):
            return NotImplemented
        return self.tower == other.tower and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash((self.tower, self.coeffs))

    def __call__(self, value: Scalar) -> FieldElement:
        acc = self.tower.zero()
        for c in reversed(self.coeffs):
            acc = acc * value + c
        return acc

    def derivative(self) -> "UPoly":
        return UPoly(self.tower, [c * i for i, c in enumerate(self.coeffs)][1:])

    @staticmethod
    def gcd(a: "UPoly", b: "UPoly") -> "UPoly":
        """Monic gcd (zero when both inputs are zero)."""
        while not b.is_zero():
            a, b = b, a % b
        return a.monic() if not a.is_zero() else a

    def squarefree_part(self) -> "UPoly":
        g = UPoly.gcd(self, self.derivative())
        return self // g if g.degree > 0 else self

    def deflate(self, root: FieldElement) -> "UPoly":
        return self // UPoly(self.tower, [-root, 1])

    def binomial(self) -> Optional[Tuple[int, FieldElement]]:
        """(k, c) when the polynomial is monic x^k - c, else None."""
        if not self.is_monic() or self.degree < 1:
            return None
        if any(not c.is_zero() for c in self.coeffs[1:-1]):
            return None
        return self.degree, -self.coeffs[0]

    def format(self, var: str = "x") -> str:
        if not self.coeffs:
            return "0"
        pieces = []
        for i in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[i]
            if c.is_zero():
                continue
            mono = "" if i == 0 else (var if i == 1 else f"{var}^{i}")
            text = str(c)
            negative = text.startswith("-") and len(c.terms()) == 1
            if negative:
                text = text[1:]
            if len(c.terms()) > 1:
                text = f"({text})"
            if mono:
                body = mono if text == "1" else f"{text}*{mono}"
            else:
                body = text
            pieces.append(("-" if negative else "+", body))
        out = ("-" if pieces[0][0] == "-" else "") + pieces[0][1]
        for sign, body in pieces[1:]:
            out += f" {sign} {body}"
        return out

    def __str__(self) -> str:
        return self.format()

    def __repr__(self) -> str:
        return f"UPoly({self.format()} over {self.tower.declaration()})"


# =============================================================================
# Adjunction and cyclotomic polynomials
# =============================================================================

def adjoin(tower: FieldTower, name: str, minpoly: UPoly) -> FieldTower:
    """Extend `tower` by a root of `minpoly` named `name`."""
    if minpoly.tower != tower:
        raise TowerMismatch("minimal polynomial coefficients must live in the tower being extended")
    if name in tower.names:
        raise InvalidInput(f"generator {name!r} already declared")
    if minpoly.degree < 2:
        raise InvalidInput(f"minimal polynomial must have degree >= 2, got {minpoly.degree}")
    if not minpoly.is_monic():
        raise NotMonic(f"minimal polynomial {minpoly} is not monic")
    if UPoly.gcd(minpoly, minpoly.derivative()).degree > 0:
        raise NotSquarefree(f"minimal polynomial {minpoly} is not squarefree")
    extended = FieldTower(tower.levels + (Level(name, tuple(c.raw for c in minpoly.coeffs)),))
    logger.debug(f"Adjoined {name}: {minpoly} -> degree {extended.degree}")
    return extended


@cached(LRUCache(maxsize=256))
def cyclotomic_minpoly(n: int) -> UPoly:
    """The n-th cyclotomic polynomial over Q, by exact division of x^n - 1."""
    if n < 1:
        raise ValueError("cyclotomic index must be positive")
    poly = UPoly(QQ, [-1] + [0] * (n - 1) + [1])
    for d in range(1, n):
        if n % d == 0:
            poly = poly // cyclotomic_minpoly(d)
    return poly


def cyclotomic_tower(*orders: int, base: FieldTower = QQ) -> FieldTower:
    """Convenience: adjoin zetaN for each order in turn."""
    tower = base
    for n in orders:
        tower = adjoin(tower, f"zeta{n}", cyclotomic_minpoly(n).lift(tower))
    return tower


def euler_phi(n: int) -> int:
    return sum(1 for k in range(1, n + 1) if gcd(k, n) == 1)
