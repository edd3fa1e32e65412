"""
Projective points, lines and transformations of the plane over a field tower.
"""

import logging
from dataclasses import dataclass
from functools import cached_property
from typing import Iterator, List, Optional, Sequence, Tuple, Union

from app.services.exceptions import CoincidentPoints, InvalidInput, SingularTransform
from app.services.field import QQ, FieldElement, FieldTower, Scalar
from app.services.poly import XYZ, MPoly

logger = logging.getLogger(__name__)


def _tower_of(values: Sequence, tower: Optional[FieldTower]) -> FieldTower:
    if tower is not None:
        return tower
    for v in values:
        if isinstance(v, FieldElement):
            return v.tower
    return QQ


def det3(m: Sequence[Sequence[FieldElement]]) -> FieldElement:
    return (
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    )


def adjugate3(m: Sequence[Sequence[FieldElement]]) -> List[List[FieldElement]]:
    def cofactor(i: int, j: int) -> FieldElement:
        rows = [r for r in range(3) if r != i]
        cols = [c for c in range(3) if c != j]
        minor = m[rows[0]][cols[0]] * m[rows[1]][cols[1]] - m[rows[0]][cols[1]] * m[rows[1]][cols[0]]
        return minor if (i + j) % 2 == 0 else -minor

    return [[cofactor(j, i) for j in range(3)] for i in range(3)]


def cross(u: Sequence[FieldElement], v: Sequence[FieldElement]) -> List[FieldElement]:
    return [
        u[1] * v[2] - u[2] * v[1],
        u[2] * v[0] - u[0] * v[2],
        u[0] * v[1] - u[1] * v[0],
    ]


class _Homogeneous:
    """Shared canonical-triple behaviour of points and lines."""

    __slots__ = ("coords",)

    def __init__(self, coords: Sequence[Scalar], tower: Optional[FieldTower] = None):
        if len(coords) != 3:
            raise InvalidInput(f"expected 3 homogeneous coordinates, got {len(coords)}")
        tower = _tower_of(coords, tower)
        cs = [tower.lift(c) if isinstance(c, FieldElement) else tower.coerce(c) for c in coords]
        nonzero = [i for i, c in enumerate(cs) if not c.is_zero()]
        if not nonzero:
            raise InvalidInput("(0:0:0) is not a projective point or line")
        inv = cs[nonzero[-1]].inverse()
        self.coords: Tuple[FieldElement, ...] = tuple(c * inv for c in cs)

    @property
    def tower(self) -> FieldTower:
        return self.coords[0].tower

    def lift(self, tower: FieldTower):
        return type(self)([tower.lift(c) for c in self.coords], tower)

    def __iter__(self) -> Iterator[FieldElement]:
        return iter(self.coords)

    def __getitem__(self, i: int) -> FieldElement:
        return self.coords[i]

    def __eq__(self, other) -> bool:
        if type(other) is not type(self):
            return NotImplemented
        return self.coords == other.coords

    def __hash__(self) -> int:
        return hash((type(self).__name__, self.coords))

    def sort_key(self) -> Tuple:
        """Lexicographic on the rational coordinate vectors of the canonical coordinates."""
        return tuple(c.flat() for c in self.coords)

    def pairing(self, other: "_Homogeneous") -> FieldElement:
        return sum((a * b for a, b in zip(self.coords, other.coords)), self.tower.zero())


class ProjPoint(_Homogeneous):
    """A point of the projective plane, normalized so its last nonzero coordinate is 1."""

    __slots__ = ()

    def __str__(self) -> str:
        return "(" + ":".join(str(c) for c in self.coords) + ")"

    def __repr__(self) -> str:
        return f"ProjPoint{self}"


class ProjLine(_Homogeneous):
    """A line aX + bY + cZ = 0 with the same normalization as points."""

    __slots__ = ()

    def contains(self, point: ProjPoint) -> bool:
        return self.pairing(point).is_zero()

    def form(self) -> MPoly:
        return MPoly(self.tower, XYZ, {(1, 0, 0): self[0], (0, 1, 0): self[1], (0, 0, 1): self[2]})

    def __str__(self) -> str:
        return f"{self.form()} = 0"

    def __repr__(self) -> str:
        return f"ProjLine({self.form()})"


def line_through(p: ProjPoint, q: ProjPoint) -> ProjLine:
    if p == q:
        raise CoincidentPoints(f"no unique line through {p} and {p}")
    return ProjLine(cross(p.coords, q.coords), p.tower)


def meet(l1: ProjLine, l2: ProjLine) -> ProjPoint:
    """Intersection point of two distinct lines."""
    if l1 == l2:
        raise CoincidentPoints(f"lines {l1} coincide")
    return ProjPoint(cross(l1.coords, l2.coords), l1.tower)


def dual(x: Union[ProjPoint, ProjLine]) -> Union[ProjPoint, ProjLine]:
    """Swap the roles of point and line with identical coordinates."""
    if isinstance(x, ProjPoint):
        return ProjLine(x.coords, x.tower)
    if isinstance(x, ProjLine):
        return ProjPoint(x.coords, x.tower)
    raise TypeError(f"cannot dualize {type(x).__name__}")


# =============================================================================
# Transformations
# =============================================================================

class ProjTransform:
    """An invertible 3x3 matrix acting on column vectors; proportional matrices are equal."""

    def __init__(self, matrix: Sequence[Sequence[Scalar]], tower: Optional[FieldTower] = None):
        flat = [x for row in matrix for x in row]
        if len(matrix) != 3 or len(flat) != 9:
            raise InvalidInput("a projective transformation needs a 3x3 matrix")
        tower = _tower_of(flat, tower)
        self.matrix: Tuple[Tuple[FieldElement, ...], ...] = tuple(
            tuple(tower.lift(x) if isinstance(x, FieldElement) else tower.coerce(x) for x in row)
            for row in matrix
        )
        if self.det().is_zero():
            raise SingularTransform(f"matrix {self} has zero determinant")

    @classmethod
    def identity(cls, tower: FieldTower = QQ) -> "ProjTransform":
        return cls.diagonal(1, 1, 1, tower=tower)

    @classmethod
    def diagonal(cls, a: Scalar, b: Scalar, c: Scalar, tower: Optional[FieldTower] = None) -> "ProjTransform":
        return cls([[a, 0, 0], [0, b, 0], [0, 0, c]], tower)

    @property
    def tower(self) -> FieldTower:
        return self.matrix[0][0].tower

    def lift(self, tower: FieldTower) -> "ProjTransform":
        return ProjTransform([[tower.lift(x) for x in row] for row in self.matrix], tower)

    def det(self) -> FieldElement:
        return det3(self.matrix)

    def adjugate(self) -> List[List[FieldElement]]:
        return adjugate3(self.matrix)

    def inverse(self) -> "ProjTransform":
        inv = self.det().inverse()
        return ProjTransform([[x * inv for x in row] for row in self.adjugate()], self.tower)

    def compose(self, other: "ProjTransform") -> "ProjTransform":
        """self ∘ other, i.e. the matrix product self·other."""
        a, b = self.matrix, other.matrix
        return ProjTransform(
            [[sum((a[i][k] * b[k][j] for k in range(3)), self.tower.zero()) for j in range(3)] for i in range(3)],
            self.tower,
        )

    __matmul__ = compose

    def apply(self, point: ProjPoint) -> ProjPoint:
        v = point.coords
        return ProjPoint(
            [sum((self.matrix[i][j] * v[j] for j in range(3)), self.tower.zero()) for i in range(3)],
            self.tower,
        )

    def apply_line(self, line: ProjLine) -> ProjLine:
        """Image of a line: the coefficient row vector times the inverse matrix."""
        inv = self.inverse().matrix
        c = line.coords
        return ProjLine(
            [sum((c[i] * inv[i][j] for i in range(3)), self.tower.zero()) for j in range(3)],
            self.tower,
        )

    @cached_property
    def _canonical(self) -> Tuple[Tuple[FieldElement, ...], ...]:
        flat = [x for row in self.matrix for x in row]
        pivot = next(x for x in flat if not x.is_zero())
        inv = pivot.inverse()
        return tuple(tuple(x * inv for x in row) for row in self.matrix)

    def canonical(self) -> "ProjTransform":
        """Representative whose first nonzero entry (row-major) is 1."""
        return ProjTransform(self._canonical, self.tower)

    def __eq__(self, other) -> bool:
        if not isinstance(other, ProjTransform):
            return NotImplemented
        if other.tower != self.tower:
            return False
        return self._canonical == other._canonical

    def __hash__(self) -> int:
        return hash(self._canonical)

    def is_identity(self) -> bool:
        return self == ProjTransform.identity(self.tower)

    def rows(self) -> List[List[str]]:
        return [[str(x) for x in row] for row in self.matrix]

    def __str__(self) -> str:
        return "[" + ", ".join("[" + ", ".join(r) + "]" for r in self.rows()) + "]"

    def __repr__(self) -> str:
        return f"ProjTransform({self})"


def apply(T: ProjTransform, p: ProjPoint) -> ProjPoint:
    return T.apply(p)


def inverse(T: ProjTransform) -> ProjTransform:
    return T.inverse()


def compose(S: ProjTransform, T: ProjTransform) -> ProjTransform:
    return S.compose(T)


def standardize_center(P: ProjPoint) -> ProjTransform:
    """
    A deterministic T with T(P) = (0:1:0). T is the inverse of the matrix with
    columns [e_a, P, e_b], the first of (e1, e3), (e2, e3), (e1, e2) that is
    independent of P; coordinate points give permutation matrices.
    """
    tower = P.tower
    x, y, z = P.coords
    one, zero = tower.one(), tower.zero()
    e = [(one, zero, zero), (zero, one, zero), (zero, zero, one)]
    if not y.is_zero():
        a, b = e[0], e[2]
    elif not x.is_zero():
        a, b = e[1], e[2]
    else:
        a, b = e[0], e[1]
    columns = [a, P.coords, b]
    B = ProjTransform([[columns[j][i] for j in range(3)] for i in range(3)], tower)
    return B.inverse()


@dataclass(frozen=True)
class FiberFamily:
    """
    Transforms preserving every line through `center`: after conjugating the
    center to (0:1:0) they are [[1,0,0],[p,q,r],[0,0,1]] with q != 0.
    """

    center: ProjPoint
    conjugator: ProjTransform

    @property
    def tower(self) -> FieldTower:
        return self.center.tower

    def member(self, p: Scalar, q: Scalar, r: Scalar) -> ProjTransform:
        tower = self.tower
        M = ProjTransform([[1, 0, 0], [p, q, r], [0, 0, 1]], tower)
        return self.conjugator.inverse() @ M @ self.conjugator

    def parameters(self, T: ProjTransform) -> Optional[Tuple[FieldElement, FieldElement, FieldElement]]:
        """(p, q, r) when T belongs to the family, else None."""
        B = (self.conjugator @ T.lift(self.tower) @ self.conjugator.inverse()).matrix
        if not all(B[i][j].is_zero() for i, j in ((0, 1), (0, 2), (2, 0), (2, 1))):
            return None
        if B[0][0] != B[2][2]:
            return None
        s = B[0][0].inverse()
        return B[1][0] * s, B[1][1] * s, B[1][2] * s

    def contains(self, T: ProjTransform) -> bool:
        return self.parameters(T) is not None


def fiber_family(P: ProjPoint) -> FiberFamily:
    return FiberFamily(P, standardize_center(P))
