"""
Root finding for univariate polynomials inside a field tower.

Strategies run in a fixed order: binomials x^k - c against the tower's roots
of unity, rational roots, roots of unity, then radical formulas (quadratic,
Cardano, Ferrari) on the residual of degree <= 4. Every root is verified by
substitution before it is returned. When a residual has no roots in the tower,
Unresolved carries an adjoinable factor when one is known.
"""

import logging
from fractions import Fraction
from math import gcd, lcm
from typing import List, Optional

from app.config import get_settings
from app.services.exceptions import DegreeTooHigh, Unresolved
from app.services.field import (
    FieldElement,
    FieldTower,
    UPoly,
    cyclotomic_minpoly,
    euler_phi,
)

logger = logging.getLogger(__name__)

_RATIONAL_ROOT_BOUND = 10 ** 12


# =============================================================================
# Rational helpers
# =============================================================================

def _iroot(n: int, k: int) -> Optional[int]:
    """Exact integer k-th root of n >= 0, or None."""
    if n < 2:
        return n
    x = 1 << ((n.bit_length() + k - 1) // k)
    while True:
        y = ((k - 1) * x + n // x ** (k - 1)) // k
        if y >= x:
            break
        x = y
    return x if x ** k == n else None


def rational_root(q: Fraction, k: int) -> Optional[Fraction]:
    """A rational k-th root of q (the real one when k is odd), or None."""
    q = Fraction(q)
    if q == 0:
        return Fraction(0)
    if q < 0:
        if k % 2 == 0:
            return None
        r = rational_root(-q, k)
        return -r if r is not None else None
    num, den = _iroot(q.numerator, k), _iroot(q.denominator, k)
    if num is None or den is None:
        return None
    return Fraction(num, den)


def _divisors(n: int) -> List[int]:
    small, large = [], []
    d = 1
    while d * d <= n:
        if n % d == 0:
            small.append(d)
            if d * d != n:
                large.append(n // d)
        d += 1
    return small + large[::-1]


def _rational_roots(p: UPoly) -> List[FieldElement]:
    coeffs = p.rational_coefficients()
    den = 1
    for c in coeffs:
        den = lcm(den, c.denominator)
    ints = [int(c * den) for c in coeffs]
    out: List[FieldElement] = []
    low = 0
    while ints[low] == 0:
        low += 1
    if low:
        out.append(p.tower.zero())
    a0, an = abs(ints[low]), abs(ints[-1])
    if a0 > _RATIONAL_ROOT_BOUND or an > _RATIONAL_ROOT_BOUND:
        return out
    seen = set()
    for num in _divisors(a0):
        for dd in _divisors(an):
            for sign in (1, -1):
                cand = Fraction(sign * num, dd)
                if cand in seen:
                    continue
                seen.add(cand)
                acc = Fraction(0)
                for c in reversed(coeffs):
                    acc = acc * cand + c
                if acc == 0:
                    out.append(p.tower(cand))
    return out


# =============================================================================
# Radicals
# =============================================================================

def binomial_roots(c: FieldElement, k: int) -> List[FieldElement]:
    """All roots of x^k = c visible as r * b * zeta^t (b = 1 or a generator)."""
    tower = c.tower
    if c.is_zero():
        return [tower.zero()]
    zeta, n = tower.root_of_unity
    powers = [tower.one()]
    for _ in range(n - 1):
        powers.append(powers[-1] * zeta)
    g = gcd(k, n)
    for b in [tower.one()] + tower.generators():
        w = c / b ** k
        for j in range(n):
            r = w * powers[(-j) % n]
            if not r.is_rational() or j % g:
                continue
            s = rational_root(r.to_fraction(), k)
            if s is None:
                continue
            step = n // g
            t0 = (j // g) * pow(k // g, -1, step) % step if step > 1 else 0
            base_root = b * s * powers[t0 % n]
            return [base_root * powers[(u * step) % n] for u in range(g)]
    return []


def sqrt_in_tower(a: FieldElement) -> Optional[FieldElement]:
    """A square root of a inside its tower, or None when none was found."""
    tower = a.tower
    if a.is_zero():
        return a
    if a.is_rational():
        r = rational_root(a.to_fraction(), 2)
        if r is not None:
            return tower(r)
    if tower.depth:
        ops = tower.ops
        if all(ops.base.is_zero(c) for c in a.raw[1:]):
            s = sqrt_in_tower(FieldElement(tower.base, a.raw[0]))
            if s is not None:
                return tower.lift(s)
        if ops.degree == 2:
            s = _sqrt_quadratic_level(a)
            if s is not None:
                return s
    found = binomial_roots(a, 2)
    return found[0] if found else None


def _sqrt_quadratic_level(a: FieldElement) -> Optional[FieldElement]:
    # theta^2 + p*theta + q = 0 and (x + y*theta)^2 = A + B*theta
    tower = a.tower
    base = tower.base
    q_raw, p_raw, _ = tower.levels[-1].modulus
    P, Q = FieldElement(base, p_raw), FieldElement(base, q_raw)
    A, B = FieldElement(base, a.raw[0]), FieldElement(base, a.raw[1])
    theta = tower.generator(-1)
    ts = quadratic_roots(P * P - 4 * Q, 2 * B * P - 4 * A, B * B)
    for t in ts or []:
        if t.is_zero():
            continue
        y = sqrt_in_tower(t)
        if y is None:
            continue
        x = (B + P * t) / (2 * y)
        cand = tower.lift(x) + tower.lift(y) * theta
        if cand * cand == a:
            return cand
    return None


def require_sqrt(a: FieldElement) -> FieldElement:
    """sqrt_in_tower, raising Unresolved with x^2 - a as the adjoinable factor."""
    s = sqrt_in_tower(a)
    if s is None:
        factor = UPoly(a.tower, [-a, 0, 1])
        raise Unresolved(f"no square root of {a} in {a.tower.declaration()}",
                         polynomial=factor, residual=factor, suggestion=factor)
    return s


def quadratic_roots(a: FieldElement, b: FieldElement, c: FieldElement) -> Optional[List[FieldElement]]:
    """Roots of a*x^2 + b*x + c; None when the discriminant has no square root in the tower."""
    if a.is_zero():
        if b.is_zero():
            return []
        return [-c / b]
    disc = b * b - 4 * a * c
    s = sqrt_in_tower(disc)
    if s is None:
        return None
    r1, r2 = (-b + s) / (2 * a), (-b - s) / (2 * a)
    return [r1] if r1 == r2 else [r1, r2]


def _cubic_roots(p: UPoly) -> List[FieldElement]:
    a, b, c = p[2], p[1], p[0]
    shift = a / 3
    # y^3 + P*y + Q with x = y - a/3
    P = b - a * a / 3
    Q = 2 * a * a * a / 27 - a * b / 3 + c
    if P.is_zero():
        ys = binomial_roots(-Q, 3)
    else:
        disc = Q * Q / 4 + P * P * P / 27
        s = sqrt_in_tower(disc)
        if s is None:
            return []
        u3 = -Q / 2 + s
        if u3.is_zero():
            u3 = -Q / 2 - s
        ys = [u - P / (3 * u) for u in binomial_roots(u3, 3) if not u.is_zero()]
    return [y - shift for y in ys]


def _quartic_roots(p: UPoly) -> List[FieldElement]:
    tower = p.tower
    a, b, c, d = p[3], p[2], p[1], p[0]
    shift = a / 4
    # y^4 + P*y^2 + Q*y + R with x = y - a/4
    P = b - 3 * a * a / 8
    Q = a * a * a / 8 - a * b / 2 + c
    R = -3 * a ** 4 / 256 + a * a * b / 16 - a * c / 4 + d
    ys: List[FieldElement] = []
    if Q.is_zero():
        for z in quadratic_roots(tower.one(), P, R) or []:
            s = sqrt_in_tower(z)
            if s is not None:
                ys.extend([s, -s])
        return [y - shift for y in ys]
    resolvent = UPoly(tower, [-Q * Q, 2 * P * P - 8 * R, 8 * P, 8])
    for m in roots_in_tower(resolvent, strict=False):
        if m.is_zero():
            continue
        w = sqrt_in_tower(2 * m)
        if w is None:
            continue
        half = P / 2 + m
        for sign in (1, -1):
            found = quadratic_roots(tower.one(), -sign * w, half + sign * Q / (2 * w))
            ys.extend(found or [])
        if ys:
            break
    return [y - shift for y in ys]


def _radical_roots(p: UPoly) -> List[FieldElement]:
    if p.degree == 1:
        return [-p[0] / p[1]]
    if p.degree == 2:
        return quadratic_roots(p[2], p[1], p[0]) or []
    if p.degree == 3:
        return _cubic_roots(p.monic())
    if p.degree == 4:
        return _quartic_roots(p.monic())
    return []


# =============================================================================
# Adjunction suggestions
# =============================================================================

def adjoinable_factor(residual: UPoly) -> Optional[UPoly]:
    """
    A monic, squarefree factor of degree >= 2 without roots in the tower,
    suitable for adjoining, or None when none can be certified.

    The suggestion need not divide the residual; it only has to bring a root
    of the residual closer (e.g. the quadratic in z = x^2 of a biquadratic).
    """
    suggestion = _suggest(residual.monic())
    if suggestion is None or not _adjoinable(suggestion):
        return None
    return suggestion


def _adjoinable(f: UPoly) -> bool:
    return f.degree >= 2 and f.squarefree_part().degree == f.degree and not roots_in_tower(f, strict=False)


def _suggest(residual: UPoly) -> Optional[UPoly]:
    tower = residual.tower
    if 2 <= residual.degree <= 3:
        return residual
    limit = get_settings().root_of_unity_search
    if residual.is_rational():
        for m in range(3, limit + 1):
            if euler_phi(m) > residual.degree:
                continue
            phi = cyclotomic_minpoly(m).lift(tower)
            if not (residual % phi).is_zero():
                continue
            if tower.depth == 0:
                return phi
            factor = _root_of_unity_factor(tower, m)
            if factor is not None:
                return factor
    binomial = residual.binomial()
    if binomial and _irreducible_binomial(*binomial):
        return residual
    if residual.degree == 4:
        return _quartic_factor(residual)
    return None


def _irreducible_binomial(k: int, c: FieldElement) -> bool:
    # x^k - c is irreducible iff c is not a p-th power for p | k, and not in -4K^4 when 4 | k
    for p in _prime_factors(k):
        power = sqrt_in_tower(c) is not None if p == 2 else bool(binomial_roots(c, p))
        if power:
            return False
    return k % 4 != 0 or not binomial_roots(-c / 4, 4)


def _quartic_factor(residual: UPoly) -> Optional[UPoly]:
    tower = residual.tower
    a, b, c, d = (residual[i] for i in (3, 2, 1, 0))
    shift = a / 4

    def shifted_quadratic(s: FieldElement, t: FieldElement) -> UPoly:
        # y^2 + s*y + t with y = x + a/4
        return UPoly(tower, [shift * shift + s * shift + t, 2 * shift + s, 1])

    # y^4 + P*y^2 + Q*y + R with x = y - a/4
    P = b - 3 * a * a / 8
    Q = a * a * a / 8 - a * b / 2 + c
    R = -3 * a ** 4 / 256 + a * a * b / 16 - a * c / 4 + d
    if Q.is_zero():
        # biquadratic in y: (y^2 - z0)(y^2 - z1) with z0, z1 roots of z^2 + P*z + R
        zs = quadratic_roots(tower.one(), P, R)
        if zs is None:
            return UPoly(tower, [R, P, 1])
        for z in zs:
            if sqrt_in_tower(z) is None:
                return shifted_quadratic(tower.zero(), -z)
        return None
    resolvent = UPoly(tower, [-Q * Q, 2 * P * P - 8 * R, 8 * P, 8])
    ms = roots_in_tower(resolvent, strict=False)
    if not ms:
        return resolvent.monic()
    for m in ms:
        w = sqrt_in_tower(2 * m)
        if w is None:
            continue
        # y^4 + P*y^2 + Q*y + R = (y^2 - w*y + P/2 + m + Q/(2w)) (y^2 + w*y + P/2 + m - Q/(2w))
        return shifted_quadratic(-w, P / 2 + m + Q / (2 * w))
    return UPoly(tower, [-2 * ms[0], 0, 1])


def _root_of_unity_factor(tower: FieldTower, m: int) -> Optional[UPoly]:
    # zeta_L with L = lcm(N, m) is a root of x^k - zeta_N where k = L / N
    zeta, n = tower.root_of_unity
    k = lcm(n, m) // n
    if k == 1:
        return None
    pending = UPoly(tower, [-zeta] + [0] * (k - 1) + [1])
    for r in binomial_roots(zeta, k):
        if pending(r).is_zero():
            pending = pending.deflate(r)
    return pending.monic() if 2 <= pending.degree <= 3 else None


def _prime_factors(n: int) -> List[int]:
    out, p = [], 2
    while p * p <= n:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1
    if n > 1:
        out.append(n)
    return out


# =============================================================================
# Entry point
# =============================================================================

def roots_in_tower(f: UPoly, tower: Optional[FieldTower] = None, strict: bool = True) -> List[FieldElement]:
    """
    Distinct roots of f lying in the tower.

    With strict=True a nonconstant residual raises Unresolved (or DegreeTooHigh
    when no strategy applies above degree 4); with strict=False the roots
    found so far are returned.
    """
    if tower is not None and f.tower != tower:
        f = f.lift(tower)
    tower = f.tower
    if f.is_zero():
        raise ValueError("roots of the zero polynomial are undefined")
    if f.degree < 1:
        return []
    pending = f.squarefree_part().monic()
    roots: List[FieldElement] = []

    def take(found: List[FieldElement]) -> None:
        nonlocal pending
        for r in found:
            if pending.degree < 1 or r in roots:
                continue
            if pending(r).is_zero():
                roots.append(r)
                pending = pending.deflate(r)

    binomial = pending.binomial()
    if binomial and binomial[0] > 1:
        take(binomial_roots(binomial[1], binomial[0]))
    if pending.degree >= 1 and pending.is_rational():
        take(_rational_roots(pending))
    if pending.degree >= 2:
        zeta, n = tower.root_of_unity
        power = tower.one()
        candidates = []
        for _ in range(n):
            candidates.append(power)
            power = power * zeta
        take(candidates)
    while 1 <= pending.degree <= 4:
        before = pending.degree
        take(_radical_roots(pending))
        if pending.degree == before:
            break

    if pending.degree >= 1 and strict:
        suggestion = adjoinable_factor(pending)
        if pending.degree > 4 and suggestion is None:
            raise DegreeTooHigh(f"residual {pending} of degree {pending.degree} exceeds the radical strategies")
        logger.debug(f"Unresolved residual {pending} over {tower.declaration()}")
        raise Unresolved(
            f"roots of {pending} lie outside {tower.declaration()}",
            polynomial=f,
            residual=pending,
            roots=roots,
            suggestion=suggestion,
        )
    return roots
