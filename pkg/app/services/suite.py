"""
Regression fixtures for the worked examples and count theorems.

Each fixture returns a one-line detail string and raises SuiteFailure when an
expectation does not hold. `run_suite` executes them on a thread pool.
"""

import logging
import time
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple

from app.config import get_settings
from app.services.conic import Conic, dual_conic, sg_outer_conics
from app.services.exceptions import SGPointsError
from app.services.geom import ProjLine, ProjPoint, ProjTransform, fiber_family
from app.services.knowledge import knowledge_base, verify_printed_automorphisms
from app.services.parser import FieldSpec, parse_curve, parse_field, parse_point, parse_points
from app.services.poly import HomPoly, proportional
from app.services.sg import (
    CurvePair,
    galois_point_check,
    sg_enumerate,
    sg_enumerate_multi,
    sg_point_check,
    solve_fiber_pairs,
    solve_fiber_transforms,
)

logger = logging.getLogger(__name__)

SuiteResult = Tuple[str, bool, str, float]


class SuiteFailure(AssertionError):
    pass


def expect(condition: bool, message: str) -> None:
    if not condition:
        raise SuiteFailure(message)


def _curve(text: str, spec) -> HomPoly:
    return parse_curve(text, spec).form


def _points(text: str, spec) -> set:
    return set(parse_points(text, spec))


def _lifted(points: Iterable[ProjPoint], tower) -> set:
    return {p.lift(tower) for p in points}


def _same_points(found: Iterable[ProjPoint], expected: Iterable[ProjPoint]) -> bool:
    found, expected = list(found), list(expected)
    if not found or not expected:
        return not found and not expected
    tower = max((p.tower for p in found + expected), key=lambda t: t.depth)
    return _lifted(found, tower) == _lifted(expected, tower)


def _order(T: ProjTransform, limit: int = 64) -> int:
    power = T
    for k in range(1, limit + 1):
        if power.is_identity():
            return k
        power = power @ T
    return 0


def is_cyclic(group: Sequence[ProjTransform]) -> bool:
    return any(_order(g) == len(group) for g in group)


# =============================================================================
# Conics
# =============================================================================

def example_conics_three_points() -> str:
    spec = parse_field("Q")
    c1 = Conic.from_form(_curve("X^2 + Y^2 - Z^2", spec))
    c2 = Conic.from_form(_curve("X^2 + Y^2 - 4*Y*Z + 3*Z^2", spec))
    expect(proportional(dual_conic(c1).form, _curve("X^2 + Y^2 - Z^2", spec)) is not None, "dual of C1")
    expect(proportional(dual_conic(c2).form, _curve("X^2 - 3*Y^2 - 4*Y*Z - Z^2", spec)) is not None, "dual of C2")

    report = sg_outer_conics(c1, c2)
    dual_points = [p for p, _ in report.dual_intersection]
    expect(_same_points(dual_points, _points("(1:0:1); (-1:0:1); (0:-1:1)", spec)), f"dual intersection {dual_points}")
    outer = {sp.point: sp for sp in report.outer}
    expect(_same_points(outer, _points("(0:1:0); (1:1:1); (-1:1:1)", spec)), f"outer {list(outer)}")

    l, l_prime, l_sharp = ProjLine((1, 0, 1)), ProjLine((1, 0, -1)), ProjLine((0, 1, -1))
    expected_tangents = {
        parse_point("(0:1:0)"): {l, l_prime},
        parse_point("(1:1:1)"): {l_prime, l_sharp},
        parse_point("(-1:1:1)"): {l_sharp, l},
    }
    tower = report.tower
    for P, lines in expected_tangents.items():
        found = set(outer[P.lift(tower)].tangents)
        expect(found == {x.lift(tower) for x in lines}, f"tangents at {P}: {found}")
    return "3 outer SG points with tangent certification"


def example_conics_tangent_duals() -> str:
    spec = parse_field("Q")
    c1 = Conic.from_form(_curve("X^2 - 4*Y*Z", spec))
    c2 = Conic.from_form(_curve("X^2 + 4*Y^2 - 4*Y*Z", spec))
    expect(proportional(dual_conic(c1).form, _curve("X^2 - Y*Z", spec)) is not None, "dual of C1")
    expect(proportional(dual_conic(c2).form, _curve("X^2 - Y*Z - Z^2", spec)) is not None, "dual of C2")
    report = sg_outer_conics(c1, c2)
    dual_points = [p for p, _ in report.dual_intersection]
    expect(_same_points(dual_points, _points("(0:1:0)", spec)), f"dual intersection {dual_points}")
    expect(not report.outer, f"outer {[sp.point for sp in report.outer]}")
    return "single dual intersection, no outer SG point"


def example_conics_one_point() -> str:
    spec = parse_field("Q")
    pair = CurvePair.create(_curve("X^2 + Y^2 - Z^2", spec), _curve("Y^2 + 2*(X + Z)*(X + Y)", spec))
    report = sg_enumerate(pair)
    expect(_same_points([sp.point for sp in report.outer], _points("(0:1:0)", spec)), "outer set")
    return "outer = {(0:1:0)}"


def example_conic_family() -> str:
    spec = parse_field("Q")
    conics = [_curve(f"X^2 + 1/{i}*Y^2 - 1/{i + 1}*Z^2", spec) for i in range(1, 5)]
    expected = _points("(0:1:1); (1:0:1); (1:1:0); (0:-1:1); (-1:0:1); (-1:1:0)", spec)
    for n in (2, 3, 4):
        report = sg_enumerate_multi(conics[:n])
        expect(_same_points([sp.point for sp in report.outer], expected), f"n = {n}")
    duals = _points("(1:1:1); (-1:1:1); (1:-1:1); (1:1:-1)", spec)
    for i, j in ((0, 1), (1, 3), (0, 2)):
        report = sg_outer_conics(Conic.from_form(conics[i]), Conic.from_form(conics[j]))
        expect(_same_points([p for p, _ in report.dual_intersection], duals), f"dual intersection {i + 1},{j + 1}")
        expect(_same_points([sp.point for sp in report.outer], expected), f"pair {i + 1},{j + 1}")
    return "6 outer SG points for n = 2, 3, 4 and sampled pairs"


# =============================================================================
# Degree >= 3
# =============================================================================

def fermat_galois_points() -> str:
    spec = parse_field("Q")
    coordinate = _points("(0:0:1); (0:1:0); (1:0:0)", spec)
    probes = list(coordinate) + parse_points("(1:1:1); (1:-1:0); (0:1:1)", spec)
    for d in (3, 4, 5):
        curve = _curve(f"X^{d} + Y^{d} + Z^{d}", spec)
        for P in probes:
            v = galois_point_check(P, curve)
            on_cubic = d == 3 and curve.at(P.coords).is_zero()
            expected = P in coordinate or on_cubic
            expect(v.is_galois == expected, f"d = {d}, {P}: {v.is_galois}")
            if P in coordinate:
                expect(len(v.group) == d and is_cyclic(v.group), f"d = {d}, {P}: group of order {len(v.group)}")
    return "Galois exactly at the coordinate points (and on the cubic), cyclic groups of order d"


def fermat_family_outer() -> str:
    for d in (3, 4):
        for n, decl in ((2, "Q"), (3, "Q(zeta3)")):
            spec = parse_field(decl)
            components = [_curve(f"X^{d} + zeta{n}^{i}*Y^{d} + Z^{d}", spec) for i in range(1, n + 1)]
            report = sg_enumerate_multi(components)
            expect(report.complete is True, f"d = {d}, n = {n}: not complete")
            expect(_same_points([sp.point for sp in report.outer], _points("(0:1:0)", spec)),
                   f"d = {d}, n = {n}: outer {[str(sp.point) for sp in report.outer]}")
    return "outer = {(0:1:0)} for d in {3, 4}, n in {2, 3}"


def quartic_fiber_pairs() -> str:
    spec = parse_field("Q(zeta4)")
    c1 = _curve("X*Y^3 + X^4 + Z^4", spec)
    P1, P2 = parse_point("(0:1:0)", spec), parse_point("(-1:1:0)", spec)

    autos = solve_fiber_transforms(P1, c1, c1)
    expect(len(autos) == 3, f"{len(autos)} automorphisms fixing the lines through (0:1:0)")

    pairs = solve_fiber_pairs(P1, P2, c1)
    expect(len(pairs) == 4, f"{len(pairs)} paired solutions")
    seen = set()
    for fp in pairs:
        m = fp.sigma1.canonical().matrix
        a = m[1][1]
        expect(a ** 4 == 1 and m[1][0] == a - 1, f"sigma1 shape {fp.sigma1}")
        params = fiber_family(P2.lift(fp.sigma2.tower)).parameters(fp.sigma2)
        expect(params is not None, f"sigma2 {fp.sigma2} leaves the fiber family")
        p, q, r = params
        expect(1 - p == a ** 3 and r.is_zero(), f"sigma2 shape {fp.sigma2} for a = {a}")
        expect(fp.commutes, "sigma1 and sigma2 do not commute")
        seen.add(a)
    expect(len(seen) == 4, "a does not run through the 4th roots of unity")
    return "3 automorphisms; 4 commuting pairs with a^4 = 1, c = a^3"


def quartic_inner_pairs() -> str:
    spec = parse_field("Q(zeta4, w)")
    c1 = _curve("X*Y^3 + X^4 + Z^4", spec)
    expected = _points("(0:1:0); (-1:1:0)", spec)
    for j in (1, 2, 3):
        c2 = _curve(f"X*((zeta4^{j} - 1)*X + zeta4^{j}*Y)^3 + X^4 + Z^4", spec)
        report = sg_enumerate(CurvePair.create(c1, c2))
        expect(_same_points([sp.point for sp in report.inner], expected), f"j = {j}: inner")
        expect(not report.outer, f"j = {j}: outer not empty")
        expect(report.flags.get("never_both", False), f"j = {j}: never-both flag")

    fermat = CurvePair.create(c1, _curve("X^4 + Y^4 + Z^4", spec))
    for P in parse_points("(0:1:0); (-1:1:0); (-w:1:0); (-w^2:1:0)", spec):
        expect(not sg_point_check(P, fermat).is_sg, f"control pair SG at {P}")
    return "inner = {(0:1:0), (-1:1:0)} for j = 1, 2, 3; control pair has none"


def quartic_sg_checks() -> str:
    spec = parse_field("Q(zeta4, w)")
    pair = CurvePair.create(
        _curve("X*Y^3 + X^4 + Z^4", spec),
        _curve("X*((zeta4 - 1)*X + zeta4*Y)^3 + X^4 + Z^4", spec),
    )
    at_center = sg_point_check(parse_point("(0:1:0)", spec), pair)
    expect(at_center.is_sg and at_center.kind == "inner", "(0:1:0) not inner SG")
    zeta4 = spec.lookup("zeta4")
    witness = ProjTransform([[1, 0, 0], [zeta4 - 1, zeta4, 0], [0, 0, 1]], spec.tower)
    expect(any(w.transform == witness.lift(w.transform.tower) for w in at_center.witnesses), "witness missing")
    expect(sg_point_check(parse_point("(-1:1:0)", spec), pair).is_sg, "(-1:1:0) not SG")
    expect(not sg_point_check(parse_point("(-w:1:0)", spec), pair).is_sg, "(-w:1:0) SG")
    return "SG at (0:1:0) and (-1:1:0), not at (-w:1:0)"


def quintic_family() -> str:
    spec = parse_field("Q")
    pair = CurvePair.create(_curve("X*Y^4 + X^5 + Z^5", spec), _curve("-X*Y^4 + X^5 + Z^5", spec))
    report = sg_enumerate(pair)
    expect(_same_points([sp.point for sp in report.inner], _points("(0:1:0)", spec)), "inner set")
    expect(not report.outer, "outer not empty")
    expect(not sg_point_check(parse_point("(0:0:1)"), pair).is_sg, "(0:0:1) SG")
    expect(report.flags.get("never_both", False), "never-both flag")
    return "inner = {(0:1:0)}, (0:0:1) not SG"


def printed_automorphisms() -> str:
    checks = verify_printed_automorphisms()
    for c in checks:
        expect(c.preserves, f"{c.name} does not preserve XY^3 + X^4 + Z^4")
        expect(c.permutes_inner, f"{c.name} does not permute the inner Galois points")
    return ", ".join(f"{c.name} scalar {c.scalar}" for c in checks)


def knowledge_entries() -> str:
    for d in (4, 6):
        entries = {e.name: e for e in knowledge_base(d)}
        tower = entries["fermat"].tower
        expect(_same_points(entries["fermat"].outer, _points("(0:0:1); (0:1:0); (1:0:0)", FieldSpec(tower))), f"d = {d} fermat")
        xy = entries["xy"]
        expect(len(xy.inner) == (4 if d == 4 else 1), f"d = {d} inner count {len(xy.inner)}")
        expect(_same_points(xy.outer, _points("(0:0:1)", FieldSpec(xy.tower))), f"d = {d} outer")
    return "Fermat and XY^(d-1) entries for d = 4, 6"


FIXTURES: Dict[str, Callable[[], str]] = {
    "conics-three-points": example_conics_three_points,
    "conics-tangent-duals": example_conics_tangent_duals,
    "conics-one-point": example_conics_one_point,
    "conic-family": example_conic_family,
    "fermat-galois-points": fermat_galois_points,
    "fermat-family-outer": fermat_family_outer,
    "quartic-fiber-pairs": quartic_fiber_pairs,
    "quartic-inner-pairs": quartic_inner_pairs,
    "quartic-sg-checks": quartic_sg_checks,
    "quintic-family": quintic_family,
    "printed-automorphisms": printed_automorphisms,
    "knowledge-entries": knowledge_entries,
}


def _run_one(name: str) -> SuiteResult:
    start = time.perf_counter()
    try:
        detail = FIXTURES[name]()
        passed = True
    except SuiteFailure as exc:
        passed, detail = False, str(exc)
    except SGPointsError as exc:
        passed, detail = False, f"{exc.code.value}: {exc.message}"
    except Exception as exc:
        logger.exception(f"Fixture {name} crashed")
        passed, detail = False, f"{type(exc).__name__}: {exc}"
    elapsed = time.perf_counter() - start
    log = logger.info if passed else logger.warning
    log(f"Fixture {name}: {'PASS' if passed else 'FAIL'} in {elapsed:.2f}s")
    return name, passed, detail, elapsed


def run_suite(names: Optional[Sequence[str]] = None) -> List[SuiteResult]:
    """Run the named fixtures (all by default) concurrently; results keep fixture order."""
    names = list(names or FIXTURES)
    unknown = [n for n in names if n not in FIXTURES]
    if unknown:
        raise KeyError(f"unknown fixtures: {unknown}")
    workers = max(1, get_settings().suite_workers)
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_run_one, names))
