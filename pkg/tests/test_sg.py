import pytest

from app.services.exceptions import InvalidCurve, MixedDegrees, NoCandidateSource
from app.services.geom import ProjTransform, fiber_family
from app.services.groups import group_descriptor
from app.services.parser import parse_field, parse_point, parse_points
from app.services.poly import proportional, pullback
from app.services.sg import (
    CurvePair,
    count_flags,
    galois_point_check,
    projection_degree,
    sg_enumerate,
    sg_point_check,
    sg_point_check_multi,
    solve_fiber_pairs,
    solve_fiber_transforms,
    verify_witness,
)
from helpers import curve


def _order(T, limit=32):
    power = T
    for k in range(1, limit + 1):
        if power.is_identity():
            return k
        power = power @ T
    return 0


# =============================================================================
# Fiber transforms
# =============================================================================

def test_quartic_has_three_fiber_automorphisms(zeta4_spec):
    C = curve("X*Y^3 + X^4 + Z^4", zeta4_spec)
    autos = solve_fiber_transforms(parse_point("(0:1:0)", zeta4_spec), C, C)
    assert len(autos) == 3
    group = [w.transform for w in autos]
    assert any(g.is_identity() for g in group)
    assert all(a @ b in group for a in group for b in group)


def test_fourth_root_of_zeta4_is_adjoined_in_one_step(zeta4_spec):
    source = curve("X^4 + zeta4*Y^4 + Z^4", zeta4_spec)
    target = curve("X^4 + Y^4 + Z^4", zeta4_spec)
    found = solve_fiber_transforms(parse_point("(0:1:0)", zeta4_spec), source, target)
    assert len(found) == 4
    tower = found[0].transform.tower
    assert tower.depth == 2
    assert tower.root_of_unity[1] == 16
    for w in found:
        assert proportional(pullback(target.lift(tower), w.transform), source.lift(tower)) is not None


def test_fiber_transforms_reject_mixed_degrees():
    with pytest.raises(MixedDegrees):
        solve_fiber_transforms(parse_point("(0:1:0)"), curve("X^3 + Y^3 + Z^3"), curve("X^4 + Y^4 + Z^4"))
    with pytest.raises(InvalidCurve):
        solve_fiber_transforms(parse_point("(0:1:0)"), curve("X + Y"), curve("X - Y"))


def test_paired_system_gives_four_commuting_pairs(zeta4_spec):
    C = curve("X*Y^3 + X^4 + Z^4", zeta4_spec)
    P1, P2 = parse_point("(0:1:0)", zeta4_spec), parse_point("(-1:1:0)", zeta4_spec)
    pairs = solve_fiber_pairs(P1, P2, C)
    assert len(pairs) == 4
    seen = set()
    for fp in pairs:
        m = fp.sigma1.canonical().matrix
        a = m[1][1]
        assert a ** 4 == 1
        assert m[1][0] == a - 1
        p, _, r = fiber_family(P2.lift(fp.sigma2.tower)).parameters(fp.sigma2)
        assert 1 - p == a ** 3 and r.is_zero()
        assert fp.commutes
        seen.add(a)
    assert len(seen) == 4


# =============================================================================
# Galois points
# =============================================================================

@pytest.mark.parametrize("d", [3, 4, 5])
@pytest.mark.parametrize("text", ["(0:0:1)", "(0:1:0)", "(1:0:0)"])
def test_fermat_coordinate_points_are_galois_with_cyclic_group(d, text):
    v = galois_point_check(parse_point(text), curve(f"X^{d} + Y^{d} + Z^{d}"))
    assert v.is_galois
    assert v.projection_degree == d
    assert len(v.group) == d
    assert any(_order(g) == d for g in v.group)


@pytest.mark.parametrize("d,text,expected", [
    (3, "(1:1:1)", False),
    (3, "(1:-1:0)", True),
    (3, "(0:1:1)", False),
    (4, "(1:1:1)", False),
    (4, "(1:-1:0)", False),
    (5, "(1:-1:0)", False),
    (5, "(0:1:1)", False),
])
def test_fermat_other_points(d, text, expected):
    assert galois_point_check(parse_point(text), curve(f"X^{d} + Y^{d} + Z^{d}")).is_galois is expected


def test_projection_degree_drops_on_the_curve():
    C = curve("X^4 + Y^4 - Z^4")
    assert projection_degree(parse_point("(0:1:1)"), C) == 3
    assert projection_degree(parse_point("(1:1:1)"), C) == 4


def test_conic_points_are_always_galois():
    v = galois_point_check(parse_point("(2:3:1)"), curve("X^2 + Y^2 - Z^2"))
    assert v.is_galois and v.projection_degree == 2 and v.group == []


# =============================================================================
# SG checks
# =============================================================================

def test_quartic_pair_inner_points(quartic_pair, quartic_spec):
    pair = CurvePair.create(*quartic_pair)
    center = sg_point_check(parse_point("(0:1:0)", quartic_spec), pair)
    assert center.is_sg and center.kind == "inner"
    zeta4 = quartic_spec.lookup("zeta4")
    witness = ProjTransform([[1, 0, 0], [zeta4 - 1, zeta4, 0], [0, 0, 1]], quartic_spec.tower)
    assert any(w.transform == witness.lift(w.transform.tower) for w in center.witnesses)
    assert verify_witness(parse_point("(0:1:0)", quartic_spec), pair, witness) is not None
    assert verify_witness(parse_point("(0:1:0)", quartic_spec), pair, ProjTransform.identity(quartic_spec.tower)) is None

    assert sg_point_check(parse_point("(-1:1:0)", quartic_spec), pair).is_sg
    other = sg_point_check(parse_point("(-w:1:0)", quartic_spec), pair)
    assert not other.is_sg and other.reason


def test_point_on_one_component_only():
    pair = CurvePair.create(curve("X^3 + Y^3 + Z^3"), curve("X^3 + 2*Y^3 + Z^3"))
    check = sg_point_check(parse_point("(1:-1:0)"), pair)
    assert check.kind == "neither"
    assert not check.is_sg and check.verdicts == []


def test_sg_check_rejects_mixed_degrees():
    pair = CurvePair.create(curve("X^3 + Y^3 + Z^3"), curve("X^4 + Y^4 + Z^4"))
    with pytest.raises(MixedDegrees):
        sg_point_check(parse_point("(0:1:0)"), pair)


@pytest.mark.parametrize("c1,c2", [
    ("X^3 + Y^3 + Z^3", "2*X^3 + 2*Y^3 + 2*Z^3"),
    ("X^3 + Y^3 + Z^3", "Y^2*Z - X^3"),
    ("X", "Y"),
])
def test_curve_pair_validation(c1, c2):
    with pytest.raises(InvalidCurve):
        CurvePair.create(curve(c1), curve(c2))


def test_multi_component_check_with_pairwise_results():
    spec = parse_field("Q(zeta3)")
    components = [curve(f"X^3 + zeta3^{i}*Y^3 + Z^3", spec) for i in (1, 2, 3)]
    check = sg_point_check_multi(parse_point("(0:1:0)", spec), components, pairwise=True)
    assert check.is_sg and check.kind == "outer"
    assert {w.direction for w in check.witnesses} == {(2, 1), (3, 1)}
    assert check.pairwise == {(1, 2): True, (1, 3): True, (2, 3): True}
    with pytest.raises(InvalidCurve):
        sg_point_check_multi(parse_point("(0:1:0)"), components[:1])


# =============================================================================
# Enumeration
# =============================================================================

def test_quintic_family_has_one_inner_point():
    pair = CurvePair.create(curve("X*Y^4 + X^5 + Z^5"), curve("-X*Y^4 + X^5 + Z^5"))
    report = sg_enumerate(pair)
    assert [sp.point for sp in report.inner] == [parse_point("(0:1:0)").lift(report.tower)]
    assert report.outer == []
    assert report.complete is True
    assert report.candidate_source == "knowledge-base"
    assert report.flags["never_both"] and report.flags["inner_at_most_one"]
    assert report.inner[0].group.descriptors == ("Z/4 x Z/2", "Z/8")


def test_enumeration_with_user_candidates():
    pair = CurvePair.create(curve("X*Y^4 + X^5 + Z^5"), curve("-X*Y^4 + X^5 + Z^5"))
    report = sg_enumerate(pair, candidates=parse_points("(1:0:0); (0:0:1)"))
    assert report.candidate_source == "knowledge-base+user"
    checked = {c.point: c for c in report.checks}
    assert not checked[parse_point("(1:0:0)").lift(report.tower)].is_sg


def test_enumeration_needs_a_candidate_source():
    pair = CurvePair.create(curve("X^4 + 2*Y^4 + Z^4 + X^2*Y*Z"), curve("X^4 + Y^4 + 3*Z^4 + X*Y^2*Z"), check=False)
    with pytest.raises(NoCandidateSource):
        sg_enumerate(pair)


def test_conic_pairs_are_enumerated_from_the_dual(conic_pair_three_points):
    report = sg_enumerate(CurvePair.create(*conic_pair_three_points), candidates=parse_points("(5:0:1)"))
    assert len(report.outer) == 3
    assert any("ignored" in note for note in report.notes)


@pytest.mark.parametrize("d,inner,outer,expected", [
    (4, 2, 0, {"outer_at_most_one": True, "inner_at_most_two": True, "never_both": True}),
    (4, 1, 1, {"outer_at_most_one": True, "inner_at_most_two": True, "never_both": False}),
    (5, 2, 0, {"outer_at_most_one": True, "inner_at_most_one": False, "never_both": True}),
    (3, 0, 2, {"outer_at_most_one": False}),
])
def test_count_flags(d, inner, outer, expected):
    assert count_flags(d, inner, outer) == expected


def test_count_flags_skip_unenumerated_inner_points():
    assert "inner_at_most_two" not in count_flags(4, 0, 1, inner_enumerated=False)


@pytest.mark.parametrize("h,n,expected", [
    (3, 1, ("Z/3",)),
    (1, 3, ("Z/3",)),
    (4, 2, ("Z/4 x Z/2", "Z/8")),
    (2, 2, ("Z/2 x Z/2", "Z/4")),
])
def test_group_descriptors(h, n, expected):
    assert group_descriptor(h, n).descriptors == expected


def test_non_cyclic_group_has_only_the_product():
    assert group_descriptor(4, 2, cyclic=False).descriptors == ("Z/4 x Z/2",)
