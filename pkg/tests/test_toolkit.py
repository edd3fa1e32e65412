import pytest

from app.schemas.tools import ToolRequest
from app.services.exceptions import (
    CoincidentPoints,
    ExpressionSyntaxError,
    InvalidCurve,
    UnknownTool,
)
from app.services.poly import proportional
from app.services.toolkit import TOOLS_REGISTRY, ToolkitService, cached_field
from helpers import curve

WITNESS = "1, 0, 0; zeta4 - 1, zeta4, 0; 0, 0, 1"
QUARTIC = {
    "field": "Q(zeta4, w)",
    "c1": "X*Y^3 + X^4 + Z^4",
    "c2": "X*((zeta4 - 1)*X + zeta4*Y)^3 + X^4 + Z^4",
}


@pytest.fixture
def service() -> ToolkitService:
    return ToolkitService()


def test_registry_matches_handlers(service):
    assert sorted(TOOLS_REGISTRY) == sorted(service.tools)
    assert all(info.endpoint == f"/v1/tools/{key}" for key, info in TOOLS_REGISTRY.items())


def test_dual(service):
    doc = service.run("dual", ToolRequest(conic="X^2 + Y^2 - 4*Y*Z + 3*Z^2"), "r1")
    assert doc.run_id == "r1" and doc.degree == 2
    assert proportional(curve(doc.form), curve("X^2 - 3*Y^2 - 4*Y*Z - Z^2")) is not None


def test_intersect(service):
    doc = service.run("intersect", ToolRequest(c1="X^2 + Y^2 - Z^2", c2="X^2 - 3*Y^2 - 4*Y*Z - Z^2"))
    assert {item.point.text: item.multiplicity for item in doc.intersection} == {
        "(-1:0:1)": 1, "(1:0:1)": 1, "(0:-1:1)": 2,
    }
    assert doc.field == "Q"


def test_galois_check(service):
    doc = service.run("galois-check", ToolRequest(curve="X^4 + Y^4 + Z^4", point="(0:0:1)"))
    assert doc.verdict is True
    assert len(doc.galois.group) == 4
    no = service.run("galois-check", ToolRequest(curve="X^4 + Y^4 + Z^4", point="(1:1:1)"))
    assert no.verdict is False
    with pytest.raises(InvalidCurve):
        service.run("galois-check", ToolRequest(curve="Y^2*Z - X^3", point="(0:1:0)"))


def test_sg_check_solves_and_verifies(service):
    solved = service.run("sg-check", ToolRequest(point="(0:1:0)", **QUARTIC))
    assert solved.verdict is True and solved.check.kind == "inner"
    verified = service.run("sg-check", ToolRequest(point="(0:1:0)", witness=WITNESS, **QUARTIC))
    assert verified.verdict is True
    assert "not checked" in verified.check.reason
    rejected = service.run("sg-check", ToolRequest(point="(0:1:0)", witness="1,0,0,0,1,0,0,0,1", **QUARTIC))
    assert rejected.verdict is False


def test_sg_enumerate_with_extra_components(service):
    request = ToolRequest(
        c1="X^2 + Y^2 - 1/2*Z^2",
        c2="X^2 + 1/2*Y^2 - 1/3*Z^2",
        components=["X^2 + 1/3*Y^2 - 1/4*Z^2"],
    )
    doc = service.run("sg-enumerate", request)
    assert len(doc.outer) == 6
    assert doc.tool == "sg-enumerate"
    assert doc.verdict is True


def test_fiber_pairs(service):
    doc = service.run("fiber-pairs", ToolRequest(
        field="Q(zeta4)", curve="X*Y^3 + X^4 + Z^4", point="(0:1:0)", point2="(-1:1:0)"))
    assert len(doc.fiber_pairs) == 4
    assert all(fp.commutes for fp in doc.fiber_pairs)
    with pytest.raises(CoincidentPoints):
        service.run("fiber-pairs", ToolRequest(curve="X^4 + Y^4 + Z^4", point="(0:1:0)", point2="(0:2:0)"))


def test_missing_and_unknown_inputs(service):
    with pytest.raises(ExpressionSyntaxError):
        service.run("dual", ToolRequest())
    with pytest.raises(UnknownTool):
        service.run("no-such-tool", ToolRequest())
    with pytest.raises(UnknownTool):
        service.run("paper-suite", ToolRequest(only=["no-such-fixture"]))


def test_suite_subset(service):
    doc = service.run("paper-suite", ToolRequest(only=["conics-three-points", "conics-tangent-duals"]))
    assert [row.name for row in doc.suite] == ["conics-three-points", "conics-tangent-duals"]
    assert doc.verdict is True


def test_field_parses_are_cached():
    assert cached_field("Q(zeta4)") is cached_field("Q(zeta4)")
