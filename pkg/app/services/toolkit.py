"""
Toolkit service - turns a ToolRequest into a ReportDocument.

Shared by the CLI and the HTTP router; every tool parses its inputs in the
requested field, runs one analysis and renders the result.
"""

import logging
from typing import Callable, Dict, List

from cachetools import LRUCache, cached

from app.schemas.report import ReportDocument
from app.schemas.tools import ToolInfo, ToolRequest
from app.services.conic import Conic, dual_conic, intersect_conics, sg_outer_conics
from app.services.exceptions import CoincidentPoints, ExpressionSyntaxError, InvalidCurve, UnknownTool
from app.services.models import SGCheck
from app.services.parser import FieldSpec, parse_curve, parse_field, parse_matrix, parse_point, parse_points
from app.services.poly import HomPoly, is_nonsingular
from app.services.render import (
    check_doc,
    fiber_pair_doc,
    intersection_docs,
    report_document,
    suite_rows,
    verdict_doc,
)
from app.services.sg import (
    CurvePair,
    classify_point,
    galois_point_check,
    projection_degree,
    sg_enumerate,
    sg_enumerate_multi,
    sg_point_check,
    solve_fiber_pairs,
    verify_witness,
)
from app.services.suite import FIXTURES, run_suite

logger = logging.getLogger(__name__)

# Tool registry
TOOLS_REGISTRY: Dict[str, ToolInfo] = {
    info.tool_key: info
    for info in (
        ToolInfo(tool_key="dual", name="Dual conic", description="Dual conic via the adjugate matrix",
                 inputs=["field", "conic"], endpoint="/v1/tools/dual"),
        ToolInfo(tool_key="intersect", name="Conic intersection",
                 description="Intersection points of two conics with multiplicities",
                 inputs=["field", "c1", "c2"], endpoint="/v1/tools/intersect"),
        ToolInfo(tool_key="sg-outer-conics", name="Outer SG points of conics",
                 description="Complete outer SG enumeration for two conics",
                 inputs=["field", "c1", "c2"], endpoint="/v1/tools/sg-outer-conics"),
        ToolInfo(tool_key="galois-check", name="Galois point check",
                 description="Whether a point is Galois for a nonsingular curve, with its group",
                 inputs=["field", "curve", "point"], endpoint="/v1/tools/galois-check"),
        ToolInfo(tool_key="sg-check", name="SG point check",
                 description="Whether a point is SG for two components; verifies a given witness without solving",
                 inputs=["field", "c1", "c2", "point", "witness"], endpoint="/v1/tools/sg-check"),
        ToolInfo(tool_key="sg-enumerate", name="SG enumeration",
                 description="SG points from known normal forms or a candidate list",
                 inputs=["field", "c1", "c2", "components", "candidates", "normalizer"],
                 endpoint="/v1/tools/sg-enumerate"),
        ToolInfo(tool_key="fiber-pairs", name="Paired fiber transforms",
                 description="Transform pairs centered at two points that pull a curve back to proportional forms",
                 inputs=["field", "curve", "point", "point2"], endpoint="/v1/tools/fiber-pairs"),
        ToolInfo(tool_key="paper-suite", name="Regression suite",
                 description="Runs every worked-example fixture", inputs=["only"],
                 endpoint="/v1/tools/paper-suite"),
    )
}

# tools whose verdict decides the CLI exit status
VERDICT_TOOLS = {"galois-check", "sg-check", "paper-suite"}


@cached(LRUCache(maxsize=64))
def cached_field(declaration: str) -> FieldSpec:
    return parse_field(declaration)


def _require(request: ToolRequest, name: str) -> str:
    value = getattr(request, name)
    if not value:
        raise ExpressionSyntaxError(f"missing input '{name}'", 0, "")
    return value


class ToolkitService:
    """Runs one tool per call; stateless apart from the field cache."""

    def __init__(self):
        self._handlers: Dict[str, Callable[[ToolRequest, ReportDocument], ReportDocument]] = {
            "dual": self._dual,
            "intersect": self._intersect,
            "sg-outer-conics": self._sg_outer_conics,
            "galois-check": self._galois_check,
            "sg-check": self._sg_check,
            "sg-enumerate": self._sg_enumerate,
            "fiber-pairs": self._fiber_pairs,
            "paper-suite": self._paper_suite,
        }

    @property
    def tools(self) -> List[str]:
        return list(self._handlers)

    def run(self, tool: str, request: ToolRequest, run_id: str = "") -> ReportDocument:
        """
        Run `tool` on `request`.

        Raises SGPointsError subclasses for every failure, UnknownTool for
        names missing from the registry.
        """
        if tool not in self._handlers:
            raise UnknownTool(f"unknown tool '{tool}'", {"tool": tool})
        logger.info(f"[{run_id}] Running {tool} over {request.field}")
        doc = ReportDocument(tool=tool, run_id=run_id, field=request.field)
        doc = self._handlers[tool](request, doc)
        doc.run_id = run_id
        logger.info(f"[{run_id}] {tool} finished" + (f": verdict {doc.verdict}" if doc.verdict is not None else ""))
        return doc

    # ------------------------------------------------------------------
    # inputs
    # ------------------------------------------------------------------

    def _spec(self, request: ToolRequest) -> FieldSpec:
        return cached_field(request.field.strip() or "Q")

    def _curve(self, request: ToolRequest, name: str) -> HomPoly:
        return parse_curve(_require(request, name), self._spec(request)).form

    def _conics(self, request: ToolRequest):
        return Conic.from_form(self._curve(request, "c1")), Conic.from_form(self._curve(request, "c2"))

    # ------------------------------------------------------------------
    # tools
    # ------------------------------------------------------------------

    def _dual(self, request: ToolRequest, doc: ReportDocument) -> ReportDocument:
        conic = Conic.from_form(self._curve(request, "conic"))
        dual = dual_conic(conic)
        doc.components = [str(conic.form)]
        doc.form = str(dual.form)
        doc.degree = 2
        return doc

    def _intersect(self, request: ToolRequest, doc: ReportDocument) -> ReportDocument:
        c1, c2 = self._conics(request)
        points = intersect_conics(c1, c2)
        doc.field = points[0][0].tower.declaration()
        doc.components = [str(c1.form), str(c2.form)]
        doc.intersection = intersection_docs(points)
        doc.degree = 2
        return doc

    def _sg_outer_conics(self, request: ToolRequest, doc: ReportDocument) -> ReportDocument:
        c1, c2 = self._conics(request)
        return report_document(sg_outer_conics(c1, c2), "sg-outer-conics")

    def _galois_check(self, request: ToolRequest, doc: ReportDocument) -> ReportDocument:
        curve = self._curve(request, "curve")
        if curve.degree < 2 or not is_nonsingular(curve):
            raise InvalidCurve(f"galois-check needs a nonsingular curve of degree >= 2, got {curve}")
        point = parse_point(_require(request, "point"), self._spec(request))
        verdict = galois_point_check(point, curve)
        doc.field = verdict.point.tower.declaration()
        doc.components = [str(curve)]
        doc.degree = curve.degree
        doc.galois = verdict_doc(verdict)
        doc.verdict = verdict.is_galois
        return doc

    def _sg_check(self, request: ToolRequest, doc: ReportDocument) -> ReportDocument:
        spec = self._spec(request)
        pair = CurvePair.create(self._curve(request, "c1"), self._curve(request, "c2"))
        point = parse_point(_require(request, "point"), spec)
        if request.witness:
            check = self._verify(point, pair, request.witness, spec)
        else:
            check = sg_point_check(point, pair)
        doc.field = check.point.tower.declaration()
        doc.components = [str(c) for c in pair.components]
        doc.degree = pair.c1.degree
        doc.check = check_doc(check)
        doc.verdict = check.is_sg
        return doc

    @staticmethod
    def _verify(point, pair: CurvePair, witness: str, spec: FieldSpec) -> SGCheck:
        T = parse_matrix(witness, spec)
        w = verify_witness(point, pair, T)
        kind = classify_point(point.lift(pair.tower), pair.components)
        degrees = {projection_degree(point, c) for c in pair.components}
        if w is None:
            return SGCheck(point, False, kind, reason="the witness does not preserve the fibers or map c1 onto c2")
        reason = "witness verified; Galois conditions not checked"
        if len(degrees) > 1:
            return SGCheck(point, False, kind, witnesses=[w], reason="projection degrees differ between components")
        return SGCheck(w.point, True, kind, witnesses=[w], reason=reason)

    def _sg_enumerate(self, request: ToolRequest, doc: ReportDocument) -> ReportDocument:
        spec = self._spec(request)
        components = [self._curve(request, "c1"), self._curve(request, "c2")]
        components += [parse_curve(text, spec).form for text in request.components]
        candidates = parse_points(request.candidates, spec) if request.candidates else None
        normalizer = parse_matrix(request.normalizer, spec) if request.normalizer else None
        if len(components) == 2:
            report = sg_enumerate(CurvePair.create(*components), candidates, normalizer)
        else:
            for c in components:
                if not is_nonsingular(c):
                    raise InvalidCurve(f"component is singular: {c}")
            report = sg_enumerate_multi(components, candidates, normalizer)
        return report_document(report, "sg-enumerate")

    def _fiber_pairs(self, request: ToolRequest, doc: ReportDocument) -> ReportDocument:
        spec = self._spec(request)
        curve = self._curve(request, "curve")
        p1 = parse_point(_require(request, "point"), spec)
        p2 = parse_point(_require(request, "point2"), spec)
        if p1 == p2:
            raise CoincidentPoints(f"the two centers coincide: {p1}")
        pairs = solve_fiber_pairs(p1, p2, curve)
        if pairs:
            doc.field = pairs[0].sigma1.tower.declaration()
        doc.components = [str(curve)]
        doc.degree = curve.degree
        doc.fiber_pairs = [fiber_pair_doc(fp) for fp in pairs]
        doc.verdict = bool(pairs)
        return doc

    def _paper_suite(self, request: ToolRequest, doc: ReportDocument) -> ReportDocument:
        unknown = [name for name in request.only if name not in FIXTURES]
        if unknown:
            raise UnknownTool(f"unknown fixtures: {', '.join(unknown)}", {"fixtures": unknown})
        results = run_suite(request.only or None)
        doc.suite = suite_rows(results)
        doc.verdict = all(ok for _, ok, _, _ in results)
        return doc
