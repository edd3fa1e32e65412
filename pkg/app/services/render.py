"""
Conversion of computed results into ReportDocument and plain-text output.
"""

from typing import Iterable, List, Optional, Sequence, Tuple

from app.schemas.report import (
    CheckDoc,
    FiberPairDoc,
    GroupDoc,
    IntersectionDoc,
    PointDoc,
    ReportDocument,
    SGPointDoc,
    SuiteRowDoc,
    TransformDoc,
    VerdictDoc,
    WitnessDoc,
)
from app.services.geom import ProjPoint, ProjTransform
from app.services.models import GaloisVerdict, GroupDescriptor, SGCheck, SGPoint, SGReport, SGWitness


def point_doc(p: ProjPoint) -> PointDoc:
    return PointDoc(text=str(p), coords=[str(c) for c in p.coords])


def transform_doc(T: ProjTransform) -> TransformDoc:
    return TransformDoc(rows=T.rows())


def witness_doc(w: SGWitness) -> WitnessDoc:
    return WitnessDoc(
        point=point_doc(w.point),
        transform=transform_doc(w.transform),
        scalar=str(w.scalar),
        direction=list(w.direction),
    )


def group_doc(g: Optional[GroupDescriptor]) -> Optional[GroupDoc]:
    if g is None:
        return None
    return GroupDoc(h_order=g.h_order, components=g.components, descriptors=list(g.descriptors), recipe=g.recipe)


def sg_point_doc(sp: SGPoint) -> SGPointDoc:
    return SGPointDoc(
        point=point_doc(sp.point),
        kind=sp.kind,
        witnesses=[witness_doc(w) for w in sp.witnesses],
        group=group_doc(sp.group),
        tangents=[str(l) for l in sp.tangents],
    )


def verdict_doc(v: GaloisVerdict) -> VerdictDoc:
    return VerdictDoc(
        point=point_doc(v.point),
        component=v.component,
        is_galois=v.is_galois,
        projection_degree=v.projection_degree,
        group=[transform_doc(g) for g in v.group],
    )


def check_doc(c: SGCheck) -> CheckDoc:
    return CheckDoc(
        point=point_doc(c.point),
        is_sg=c.is_sg,
        kind=c.kind,
        verdicts=[verdict_doc(v) for v in c.verdicts],
        witnesses=[witness_doc(w) for w in c.witnesses],
        reason=c.reason,
        pairwise={f"{i}-{j}": ok for (i, j), ok in sorted(c.pairwise.items())},
    )


def intersection_docs(points: Iterable[Tuple[ProjPoint, int]]) -> List[IntersectionDoc]:
    ordered = sorted(points, key=lambda pm: pm[0].sort_key())
    return [IntersectionDoc(point=point_doc(p), multiplicity=m) for p, m in ordered]


def fiber_pair_doc(fp) -> FiberPairDoc:
    return FiberPairDoc(
        sigma1=transform_doc(fp.sigma1),
        sigma2=transform_doc(fp.sigma2),
        scalar=str(fp.scalar),
        commutes=fp.commutes,
    )


def report_document(report: SGReport, tool: str, run_id: str = "") -> ReportDocument:
    """Points in every list follow the canonical coordinate order."""
    by_point = lambda sp: sp.point.sort_key()
    inner = sorted(report.inner, key=by_point)
    outer = sorted(report.outer, key=by_point)
    return ReportDocument(
        tool=tool,
        run_id=run_id,
        field=report.tower.declaration(),
        verdict=bool(report.inner or report.outer),
        degree=report.degree,
        components=[str(c) for c in report.components],
        inner=[sg_point_doc(sp) for sp in inner],
        outer=[sg_point_doc(sp) for sp in outer],
        trivial_inner=[point_doc(p) for p in sorted(report.trivial_inner, key=lambda p: p.sort_key())],
        checks=[check_doc(c) for c in sorted(report.checks, key=lambda c: c.point.sort_key())],
        dual_intersection=intersection_docs(report.dual_intersection),
        candidate_source=report.candidate_source,
        complete=report.complete,
        inner_enumerated=report.inner_enumerated,
        flags=dict(report.flags),
        notes=list(report.notes),
    )


def suite_rows(results: Sequence[Tuple[str, bool, str, float]]) -> List[SuiteRowDoc]:
    return [SuiteRowDoc(name=n, passed=ok, detail=d, seconds=round(s, 3)) for n, ok, d, s in results]


# =============================================================================
# Plain text
# =============================================================================

def _matrix_text(t: TransformDoc) -> str:
    return "[" + ", ".join("[" + ", ".join(row) + "]" for row in t.rows) + "]"


def _sg_lines(label: str, points: List[SGPointDoc]) -> List[str]:
    lines = [f"{label} SG points: {len(points)}"]
    for sp in points:
        lines.append(f"  {sp.point.text}")
        if sp.group:
            lines.append(f"    group: {' or '.join(sp.group.descriptors)}")
        for l in sp.tangents:
            lines.append(f"    tangent: {l}")
        for w in sp.witnesses[:1]:
            lines.append(f"    witness: {_matrix_text(w.transform)}")
    return lines


def render_text(doc: ReportDocument) -> str:
    """Human-readable summary of a document."""
    lines = [f"field: {doc.field}"]
    for i, c in enumerate(doc.components, start=1):
        lines.append(f"C{i}: {c} = 0")
    if doc.form is not None:
        lines.append(f"dual: {doc.form} = 0")
    for item in doc.intersection:
        lines.append(f"{item.point.text}  multiplicity {item.multiplicity}")
    if doc.galois is not None:
        g = doc.galois
        lines.append(f"{g.point.text}: {'Galois' if g.is_galois else 'not Galois'} "
                     f"(projection degree {g.projection_degree}, {len(g.group)} fiber automorphisms)")
        for t in g.group:
            lines.append(f"  {_matrix_text(t)}")
    if doc.check is not None:
        c = doc.check
        lines.append(f"{c.point.text}: {'SG' if c.is_sg else 'not SG'} ({c.kind})" + (f" - {c.reason}" if c.reason else ""))
        for w in c.witnesses:
            lines.append(f"  witness {_matrix_text(w.transform)} scalar {w.scalar}")
    if doc.dual_intersection:
        lines.append("dual intersection: " + ", ".join(
            f"{d.point.text}" + (f" x{d.multiplicity}" if d.multiplicity > 1 else "") for d in doc.dual_intersection
        ))
    if doc.tool in ("sg-enumerate", "sg-outer-conics"):
        lines.extend(_sg_lines("inner", doc.inner))
        lines.extend(_sg_lines("outer", doc.outer))
        if doc.trivial_inner:
            lines.append("trivial inner points (degree-1 projections): " + ", ".join(p.text for p in doc.trivial_inner))
        lines.append(f"candidates: {doc.candidate_source} ({'complete' if doc.complete else 'not known to be complete'})")
    for name, ok in doc.flags.items():
        lines.append(f"flag {name}: {'ok' if ok else 'VIOLATED'}")
    for p in doc.fiber_pairs:
        lines.append(f"sigma1 {_matrix_text(p.sigma1)}  sigma2 {_matrix_text(p.sigma2)}  commute: {p.commutes}")
    if doc.suite:
        width = max(len(r.name) for r in doc.suite)
        for r in doc.suite:
            lines.append(f"{'PASS' if r.passed else 'FAIL'}  {r.name.ljust(width)}  {r.seconds:6.2f}s  {r.detail}")
        passed = sum(r.passed for r in doc.suite)
        lines.append(f"{passed}/{len(doc.suite)} passed")
    for note in doc.notes:
        lines.append(f"note: {note}")
    return "\n".join(lines)
