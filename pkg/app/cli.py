"""
Command-line entry point.

    sgpoints [--json] [--field DECL] [--in PATH] <tool> [tool options]

Exit status: 0 success or true verdict, 1 false verdict or failed suite,
2 input error, 3 unresolved in the tower, 4 internal error.
"""

import argparse
import json
import logging
import sys
import uuid
from typing import Dict, List, Optional, Sequence

from pydantic import ValidationError

from app.config import get_settings
from app.schemas.errors import ErrorCode, ErrorResponse
from app.schemas.report import ReportDocument
from app.schemas.tools import ToolRequest
from app.services.exceptions import SGPointsError
from app.services.parser import read_input_file
from app.services.render import render_text
from app.services.toolkit import VERDICT_TOOLS, ToolkitService

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FALSE = 1
EXIT_INPUT = 2
EXIT_UNRESOLVED = 3
EXIT_INTERNAL = 4

_UNRESOLVED_CODES = {ErrorCode.UNRESOLVED, ErrorCode.DEGREE_TOO_HIGH}

# request fields a --in file may set
_FILE_KEYS = {"field", "conic", "curve", "c1", "c2", "point", "point2", "witness", "candidates", "normalizer"}


def exit_code_for(exc: SGPointsError) -> int:
    if exc.code in _UNRESOLVED_CODES:
        return EXIT_UNRESOLVED
    if exc.code == ErrorCode.INTERNAL_ERROR:
        return EXIT_INTERNAL
    return EXIT_INPUT


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="sgpoints", description="Galois and SG points of plane curves")
    parser.add_argument("--json", action="store_true", help="emit the ReportDocument as JSON")
    parser.add_argument("--field", default=None, help='field declaration, e.g. "Q(zeta4, sqrt3)"')
    parser.add_argument("--in", dest="input_file", default=None, help="read key: value inputs from a file")
    parser.add_argument("--log-level", default=None, help="overrides SGPOINTS_LOG_LEVEL")
    sub = parser.add_subparsers(dest="tool", required=True)

    p = sub.add_parser("dual", help="dual conic")
    p.add_argument("--conic")

    for name, help_text in (
        ("intersect", "intersection of two conics"),
        ("sg-outer-conics", "outer SG points of two conics"),
    ):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--c1")
        p.add_argument("--c2")

    p = sub.add_parser("galois-check", help="is a point Galois for a curve")
    p.add_argument("--curve")
    p.add_argument("--point")

    p = sub.add_parser("sg-check", help="is a point SG for two components")
    p.add_argument("--c1")
    p.add_argument("--c2")
    p.add_argument("--point")
    p.add_argument("--witness", help="nine matrix entries; verifies instead of solving")

    p = sub.add_parser("sg-enumerate", help="enumerate SG points")
    p.add_argument("--c1")
    p.add_argument("--c2")
    p.add_argument("--component", action="append", default=[], help="further components")
    p.add_argument("--candidates", help="points separated by ';'")
    p.add_argument("--normalizer", help="nine entries of a transform onto a known normal form")

    p = sub.add_parser("fiber-pairs", help="paired fiber transforms at two centers")
    p.add_argument("--curve")
    p.add_argument("--point")
    p.add_argument("--point2")

    p = sub.add_parser("paper-suite", help="run the worked-example fixtures")
    p.add_argument("--only", action="append", default=[], help="fixture name, repeatable")

    sub.add_parser("schema", help="print the ReportDocument JSON schema")
    return parser


def build_request(args: argparse.Namespace) -> ToolRequest:
    """Merge --in file values with flags; flags win."""
    values: Dict[str, object] = {}
    if args.input_file:
        for key, value in read_input_file(args.input_file).items():
            if key in _FILE_KEYS:
                values[key] = value
            elif key == "components":
                values[key] = [c.strip() for c in value.split(";") if c.strip()]
            elif key == "only":
                values[key] = [n.strip() for n in value.split(",") if n.strip()]
            else:
                logger.warning(f"Ignoring unknown input key '{key}' in {args.input_file}")
    if args.field:
        values["field"] = args.field
    for key in _FILE_KEYS - {"field"}:
        flag = getattr(args, key, None)
        if flag:
            values[key] = flag
    if getattr(args, "component", None):
        values["components"] = list(values.get("components", [])) + args.component
    if getattr(args, "only", None):
        values["only"] = args.only
    return ToolRequest(**values)


def _configure_logging(level: Optional[str]) -> None:
    logging.basicConfig(
        level=(level or get_settings().log_level).upper(),
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        stream=sys.stderr,
    )


def _emit_error(args: argparse.Namespace, run_id: str, error: ErrorResponse) -> None:
    if args.json:
        print(json.dumps(error.model_dump(), ensure_ascii=False, indent=2))
    else:
        print(f"error [{error.error_code}] {error.message} (run {run_id})", file=sys.stderr)


def _emit(args: argparse.Namespace, doc: ReportDocument) -> None:
    if args.json:
        print(doc.model_dump_json(indent=2))
    else:
        print(render_text(doc))


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    _configure_logging(args.log_level)

    if args.tool == "schema":
        print(json.dumps(ReportDocument.model_json_schema(), indent=2))
        return EXIT_OK

    run_id = uuid.uuid4().hex[:8]
    try:
        request = build_request(args)
        doc = ToolkitService().run(args.tool, request, run_id)
    except SGPointsError as exc:
        code = exit_code_for(exc)
        log = logger.error if code == EXIT_INTERNAL else logger.warning
        log(f"[{run_id}] {args.tool} failed: {exc.code.value}: {exc.message}")
        _emit_error(args, run_id, ErrorResponse(
            error_code=exc.code,
            message=exc.message,
            request_id=run_id,
            retryable=exc.retryable,
            details=exc.details or None,
        ))
        return code
    except (ValidationError, OSError) as exc:
        _emit_error(args, run_id, ErrorResponse(
            error_code=ErrorCode.SYNTAX_ERROR, message=str(exc), request_id=run_id, retryable=False,
        ))
        return EXIT_INPUT
    except Exception as exc:
        logger.exception(f"[{run_id}] Unexpected error: {exc}")
        _emit_error(args, run_id, ErrorResponse(
            error_code=ErrorCode.INTERNAL_ERROR, message=str(exc), request_id=run_id, retryable=False,
        ))
        return EXIT_INTERNAL

    _emit(args, doc)
    if args.tool in VERDICT_TOOLS and doc.verdict is False:
        return EXIT_FALSE
    return EXIT_OK


def run() -> None:
    sys.exit(main())


if __name__ == "__main__":
    run()
