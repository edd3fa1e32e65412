import json

import pytest

from app.cli import (
    EXIT_FALSE,
    EXIT_INPUT,
    EXIT_INTERNAL,
    EXIT_OK,
    EXIT_UNRESOLVED,
    build_parser,
    build_request,
    exit_code_for,
    main,
)
from app.services.exceptions import (
    DegreeTooHigh,
    InternalConsistencyError,
    InvalidCurve,
    Unresolved,
)
from app.services.poly import proportional
from helpers import curve


def test_dual_as_json(capsys):
    assert main(["--json", "dual", "--conic", "X^2 - 4*Y*Z"]) == EXIT_OK
    doc = json.loads(capsys.readouterr().out)
    assert doc["tool"] == "dual"
    assert len(doc["run_id"]) == 8
    assert proportional(curve(doc["form"]), curve("X^2 - Y*Z")) is not None


def test_text_output(capsys):
    assert main(["sg-outer-conics", "--c1", "X^2 + Y^2 - Z^2", "--c2", "X^2 + Y^2 - 4*Y*Z + 3*Z^2"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "outer SG points: 3" in out


def test_false_verdict_exits_one(capsys):
    code = main(["galois-check", "--curve", "X^4 + Y^4 + Z^4", "--point", "(1:1:1)"])
    assert code == EXIT_FALSE
    assert "not Galois" in capsys.readouterr().out


def test_input_errors_exit_two(capsys):
    assert main(["dual", "--conic", "X^2 + * Y"]) == EXIT_INPUT
    err = capsys.readouterr().err
    assert "error [SYNTAX_ERROR]" in err


def test_json_errors_go_to_stdout(capsys):
    assert main(["--json", "--field", "Q(zeta2)", "dual", "--conic", "X^2 - Y*Z"]) == EXIT_INPUT
    error = json.loads(capsys.readouterr().out)
    assert error["error_code"] == "SYNTAX_ERROR"
    assert error["retryable"] is False


def test_schema_command(capsys):
    assert main(["schema"]) == EXIT_OK
    schema = json.loads(capsys.readouterr().out)
    assert schema["title"] == "ReportDocument"


def test_input_file_with_flag_override(tmp_path, capsys):
    path = tmp_path / "in.txt"
    path.write_text("field: Q\ncurve: X^4 + Y^4 + Z^4\npoint: (1:1:1)\ncolour: blue\n")
    assert main(["--in", str(path), "galois-check", "--point", "(0:0:1)"]) == EXIT_OK
    assert "(0:0:1): Galois" in capsys.readouterr().out


def test_missing_input_file_is_an_input_error(tmp_path):
    assert main(["--in", str(tmp_path / "missing.txt"), "dual"]) == EXIT_INPUT


def test_build_request_splits_lists(tmp_path):
    path = tmp_path / "in.txt"
    path.write_text("components: X^2 - Z^2 + Y^2; X^2 + 2*Y^2 - Z^2\nonly: conic-family, quintic-family\n")
    args = build_parser().parse_args(["--in", str(path), "sg-enumerate", "--component", "X^2 + 3*Y^2 - Z^2"])
    request = build_request(args)
    assert request.components == ["X^2 - Z^2 + Y^2", "X^2 + 2*Y^2 - Z^2", "X^2 + 3*Y^2 - Z^2"]
    assert request.only == ["conic-family", "quintic-family"]


@pytest.mark.parametrize("exc,code", [
    (Unresolved("needs sqrt2"), EXIT_UNRESOLVED),
    (DegreeTooHigh("degree 5"), EXIT_UNRESOLVED),
    (InvalidCurve("singular"), EXIT_INPUT),
    (InternalConsistencyError("broken"), EXIT_INTERNAL),
])
def test_exit_codes(exc, code):
    assert exit_code_for(exc) == code


def test_unknown_subcommand_is_rejected():
    with pytest.raises(SystemExit) as info:
        main(["no-such-tool"])
    assert info.value.code == 2
