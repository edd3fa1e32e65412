import pytest

from app.services import suite
from app.services.geom import ProjTransform
from app.services.suite import FIXTURES, SuiteFailure, expect, is_cyclic, run_suite


@pytest.mark.parametrize("name", sorted(FIXTURES))
def test_fixture_passes(name):
    detail = FIXTURES[name]()
    assert isinstance(detail, str) and detail


def test_run_suite_keeps_order_and_reports_failures(monkeypatch):
    def broken():
        expect(False, "deliberately broken")

    monkeypatch.setitem(FIXTURES, "broken", broken)
    results = run_suite(["conics-tangent-duals", "broken", "conics-one-point"])
    assert [name for name, *_ in results] == ["conics-tangent-duals", "broken", "conics-one-point"]
    assert [ok for _, ok, _, _ in results] == [True, False, True]
    assert results[1][2] == "deliberately broken"


def test_crashing_fixture_is_reported(monkeypatch):
    monkeypatch.setitem(FIXTURES, "crash", lambda: 1 / 0)
    ((name, ok, detail, _),) = run_suite(["crash"])
    assert not ok and detail.startswith("ZeroDivisionError")


def test_unknown_fixture():
    with pytest.raises(KeyError):
        run_suite(["no-such-fixture"])


def test_expect_and_cyclic_helpers():
    with pytest.raises(SuiteFailure):
        expect(False, "nope")
    rotation = ProjTransform([[0, 1, 0], [0, 0, 1], [1, 0, 0]])
    assert is_cyclic([ProjTransform.identity(), rotation, rotation @ rotation])
    swap = ProjTransform([[0, 1, 0], [1, 0, 0], [0, 0, 1]])
    flip = ProjTransform([[1, 0, 0], [0, 1, 0], [0, 0, -1]])
    assert not is_cyclic([ProjTransform.identity(), swap, flip, swap @ flip])
    assert suite._order(rotation) == 3
