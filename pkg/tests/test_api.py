import pytest
from fastapi.testclient import TestClient

import app.main as main_module
from app.main import app, status_for
from app.routers import tools as tools_router
from app.services.exceptions import DegreeTooHigh, InternalConsistencyError, InvalidCurve, Unresolved


@pytest.fixture
def client() -> TestClient:
    return TestClient(app)


def test_health(client):
    response = client.get("/health")
    assert response.status_code == 200
    body = response.json()
    assert body["status"] == "healthy"
    assert body["fixtures"] == 12


def test_request_id_header_is_echoed(client):
    response = client.get("/health", headers={"X-Request-ID": "feedbeef"})
    assert response.headers["X-Request-ID"] == "feedbeef"


def test_list_and_describe_tools(client):
    tools = client.get("/v1/tools/").json()["tools"]
    assert "sg-enumerate" in {t["tool_key"] for t in tools}
    info = client.get("/v1/tools/galois-check").json()
    assert info["inputs"] == ["field", "curve", "point"]
    missing = client.get("/v1/tools/nope")
    assert missing.status_code == 404
    assert missing.json()["error_code"] == "UNKNOWN_TOOL"


def test_run_tool(client):
    response = client.post("/v1/tools/galois-check", json={"curve": "X^3 + Y^3 + Z^3", "point": "(1:0:0)"},
                           headers={"X-Request-ID": "run00001"})
    assert response.status_code == 200
    doc = response.json()
    assert doc["verdict"] is True
    assert doc["run_id"] == "run00001"
    assert len(doc["galois"]["group"]) == 3


def test_domain_errors_map_to_statuses(client):
    bad = client.post("/v1/tools/dual", json={"conic": "X^2 + (Y"})
    assert bad.status_code == 422
    assert bad.json()["error_code"] == "SYNTAX_ERROR"
    singular = client.post("/v1/tools/dual", json={"conic": "X*Y"})
    assert singular.status_code == 422
    assert singular.json()["error_code"] == "SINGULAR_CONIC"
    unknown = client.post("/v1/tools/nope", json={})
    assert unknown.status_code == 404


def test_unresolved_is_a_conflict(client, monkeypatch):
    def unresolved(*args, **kwargs):
        raise Unresolved("needs a root of x^5 - x - 1", suggestion=None)

    monkeypatch.setattr(tools_router.service, "run", unresolved)
    response = client.post("/v1/tools/galois-check", json={"curve": "X^3 + Y^3 + Z^3", "point": "(1:0:0)"})
    assert response.status_code == 409
    assert response.json()["retryable"] is True


@pytest.mark.parametrize("exc,status", [
    (Unresolved("x"), 409),
    (DegreeTooHigh("x"), 409),
    (InvalidCurve("x"), 422),
    (InternalConsistencyError("x"), 500),
])
def test_status_for(exc, status):
    assert status_for(exc) == status


def test_api_key_is_enforced(client, monkeypatch):
    monkeypatch.setattr(main_module.settings, "api_key", "secret")
    assert client.get("/v1/tools/").status_code == 401
    assert client.get("/v1/tools/", headers={"X-API-Key": "wrong"}).json()["error_code"] == "UNAUTHORIZED"
    assert client.get("/v1/tools/", headers={"X-API-Key": "secret"}).status_code == 200
    assert client.get("/health").status_code == 200
