import json

import pytest
from fastapi.testclient import TestClient

from trustnet.app import canonical_json
from trustnet.fixtures import (
    ACTIVE_CONTACT,
    ADMIN,
    ADMIN_CREDENTIAL,
    SEARCHER,
    SEARCHER_CREDENTIAL,
    build_inversion_app,
)
from trustnet.service import create_service


@pytest.fixture
def app(clock):
    return build_inversion_app(clock=clock)


@pytest.fixture
def client(app):
    return TestClient(create_service(app))


def login(client, handle, credential):
    response = client.post("/login", json={"handle": handle, "credential": credential})
    assert response.status_code == 200
    return {"Authorization": f"Bearer {response.json()['token']}"}


@pytest.fixture
def searcher_headers(client):
    return login(client, SEARCHER, SEARCHER_CREDENTIAL)


@pytest.fixture
def admin_headers(client):
    return login(client, ADMIN, ADMIN_CREDENTIAL)


def test_register_validate_login_over_http(client):
    response = client.post(
        "/register", json={"handle": "newuser", "credential": "pw"}
    )
    assert response.status_code == 200
    token = response.json()["validation_token"]
    assert client.post("/validate", json={"token": token}).status_code == 200
    response = client.post("/login", json={"handle": "newuser", "credential": "pw"})
    assert response.status_code == 200
    assert response.json()["role"] == "normal"

    duplicate = client.post("/register", json={"handle": "newuser", "credential": "x"})
    assert duplicate.status_code == 409


def test_trust_endpoints(client, searcher_headers):
    response = client.put(
        f"/trust/{ACTIVE_CONTACT}", json={"value": "55.00"}, headers=searcher_headers
    )
    assert response.status_code == 200
    assert response.json() == {"contact": ACTIVE_CONTACT, "value": "55.00"}
    response = client.get(f"/trust/{ACTIVE_CONTACT}", headers=searcher_headers)
    assert response.json()["value"] == "55.00"
    response = client.put(
        f"/trust/{ACTIVE_CONTACT}", json={"value": "101"}, headers=searcher_headers
    )
    assert response.status_code == 400
    response = client.get("/trust/ghost", headers=searcher_headers)
    assert response.status_code == 404


def test_topic_trust_and_experts(client, searcher_headers):
    response = client.put(
        f"/topic-trust/{ACTIVE_CONTACT}/tech",
        json={"value": "88.00"},
        headers=searcher_headers,
    )
    assert response.status_code == 200
    response = client.get(
        "/experts", params={"topic": "tech", "threshold": "80"}, headers=searcher_headers
    )
    assert response.json()["experts"] == [ACTIVE_CONTACT]
    response = client.get("/experts", headers=searcher_headers)
    assert response.status_code == 400


def test_search_endpoint_modes(client, searcher_headers):
    static = client.get(
        "/search", params={"q": "apple", "mode": "static"}, headers=searcher_headers
    ).json()
    assert static["results"][0]["author"] == "ouest-france"
    dynamic = client.get(
        "/search", params={"q": "apple", "mode": "dynamic"}, headers=searcher_headers
    ).json()
    assert dynamic["results"][0]["author"] == "TechCrunch"
    assert dynamic["results"][0]["trust"] == "56.02"


def test_admin_only_coefficients(client, searcher_headers, admin_headers):
    assert client.get("/admin/coefficients", headers=searcher_headers).status_code == 403
    response = client.put(
        "/admin/coefficients", json={"c_results": "0.1"}, headers=searcher_headers
    )
    assert response.status_code == 403
    response = client.put(
        "/admin/coefficients", json={"c_results": "0.1"}, headers=admin_headers
    )
    assert response.status_code == 200
    assert response.json()["c_results"] == "0.1000"
    assert client.get("/admin/coefficients", headers=admin_headers).json()[
        "c_results"
    ] == "0.1000"


def test_quarantine_endpoints(client, searcher_headers, admin_headers):
    response = client.post(
        "/quarantine/submit",
        json={"candidate": "newbie", "handle": "newbie", "email": "n@example.org"},
    )
    assert response.status_code == 200
    assert response.json()["state"] == "quarantined"

    assert client.post(
        "/quarantine/newbie/approve", headers=searcher_headers
    ).status_code == 200
    assert client.post(
        "/quarantine/newbie/approve", headers=searcher_headers
    ).status_code == 409  # double stance
    assert client.post(
        "/quarantine/newbie/flag", headers=admin_headers
    ).status_code == 200

    listing = client.get("/quarantine", headers=searcher_headers)
    assert listing.status_code == 200
    assert listing.json()["records"][0]["candidate"] == "newbie"

    duplicate = client.post(
        "/quarantine/submit", json={"candidate": "newbie", "handle": "other"}
    )
    assert duplicate.status_code == 409


def test_ingest_endpoints(client, searcher_headers):
    lines = "\n".join([
        json.dumps({"post_id": "x1", "author": ACTIVE_CONTACT, "text": "fresh apple",
                    "created_at": "2026-05-30T10:00:00Z"}),
        "broken",
    ])
    response = client.post(
        "/ingest/posts", content=lines.encode("utf-8"), headers=searcher_headers
    )
    assert response.status_code == 200
    assert response.json()["accepted"] == 1
    assert response.json()["rejected"][0]["line"] == 2

    event = json.dumps({"actor": SEARCHER, "contact": ACTIVE_CONTACT,
                        "kind": "like", "at": "2026-05-30T10:00:00Z"})
    response = client.post(
        "/ingest/events", content=event.encode("utf-8"), headers=searcher_headers
    )
    assert response.json() == {"accepted": 1, "duplicates": 0, "rejected": []}


def test_forecast_endpoint(client, searcher_headers):
    response = client.get("/forecast/apple", headers=searcher_headers)
    assert response.status_code == 200
    assert set(response.json()["tau"]) == {"positive", "negative", "no_opinion"}


def test_authorization_completeness(client):
    """Every mutating or user-scoped endpoint rejects missing sessions."""
    protected = [
        ("PUT", "/trust/x", {"json": {"value": "50.00"}}),
        ("GET", "/trust/x", {}),
        ("PUT", "/topic-trust/x/t", {"json": {"value": "50.00"}}),
        ("GET", "/topic-trust/x/t", {}),
        ("GET", "/experts", {"params": {"topic": "t"}}),
        ("POST", "/ingest/posts", {"content": b"{}"}),
        ("POST", "/ingest/events", {"content": b"{}"}),
        ("GET", "/search", {"params": {"q": "apple"}}),
        ("GET", "/admin/coefficients", {}),
        ("PUT", "/admin/coefficients", {"json": {"c_results": "0.1"}}),
        ("POST", "/quarantine/x/approve", {}),
        ("POST", "/quarantine/x/flag", {}),
        ("GET", "/quarantine", {}),
        ("GET", "/forecast/apple", {}),
    ]
    for method, path, kwargs in protected:
        response = client.request(method, path, **kwargs)
        assert response.status_code == 401, (method, path, response.status_code)
        assert response.json()["error"]["type"] == "authentication"

    # invalid tokens are rejected too
    bad = {"Authorization": "Bearer bogus"}
    response = client.get("/search", params={"q": "apple"}, headers=bad)
    assert response.status_code == 401


def test_http_responses_are_byte_identical_to_direct_calls(app, client,
                                                           searcher_headers,
                                                           admin_headers):
    """The HTTP shell adds nothing: bodies equal the serialized App results."""
    cases = [
        (
            client.get("/search", params={"q": "apple", "mode": "dynamic"},
                       headers=searcher_headers),
            lambda: app.api_search(SEARCHER, {"q": "apple", "mode": "dynamic"}),
        ),
        (
            client.get(f"/trust/{ACTIVE_CONTACT}", headers=searcher_headers),
            lambda: app.api_get_trust(SEARCHER, ACTIVE_CONTACT),
        ),
        (
            client.get("/admin/coefficients", headers=admin_headers),
            lambda: app.api_get_coefficients(ADMIN),
        ),
        (
            client.get("/quarantine", headers=searcher_headers),
            lambda: app.api_quarantine_list(SEARCHER),
        ),
        (
            client.get("/forecast/apple", headers=searcher_headers),
            lambda: app.api_forecast("apple"),
        ),
    ]
    for response, direct in cases:
        assert response.status_code == 200
        assert response.content == canonical_json(direct()).encode("utf-8")


def test_error_body_shape(client, searcher_headers):
    response = client.get("/search", params={"q": ""}, headers=searcher_headers)
    assert response.status_code == 400
    body = response.json()
    assert body["error"]["type"] == "validation"
    assert "message" in body["error"]
