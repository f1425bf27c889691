from __future__ import annotations

import pytest
from fastapi.testclient import TestClient

from backend.app.main import app


@pytest.fixture
def client():
    with TestClient(app) as test_client:
        yield test_client


def test_health(client):
    response = client.get("/health")
    assert response.status_code == 200
    assert response.json() == {"status": "ok"}


def test_cases(client):
    response = client.get("/cases")
    assert response.status_code == 200
    cases = {case["case_id"]: case for case in response.json()}
    assert len(cases) == 15
    assert cases["2.1"]["dim"] == 3
    assert cases["1.1"]["transient"] is True


def test_runs_are_recorded_once_per_configuration(client):
    body = {"case": "1.8", "method": "pg2", "points": 48}
    first = client.post("/runs", json=body)
    assert first.status_code == 200
    run = first.json()
    assert run["case_id"] == "1.8"
    assert run["n_points"] == 48
    assert run["e0"] is None

    second = client.post("/runs", json=body)
    assert second.status_code == 200
    listed = client.get("/runs", params={"case_id": "1.8", "method": "pg2"}).json()
    assert [r["config_hash"] for r in listed] == [run["config_hash"]]


def test_unknown_case_is_unprocessable(client):
    response = client.post("/runs", json={"case": "9.9", "method": "fpm"})
    assert response.status_code == 422
    assert response.json()["error"] == "UnknownCase"


def test_bad_request_bodies(client):
    assert client.post("/runs", json={"case": "1.8", "method": "fem"}).status_code == 422
    assert client.post("/runs", json={"case": "1.8", "method": "fpm", "eta2": 0.0}).status_code == 422
    assert client.post("/runs", json={"case": "1.8", "method": "fpm", "colour": "red"}).status_code == 422


def test_sweeps(client):
    body = {"case": "2.1", "method": "pg2", "eta1": [-1.0, 1.0], "eta2": [1000.0], "points": 27}
    response = client.post("/sweeps", json=body)
    assert response.status_code == 200
    cells = response.json()
    assert [cell["status"] for cell in cells] == ["failed", "ok"]


def test_sweep_without_exact_solution(client):
    body = {"case": "1.8", "method": "fpm", "eta1": [1.0], "eta2": [1.0e5], "points": 48}
    response = client.post("/sweeps", json=body)
    assert response.status_code == 400
    assert response.json()["error"] == "NoExactSolution"
