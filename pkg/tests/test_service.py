import pytest
from fastapi.testclient import TestClient

from qmul import textio
from qmul.service import create_app
from qmul.simulate import run


@pytest.fixture(scope="module")
def client():
    return TestClient(create_app())


class TestHealth:
    def test_health(self, client):
        response = client.get("/health")
        assert response.status_code == 200
        assert response.json() == {"status": "ok"}


class TestEstimate:
    def test_schoolbook_addsub_formula(self, client):
        response = client.post("/estimate",
                               json={"kind": "schoolbook-addsub", "n": 8})
        assert response.status_code == 200
        body = response.json()
        assert body["formula"] == 99
        assert 0 < body["reduction_vs_classic"] < 0.5

    def test_modp_defaults_to_optimal_window(self, client):
        response = client.post("/estimate",
                               json={"kind": "modp-addsub", "n": 16})
        body = response.json()
        assert body["w"] == body["optimal_w"] == 4

    def test_unknown_kind_rejected(self, client):
        response = client.post("/estimate", json={"kind": "fft", "n": 8})
        assert response.status_code == 422


class TestBuild:
    def test_resource_report(self, client):
        response = client.post("/build",
                               json={"kind": "schoolbook-addsub", "n": 4})
        body = response.json()
        assert body["counted_toffoli"] == 35
        assert body["nominal_toffoli"] == 35
        labels = [e["label"] for e in body["ledger"]]
        assert labels[0] == "cascade"
        assert "correction[2]" in labels

    def test_block_kind(self, client):
        response = client.post("/build", json={"kind": "ctrl-addsub", "n": 6})
        assert response.json()["counted_toffoli"] == 6

    def test_reconcile_modp(self, client):
        response = client.post(
            "/reconcile", json={"kind": "modp-classic", "n": 4, "p": 13, "w": 2})
        body = response.json()
        assert body["table_offset"] == pytest.approx(4.0)


class TestSimulate:
    def test_mod2n_addsub(self, client):
        response = client.post("/simulate", json={
            "kind": "mod2n-addsub", "n": 4, "x": 13, "y": 11})
        assert response.json()["result"] == 15

    def test_modp_input_bound(self, client):
        response = client.post("/simulate", json={
            "kind": "modp-addsub", "n": 4, "p": 13, "w": 2, "x": 13, "y": 1})
        assert response.status_code == 422


class TestVerify:
    def test_exhaustive_modp(self, client):
        response = client.post("/verify", json={
            "kind": "modp-addsub", "n": 4, "p": 13, "w": 2,
            "exhaustive": True})
        body = response.json()
        assert body["cases_run"] == 169
        assert body["passed"]

    def test_randomized_seeded(self, client):
        payload = {"kind": "schoolbook-addsub", "n": 8, "trials": 64,
                   "seed": 9}
        first = client.post("/verify", json=payload).json()
        second = client.post("/verify", json=payload).json()
        assert first == second
        assert first["passed"] and first["cases_run"] == 64

    def test_budget_rejected(self, client):
        response = client.post("/verify", json={
            "kind": "schoolbook-classic", "n": 13, "exhaustive": True})
        assert response.status_code == 422


class TestEmit:
    def test_emitted_text_reparses_and_runs(self, client):
        response = client.post("/emit", json={"kind": "adder", "n": 3})
        circuit = textio.parse_text(response.json()["text"])
        out = run(circuit, {"a": 3, "b": 6})
        assert out["b"] + (out["carry"] << 3) == 9


class TestSweeps:
    def test_sweep_w(self, client):
        response = client.get("/sweep-w",
                              params={"kind": "modp-addsub", "n": 16})
        body = response.json()
        assert body["optimal_w"] == 4
        assert len(body["table"]) == 16

    def test_sweep_rejects_plain_kinds(self, client):
        response = client.get("/sweep-w",
                              params={"kind": "schoolbook-addsub", "n": 16})
        assert response.status_code == 422

    def test_crossover(self, client):
        response = client.get("/crossover", params={
            "family": "schoolbook", "threshold": 0.25})
        body = response.json()
        assert body["n"] == 8
