import json

import pytest
from fastapi.testclient import TestClient

from config import settings
from main import app

client = TestClient(app)


@pytest.fixture
def reports_dir(tmp_path, monkeypatch):
    monkeypatch.setattr(settings, "reports_dir", str(tmp_path))
    return tmp_path


def test_root_lists_endpoints():
    response = client.get("/")
    assert response.status_code == 200
    assert "POST /verify-all" in response.json()["endpoints"]


def test_health():
    assert client.get("/health").json() == {"status": "healthy"}


def test_fiber_table():
    rows = client.get("/fiber-table", params={"max_n": 1}).json()
    assert {"I_1", "I*_0", "II*"} <= {row["kodaira"] for row in rows}
    assert client.get("/fiber-table", params={"max_n": 99}).status_code == 400


def test_nv():
    data = client.get("/nv/I*_1").json()
    assert data == {"type": "I*_1", "N_v": 4}
    data = client.get("/nv/IV*", params={"a2": 3}).json()
    assert data["N_v^(i)"] == 3
    assert client.get("/nv/I_0").status_code == 400


def test_enumerate():
    data = client.post("/enumerate", json={"budget": 4, "summary": True}).json()
    assert data["max"] == 2
    assert "configurations" not in data
    assert client.post("/enumerate", json={"budget": -1}).status_code == 422


def test_lattice_info():
    data = client.get("/lattice/D4").json()
    assert data["rank"] == 4
    assert data["determinant"] == 4
    assert data["two_length"] == 2
    assert data["invariant_factors"] == [2, 2]
    assert data["roots"] == 24
    assert client.get("/lattice/Q3").status_code == 400


def test_index_lemma_endpoint():
    data = client.get("/lattice/D6/index-lemma").json()
    assert data["status"] == "verified"


def test_wmodel_discriminant():
    payload = {"field": {"k": 4}, "a1": ["0x1"], "a6": ["0x0", "0x1", "0x1"]}
    data = client.post("/wmodel/discriminant", json=payload).json()
    assert data["discriminant"] == ["0x0", "0x1", "0x1"]
    assert data["degree"] == 2
    assert data["oracle_agrees"] is True
    assert data["square"] is False
    bad = client.post("/wmodel/discriminant", json={"field": {"k": 4}})
    assert bad.status_code == 400


def test_verify_all_stores_report(reports_dir):
    response = client.post("/verify-all", json={"seed": 9, "only": ["census"]})
    assert response.status_code == 200
    assert response.json()["status"] == "verified"
    assert (reports_dir / "verify-all-seed9.json").exists()

    listing = client.get("/reports").json()["reports"]
    assert [r["name"] for r in listing] == ["verify-all-seed9.json"]
    stored = client.get("/reports/verify-all-seed9.json")
    assert stored.status_code == 200
    assert json.loads(stored.content)["seed"] == 9

    assert client.delete("/reports/verify-all-seed9.json").status_code == 200
    assert client.get("/reports/verify-all-seed9.json").status_code == 404


def test_verify_all_rejects_unknown_checks(reports_dir):
    response = client.post("/verify-all", json={"only": ["nope"], "save": False})
    assert response.status_code == 400


def test_reports_reject_other_files(reports_dir):
    (reports_dir / "notes.txt").write_text("x")
    assert client.get("/reports/notes.txt").status_code == 400
    assert client.get("/reports").json() == {"reports": []}
    assert client.delete("/reports/missing.json").status_code == 404
