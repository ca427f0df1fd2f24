"""HTTP API behavior: endpoints, error envelopes, isolation, determinism."""

import time

import pytest
from fastapi.testclient import TestClient

from fuzzyvis.service import Registry, create_app


@pytest.fixture()
def client():
    return TestClient(create_app(Registry()))


def wait_for_job(client, job_id, timeout=30.0):
    deadline = time.monotonic() + timeout
    while time.monotonic() < deadline:
        state = client.get(f"/jobs/{job_id}").json()["state"]
        if state in ("done", "failed"):
            return state
        time.sleep(0.01)
    raise TimeoutError(f"job {job_id} did not finish")


def create_fixture_instance(client, mini_obo_text, family="product", dim=1, seed=7, alpha=0.5):
    resp = client.post(
        "/instances",
        json={
            "ontology": mini_obo_text,
            "format": "obo",
            "family": family,
            "embedding": {"mode": "generate", "alpha": alpha, "dim": dim, "seed": seed},
        },
    )
    assert resp.status_code == 201, resp.text
    body = resp.json()
    assert wait_for_job(client, body["job"]["job_id"]) == "done"
    return body["instance_id"]


class TestCreateInstance:
    def test_generate_pipeline(self, client, mini_obo_text):
        iid = create_fixture_instance(client, mini_obo_text)
        listing = client.get("/instances").json()["instances"]
        me = next(i for i in listing if i["instance_id"] == iid)
        assert me["ready"] and me["concepts"] == 6 and me["dim"] == 1

    def test_two_creates_give_independent_ids(self, client, mini_obo_text):
        a = client.post("/instances", json={"ontology": mini_obo_text, "format": "obo"}).json()
        b = client.post("/instances", json={"ontology": mini_obo_text, "format": "obo"}).json()
        assert a["instance_id"] != b["instance_id"]

    def test_upload_embedding_synchronous(self, client, mini_obo_text):
        text = (
            "#fuzzyvis-embedding v1 dim=2 source=imported family=product\n"
            "L1\t1,0\nL2\t0,1\n"
        )
        resp = client.post(
            "/instances",
            json={
                "ontology": mini_obo_text,
                "format": "obo",
                "embedding": {"mode": "upload", "data": text},
            },
        )
        assert resp.status_code == 201
        assert resp.json()["ready"] is True

    def test_upload_with_bad_rows_is_422(self, client, mini_obo_text):
        text = "#fuzzyvis-embedding v1 dim=3 source=imported family=product\nL1\t1,0\n"
        resp = client.post(
            "/instances",
            json={
                "ontology": mini_obo_text,
                "format": "obo",
                "embedding": {"mode": "upload", "data": text},
            },
        )
        assert resp.status_code == 422
        assert resp.json()["error"]["code"] == "DimMismatchAcrossRows"

    def test_parse_error_is_422_with_code(self, client):
        resp = client.post(
            "/instances",
            json={"ontology": "[Term]\nid: A\nis_a: GHOST\n", "format": "obo"},
        )
        assert resp.status_code == 422
        err = resp.json()["error"]
        assert err["code"] == "DanglingParent"
        assert "GHOST" in err["message"]

    def test_unsupported_format(self, client):
        resp = client.post("/instances", json={"ontology": "x", "format": "owl"})
        assert resp.status_code == 400
        assert resp.json()["error"]["code"] == "UnsupportedFormat"

    def test_bad_family(self, client, mini_obo_text):
        resp = client.post(
            "/instances", json={"ontology": mini_obo_text, "format": "obo", "family": "zadeh"}
        )
        assert resp.status_code == 400
        assert resp.json()["error"]["code"] == "InvalidParams"

    def test_bad_generation_params(self, client, mini_obo_text):
        resp = client.post(
            "/instances",
            json={
                "ontology": mini_obo_text,
                "format": "obo",
                "embedding": {"mode": "generate", "alpha": 1.5, "dim": 4, "seed": 1},
            },
        )
        assert resp.status_code == 400


class TestConceptEndpoints:
    def test_get_concept_fixture_root(self, client, mini_obo_text):
        iid = create_fixture_instance(client, mini_obo_text)
        body = client.get(f"/instances/{iid}/concepts/R").json()
        assert body["parents"] == []
        assert body["children"] == ["A", "B"]
        assert body["metadata"]["subtree_size"] == 6
        assert body["metadata"]["depth"] == 0

    def test_unknown_concept_404(self, client, mini_obo_text):
        iid = create_fixture_instance(client, mini_obo_text)
        resp = client.get(f"/instances/{iid}/concepts/NOPE")
        assert resp.status_code == 404
        assert resp.json()["error"]["code"] == "UnknownConcept"

    def test_obsolete_concept_404(self, client, mini_obo_text):
        iid = create_fixture_instance(client, mini_obo_text)
        assert client.get(f"/instances/{iid}/concepts/OLD1").status_code == 404

    def test_unknown_instance_404(self, client):
        assert client.get("/instances/inst-9999/concepts/R").status_code == 404

    def test_search(self, client, mini_obo_text):
        iid = create_fixture_instance(client, mini_obo_text)
        hits = client.get(f"/instances/{iid}/search", params={"q": "leaf"}).json()["hits"]
        assert {h["id"] for h in hits} == {"L1", "L2", "L3"}
        assert all("depth" in h and "subtree_size" in h for h in hits)
        one = client.get(f"/instances/{iid}/search", params={"q": "leaf", "limit": 1}).json()
        assert len(one["hits"]) == 1

    def test_empty_search_400(self, client, mini_obo_text):
        iid = create_fixture_instance(client, mini_obo_text)
        resp = client.get(f"/instances/{iid}/search", params={"q": "  "})
        assert resp.status_code == 400
        assert resp.json()["error"]["code"] == "EmptyQuery"

    def test_neighborhood(self, client, mini_obo_text):
        iid = create_fixture_instance(client, mini_obo_text)
        body = client.get(f"/instances/{iid}/neighborhood/R", params={"depth": 2}).json()
        assert len(body["nodes"]) == 6
        assert {e["child"] for e in body["edges"]} == {"A", "B", "L1", "L2", "L3"}
        shallow = client.get(f"/instances/{iid}/neighborhood/L1", params={"depth": 0}).json()
        assert {n["id"] for n in shallow["nodes"]} == {"L1", "A", "R"}
        assert any(n["is_focus"] for n in shallow["nodes"])

    def test_neighborhood_unknown_404(self, client, mini_obo_text):
        iid = create_fixture_instance(client, mini_obo_text)
        assert client.get(f"/instances/{iid}/neighborhood/NOPE").status_code == 404


class TestQueryEndpoint:
    def test_ast_self_retrieval(self, client, mini_obo_text):
        iid = create_fixture_instance(client, mini_obo_text, dim=16, seed=20)
        resp = client.post(
            f"/instances/{iid}/query",
            params={"k": 1},
            json={"ast": {"op": "ref", "id": "L1"}},
        )
        assert resp.status_code == 200
        body = resp.json()
        assert body["hits"][0]["id"] == "L1"
        assert body["hits"][0]["score"] == pytest.approx(1.0, abs=1e-9)
        assert body["echo"] == "L1"

    def test_expr_query_with_hits(self, client, mini_obo_text):
        iid = create_fixture_instance(client, mini_obo_text, dim=16, seed=20)
        resp = client.post(
            f"/instances/{iid}/query",
            params={"k": 3},
            json={"expr": "L1 AND NOT L3"},
        )
        body = resp.json()
        assert resp.status_code == 200
        assert len(body["hits"]) == 3
        assert body["zero_query"] is False
        scores = [h["score"] for h in body["hits"]]
        assert scores == sorted(scores, reverse=True)

    def test_unknown_label_422_with_suggestions(self, client, mini_obo_text):
        iid = create_fixture_instance(client, mini_obo_text)
        resp = client.post(f"/instances/{iid}/query", json={"expr": '"leaf won"'})
        assert resp.status_code == 422
        err = resp.json()["error"]
        assert err["code"] == "UnknownConcept"
        assert err["suggestions"]

    def test_syntax_error_carries_position(self, client, mini_obo_text):
        iid = create_fixture_instance(client, mini_obo_text)
        resp = client.post(f"/instances/{iid}/query", json={"expr": "L1 AND"})
        assert resp.status_code == 422
        assert resp.json()["error"]["position"] == 6

    def test_query_without_index_409(self, client, mini_obo_text):
        resp = client.post("/instances", json={"ontology": mini_obo_text, "format": "obo"})
        iid = resp.json()["instance_id"]
        out = client.post(f"/instances/{iid}/query", json={"expr": "L1"})
        assert out.status_code == 409
        assert out.json()["error"]["code"] == "NoEmbedding"

    def test_family_override_header(self, client, mini_obo_text):
        iid = create_fixture_instance(client, mini_obo_text, dim=16, seed=20)
        base = client.post(f"/instances/{iid}/query", json={"expr": "L2 AND NOT L2"})
        assert base.json()["zero_query"] is False  # product family
        luk = client.post(
            f"/instances/{iid}/query",
            json={"expr": "L2 AND NOT L2"},
            headers={"X-Fuzzy-Family": "lukasiewicz"},
        )
        assert luk.json()["zero_query"] is True
        assert luk.json()["family"] == "lukasiewicz"

    def test_expr_and_ast_both_given_400(self, client, mini_obo_text):
        iid = create_fixture_instance(client, mini_obo_text)
        resp = client.post(
            f"/instances/{iid}/query",
            json={"expr": "L1", "ast": {"op": "ref", "id": "L1"}},
        )
        assert resp.status_code == 400

    def test_k_capped_at_200(self, client, mini_obo_text):
        iid = create_fixture_instance(client, mini_obo_text)
        resp = client.post(f"/instances/{iid}/query", params={"k": 9999}, json={"expr": "L1"})
        assert resp.status_code == 200
        assert resp.json()["k"] == 200


class TestServiceInvariants:
    def test_identical_requests_byte_identical(self, client, mini_obo_text):
        iid = create_fixture_instance(client, mini_obo_text, dim=8, seed=1)
        paths = [
            f"/instances/{iid}/concepts/A",
            f"/instances/{iid}/search?q=leaf",
            f"/instances/{iid}/neighborhood/R?depth=2",
        ]
        for path in paths:
            assert client.get(path).content == client.get(path).content
        q = {"expr": "L1 OR L2"}
        first = client.post(f"/instances/{iid}/query", json=q).content
        second = client.post(f"/instances/{iid}/query", json=q).content
        assert first == second

    def test_instance_isolation(self, client, mini_obo_text, hpo_like_graph):
        from conftest import FIXTURES

        iid_a = create_fixture_instance(client, mini_obo_text)
        hpo_text = (FIXTURES / "hpo_like.obo").read_text()
        resp = client.post("/instances", json={"ontology": hpo_text, "format": "obo"})
        iid_b = resp.json()["instance_id"]
        # interleaved requests observe their own graphs only
        assert client.get(f"/instances/{iid_a}/concepts/L1").status_code == 200
        assert client.get(f"/instances/{iid_b}/concepts/L1").status_code == 404
        assert client.get(f"/instances/{iid_b}/concepts/HP:0001350").status_code == 200
        assert client.get(f"/instances/{iid_a}/concepts/HP:0001350").status_code == 404

    def test_error_envelope_never_leaks_traces(self, client):
        resp = client.post("/instances", json={"ontology": "[Term]\nname: x\n", "format": "obo"})
        body = resp.json()
        assert set(body) == {"error"}
        assert {"code", "message"} <= set(body["error"])
        assert "Traceback" not in resp.text

    def test_pydantic_validation_uses_envelope(self, client):
        resp = client.post("/instances", json={"format": "obo"})
        assert resp.status_code == 400
        assert resp.json()["error"]["code"] == "InvalidParams"

    def test_unknown_job_404(self, client):
        resp = client.get("/jobs/job-är-nope")
        assert resp.status_code == 404
        assert resp.json()["error"]["code"] == "UnknownJob"
