"""CLI subcommands and exit codes (0 ok, 1 usage, 2 data, 3 runtime)."""

import json

import pytest

from fuzzyvis.cli import main

from conftest import FIXTURES


@pytest.fixture()
def mini_obo_path():
    return str(FIXTURES / "mini.obo")


class TestValidate:
    def test_ok(self, mini_obo_path, capsys):
        assert main(["validate", "--ontology", mini_obo_path]) == 0
        out = capsys.readouterr().out
        assert "6 concepts" in out and "1 roots" in out and "3 leaves" in out

    def test_parse_error_exit_2(self, tmp_path, capsys):
        bad = tmp_path / "bad.obo"
        bad.write_text("[Term]\nid: A\nis_a: GHOST\n")
        assert main(["validate", "--ontology", str(bad)]) == 2
        assert "DanglingParent" in capsys.readouterr().err

    def test_missing_file_exit_3(self):
        assert main(["validate", "--ontology", "/no/such/file.obo"]) == 3

    def test_usage_error_exit_1(self):
        with pytest.raises(SystemExit) as exc:
            main(["validate"])  # --ontology is required
        assert exc.value.code == 1


class TestEmbedAndQuery:
    def test_embed_then_query_round_trip(self, mini_obo_path, tmp_path, capsys):
        out_file = tmp_path / "mini.emb"
        rc = main(
            [
                "embed",
                "--ontology", mini_obo_path,
                "--alpha", "0.5",
                "--dim", "16",
                "--seed", "20",
                "--family", "product",
                "--out", str(out_file),
            ]
        )
        assert rc == 0
        header = out_file.read_text().splitlines()[0]
        assert header.startswith("#fuzzyvis-embedding v1 dim=16 source=generated")
        assert "alpha=0.5" in header and "seed=20" in header and "family=product" in header
        capsys.readouterr()

        rc = main(
            [
                "query",
                "--ontology", mini_obo_path,
                "--embedding", str(out_file),
                "--expr", "L1 AND NOT L3",
                "--k", "3",
                "--json",
            ]
        )
        assert rc == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["echo"] == "L1 AND NOT L3"
        assert len(payload["hits"]) == 3
        assert payload["family"] == "product"

    def test_query_family_override(self, mini_obo_path, tmp_path, capsys):
        out_file = tmp_path / "mini.emb"
        main(
            ["embed", "--ontology", mini_obo_path, "--alpha", "0.5", "--dim", "4",
             "--seed", "9", "--out", str(out_file)]
        )
        capsys.readouterr()
        rc = main(
            ["query", "--ontology", mini_obo_path, "--embedding", str(out_file),
             "--family", "lukasiewicz", "--expr", "L2 AND NOT L2", "--k", "2", "--json"]
        )
        assert rc == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["zero_query"] is True

    def test_query_syntax_error_exit_2(self, mini_obo_path, tmp_path, capsys):
        out_file = tmp_path / "mini.emb"
        main(
            ["embed", "--ontology", mini_obo_path, "--alpha", "0.5", "--dim", "2",
             "--seed", "1", "--out", str(out_file)]
        )
        rc = main(
            ["query", "--ontology", mini_obo_path, "--embedding", str(out_file),
             "--expr", "L1 AND", "--k", "1"]
        )
        assert rc == 2
        assert "QuerySyntaxError" in capsys.readouterr().err

    def test_human_readable_output(self, mini_obo_path, tmp_path, capsys):
        out_file = tmp_path / "mini.emb"
        main(
            ["embed", "--ontology", mini_obo_path, "--alpha", "0.5", "--dim", "8",
             "--seed", "3", "--out", str(out_file)]
        )
        capsys.readouterr()
        rc = main(
            ["query", "--ontology", mini_obo_path, "--embedding", str(out_file),
             "--expr", "L1", "--k", "2"]
        )
        assert rc == 0
        out = capsys.readouterr().out
        assert "query: L1" in out
        assert "1." in out and "leaf" in out

    def test_bad_alpha_exit_2(self, mini_obo_path, tmp_path):
        rc = main(
            ["embed", "--ontology", mini_obo_path, "--alpha", "1.5", "--dim", "2",
             "--seed", "1", "--out", str(tmp_path / "x.emb")]
        )
        assert rc == 2

    def test_json_format_flag(self, tmp_path, capsys):
        json_path = FIXTURES / "mini.json"
        assert main(["validate", "--ontology", str(json_path), "--format", "json"]) == 0
        assert "6 concepts" in capsys.readouterr().out


class TestPreload:
    def test_preload_publishes_queryable_instance(self, mini_obo_path, tmp_path, capsys):
        from fastapi.testclient import TestClient

        from fuzzyvis.cli import _preload
        from fuzzyvis.service import Registry, create_app

        emb = tmp_path / "mini.emb"
        main(
            ["embed", "--ontology", mini_obo_path, "--alpha", "0.5", "--dim", "8",
             "--seed", "3", "--out", str(emb)]
        )
        registry = Registry()
        _preload(registry, f"{mini_obo_path}:{emb}:product")
        client = TestClient(create_app(registry))
        listing = client.get("/instances").json()["instances"]
        assert len(listing) == 1 and listing[0]["ready"]
        iid = listing[0]["instance_id"]
        resp = client.post(f"/instances/{iid}/query", json={"expr": "L1"})
        assert resp.status_code == 200

    def test_preload_bad_spec_exit_2(self, mini_obo_path, tmp_path):
        from fuzzyvis.cli import _preload
        from fuzzyvis.errors import FuzzyvisError
        from fuzzyvis.service import Registry

        with pytest.raises(FuzzyvisError):
            _preload(Registry(), "only-one-part")
