"""HTTP service: endpoints, versioning, error handling."""

from __future__ import annotations

from urllib.parse import quote

import pytest
from fastapi.testclient import TestClient

from conftest import DATA, M1, NS, P1, PL, W1

from nomengraph.service import CatalogConfig, create_app


@pytest.fixture()
def client():
    app = create_app(CatalogConfig(namespace=NS))
    with TestClient(app) as c:
        yield c


@pytest.fixture()
def loaded(client, f1_text):
    assert client.post("/ingest", content=f1_text).status_code == 200
    directives = (DATA / "merge_all_londons.json").read_text(encoding="utf-8")
    assert client.post("/reconcile", content=directives).status_code == 200
    return client


def entity_url(iri: str) -> str:
    return "/entity/" + quote(iri, safe="")


class TestVersioning:
    def test_every_response_carries_the_version_header(self, client, f1_text):
        assert client.get("/").headers["X-Catalog-Version"] == "0"
        assert client.get("/validate").headers["X-Catalog-Version"] == "0"
        client.post("/ingest", content=f1_text)
        assert client.get("/").headers["X-Catalog-Version"] == "1"
        # even errors carry it
        r = client.get("/entity", params={"iri": "http://nope.example/x"})
        assert r.status_code == 404
        assert r.headers["X-Catalog-Version"] == "1"

    def test_mutations_bump_the_version_once(self, client, f1_text):
        v0 = int(client.get("/").json()["version"])
        client.post("/ingest", content=f1_text)
        v1 = int(client.get("/").json()["version"])
        assert v1 == v0 + 1

    def test_failed_ingest_leaves_version_and_data_alone(self, loaded):
        before = loaded.get("/").json()
        r = loaded.post("/ingest", content='{"id": broken')
        assert r.status_code == 400
        after = loaded.get("/").json()
        assert after == before

    def test_ingest_replaces_rather_than_appends(self, client, f1_text):
        client.post("/ingest", content=f1_text)
        single = '{"id": "only", "kind": "person", "fields": [{"tag": "name", "value": "Solo"}]}\n'
        r = client.post("/ingest", content=single)
        assert r.json()["counts"]["entities"] == 1


class TestIngestReconcile:
    def test_ingest_reports_counts(self, client, f1_text):
        body = client.post("/ingest", content=f1_text).json()
        assert body["counts"] == {"entities": 8, "nomens": 7, "triples": 39}
        assert body["warnings"] == []

    def test_reconcile_merges_and_reports(self, client, f1_text):
        client.post("/ingest", content=f1_text)
        directives = (DATA / "merge_all_londons.json").read_text(encoding="utf-8")
        body = client.post("/reconcile", content=directives).json()
        assert body["merged_entities"] == 3
        assert body["counts"] == {"entities": 5, "nomens": 4, "triples": 27}

    def test_reconcile_is_cumulative_and_replayable(self, client):
        records = (
            '{"id": "a", "kind": "person", "fields": [{"tag": "place_of_birth", "value": "X"}]}\n'
            '{"id": "b", "kind": "corporate_body", "fields": [{"tag": "location", "value": "X"}]}\n'
            '{"id": "c", "kind": "corporate_body", "fields": [{"tag": "location", "value": "X"}]}\n'
        )
        client.post("/ingest", content=records)
        r1 = client.post(
            "/reconcile",
            content='{"merge": [["place|X|a|place_of_birth|0", "place|X|b|location|0"]]}',
        )
        assert r1.json()["counts"]["entities"] == 5  # 3 records + 2 places
        r2 = client.post(
            "/reconcile",
            content='{"merge": [["place|X|b|location|0", "place|X|c|location|0"]]}',
        )
        # second directive unions with the retained first one
        assert r2.json()["counts"]["entities"] == 4
        assert r2.json()["merged_entities"] == 2

    def test_bad_directives_do_not_change_state(self, loaded):
        before = loaded.get("/").json()
        r = loaded.post("/reconcile", content='{"merge": [["nonsense"]]}')
        assert r.status_code == 400
        assert loaded.get("/").json() == before

    def test_ingest_with_directives_file(self, client, f1_text, tmp_path):
        path = tmp_path / "directives.json"
        path.write_text((DATA / "merge_all_londons.json").read_text(encoding="utf-8"))
        r = client.post("/ingest", params={"directives": str(path)}, content=f1_text)
        assert r.status_code == 200
        assert r.json()["counts"]["entities"] == 5

    def test_ingest_with_missing_directives_file(self, client, f1_text):
        r = client.post("/ingest", params={"directives": "/nope/missing.json"}, content=f1_text)
        assert r.status_code == 400


class TestEntity:
    def test_path_and_query_forms_agree(self, loaded):
        a = loaded.get(entity_url(PL.value), params={"depth": 1}).json()
        b = loaded.get("/entity", params={"iri": PL.value, "depth": 1}).json()
        assert a == b

    def test_entity_payload_shape(self, loaded):
        body = loaded.get("/entity", params={"iri": PL.value}).json()
        assert body["iri"] == PL.value
        assert body["kind"] == "place"
        assert body["label"] == "London"
        assert body["rule_fired"] == "4"
        assert [n["value"] for n in body["nomens"]] == ["London"]
        rels = {(r["rel"], r["direction"]) for r in body["relations"]}
        assert rels == {
            ("born_in", "in"),
            ("located_in", "in"),
            ("subject", "in"),
            ("place_of_publication", "in"),
        }
        via = [r for r in body["relations"] if r["rel"] == "place_of_publication"]
        assert via[0]["via_nomen"].startswith(NS + "nomen/")

    def test_depth_controls_the_subgraph(self, loaded):
        d0 = loaded.get("/entity", params={"iri": PL.value, "depth": 0}).json()
        d1 = loaded.get("/entity", params={"iri": PL.value, "depth": 1}).json()
        assert d0["subgraph"]["triples"] == []
        assert len(d1["subgraph"]["triples"]) == 5

    def test_depth_above_maximum_rejected(self, loaded):
        r = loaded.get("/entity", params={"iri": PL.value, "depth": 4})
        assert r.status_code == 422

    def test_unknown_node_404(self, loaded):
        assert loaded.get("/entity", params={"iri": "http://nope.example/x"}).status_code == 404
        assert loaded.get(entity_url("http://nope.example/x")).status_code == 404

    def test_label_is_null_when_no_nomen(self, loaded):
        body = loaded.get("/entity", params={"iri": W1.value}).json()
        assert body["label"] is None and body["rule_fired"] is None

    def test_lang_parameter_reaches_resolution(self, client, titles_text):
        client.post("/ingest", content=titles_text)
        tw1 = NS + "work/rec-tw1"
        de = client.get("/entity", params={"iri": tw1, "lang": "de"}).json()
        assert (de["label"], de["rule_fired"]) == ("Odyssee", "2")

    def test_nomen_relations_are_nested(self, client, titles_text):
        client.post("/ingest", content=titles_text)
        # second same-language title on one expression is recorded as a variant
        records = (
            '{"id": "e", "kind": "expression", "fields": '
            '[{"tag": "title", "value": "Hamlet", "lang": "en"}, '
            '{"tag": "title", "value": "The Tragedy of Hamlet", "lang": "en"}]}\n'
        )
        client.post("/ingest", content=records)
        body = client.get("/entity", params={"iri": NS + "expression/e"}).json()
        flat = [(n["value"], r["rel"], r["direction"]) for n in body["nomens"] for r in n["relations"]]
        assert ("Hamlet", "variant_form", "in") in flat
        assert ("The Tragedy of Hamlet", "variant_form", "out") in flat


class TestReadEndpoints:
    def test_record_view(self, loaded):
        body = loaded.get("/record", params={"iri": M1.value}).json()
        slots = [r["slot"] for r in body["rows"]]
        assert slots == [
            "title",
            "statement_of_responsibility",
            "place_of_publication",
            "publisher",
            "lithographer",
        ]

    def test_record_view_rejects_non_manifestation(self, loaded):
        assert loaded.get("/record", params={"iri": P1.value}).status_code == 422

    def test_search(self, loaded):
        body = loaded.get("/search", params={"q": "london"}).json()
        assert {h["value"] for h in body["hits"]} == {"London", "History of London"}
        exact = loaded.get("/search", params={"q": "London", "mode": "exact"}).json()
        assert [h["value"] for h in exact["hits"]] == ["London"]

    def test_search_validates_input(self, loaded):
        assert loaded.get("/search", params={"q": "x", "mode": "bad"}).status_code == 422
        assert loaded.get("/search", params={"q": ""}).status_code == 422

    def test_export_matches_library_bytes(self, loaded, merged):
        from nomengraph import export_ntriples, export_turtle

        nt = loaded.get("/export", params={"format": "ntriples"})
        assert nt.headers["content-type"].startswith("application/n-triples")
        assert nt.content == export_ntriples(merged.graph)
        ttl = loaded.get("/export", params={"format": "turtle"})
        assert ttl.headers["content-type"].startswith("text/turtle")
        assert ttl.content == export_turtle(merged.graph, namespace=NS)

    def test_export_unknown_format(self, loaded):
        assert loaded.get("/export", params={"format": "xml"}).status_code == 422

    def test_validate_clean(self, loaded):
        body = loaded.get("/validate").json()
        assert body == {"count": 0, "violations": []}

    def test_info_endpoint(self, loaded):
        body = loaded.get("/").json()
        assert body["counts"]["triples"] == 27
        assert body["namespace"] == NS
