"""HTTP surface: lookup, save/conflict, validate, frames, kwic, reports."""

import pytest
from fastapi.testclient import TestClient

from comlex.service import create_app
from comlex.store import LexiconStore

HEAD = "id\tlemma\tpos\tframe\tpreps\tlabels\tflag\tannotator\tsentence\n"

ABANDON_VERB = '(verb :orth "abandon" :subc ((np-pp :pval ("to")) (np)))'
ABANDON_NOUN = '(noun :orth "abandon" :features ((countable :pval ("with"))))'


@pytest.fixture
def store(tmp_path):
    corpus = tmp_path / "corpus"
    corpus.mkdir()
    (corpus / "doc.txt").write_text(
        "They abandoned the ship. She accepts that it failed.", "utf-8"
    )
    return LexiconStore(tmp_path)


@pytest.fixture
def client(store):
    return TestClient(create_app(store))


def put(client, text, lexicon="ann1", expected_version=None, annotator="ann1"):
    return client.put(
        "/entries",
        json={
            "lexicon": lexicon,
            "text": text,
            "expected_version": expected_version,
            "annotator": annotator,
        },
    )


def test_put_then_get_round_trip(client):
    response = put(client, ABANDON_VERB)
    assert response.status_code == 200
    body = response.json()
    assert body["version"] == 1
    assert body["text"] == ABANDON_VERB

    put(client, ABANDON_NOUN)
    response = client.get("/entries/abandon")
    assert response.status_code == 200
    hits = response.json()
    assert [h["pos"] for h in hits] == ["noun", "verb"]
    assert hits[1]["text"] == ABANDON_VERB

    response = client.get("/entries/abandon/noun")
    assert response.status_code == 200
    assert response.json()[0]["text"] == ABANDON_NOUN

    assert client.get("/entries/abandon/adverb").status_code == 404
    assert client.get("/entries/zzz").json() == []


def test_put_version_conflict_includes_server_text(client):
    put(client, ABANDON_VERB)
    response = put(client, '(verb :orth "abandon" :subc ((np)))', expected_version=None)
    assert response.status_code == 409
    detail = response.json()["detail"]
    assert detail["current_version"] == 1
    assert detail["server_text"] == ABANDON_VERB

    response = put(client, '(verb :orth "abandon" :subc ((np)))', expected_version=1)
    assert response.status_code == 200
    assert response.json()["version"] == 2


def test_put_validation_failure(client):
    response = put(client, '(verb :orth "explode" :subc ((no-such-frame)))')
    assert response.status_code == 422
    detail = response.json()["detail"]
    assert any(d["code"] == "unknown-frame" for d in detail["diagnostics"])
    # nothing was stored
    assert client.get("/entries/explode").json() == []


def test_put_parse_error(client):
    assert put(client, "(verb :orth").status_code == 400
    assert put(client, "").status_code == 400
    assert put(client, '(verb :pval "x")').status_code == 422  # missing orth


def test_validate_endpoint(client):
    response = client.post("/validate", json={"text": '(verb :orth "go" :subc ((pp)))'})
    assert response.status_code == 200
    body = response.json()
    assert body["valid"] is False
    assert any(d["code"] == "missing-pval" for d in body["diagnostics"])

    response = client.post("/validate", json={"text": ABANDON_VERB})
    assert response.json()["valid"] is True
    assert response.json()["canonical"] == ABANDON_VERB


def test_frames_endpoints(client):
    frames = client.get("/frames").json()
    names = {f["name"] for f in frames}
    assert {"np", "pp", "np-pp", "intrans", "that-s"} <= names
    pp = client.get("/frames/pp").json()[0]
    assert pp["kind"] == "vp-frame"
    assert pp["requires_pval"] is True
    assert pp["example"]
    assert client.get("/frames/nope").status_code == 404


def test_kwic_endpoint(client):
    response = client.get("/kwic", params={"forms": "abandoned,accepts", "window": 10})
    assert response.status_code == 200
    lines = response.json()
    assert [l["match"] for l in lines] == ["abandoned", "accepts"]
    for line in lines:
        assert line["left"] + line["match"] + line["right"]
    assert client.get("/kwic", params={"forms": " , "}).status_code == 400
    assert client.get("/kwic", params={"forms": "x", "window": -1}).status_code == 400


def test_kwic_without_corpus(tmp_path):
    client = TestClient(create_app(LexiconStore(tmp_path)))
    assert client.get("/kwic", params={"forms": "x"}).status_code == 404


def test_instances_round_trip(client):
    payload = {
        "name": "instances",
        "instances": [
            {"id": "i1", "lemma": "abandon", "pos": "verb", "frame": "np",
             "labels": ["argument"], "annotator": "ann1", "sentence": "s1"},
            {"id": "i2", "lemma": "abandon", "pos": "verb", "frame": "pp",
             "preps": ["from"], "flag": "difficult", "annotator": "ann2",
             "sentence": "s2"},
        ],
    }
    response = client.post("/instances", json=payload)
    assert response.status_code == 200
    assert response.json()["count"] == 2

    got = client.get("/instances").json()
    assert [i["id"] for i in got] == ["i1", "i2"]
    assert client.get("/instances", params={"annotator": "ann2"}).json()[0]["id"] == "i2"
    assert client.get("/instances", params={"lemma": "nothing"}).json() == []

    # duplicate id for the same annotator is rejected atomically
    response = client.post("/instances", json=payload)
    assert response.status_code == 422
    assert len(client.get("/instances").json()) == 2


def test_coverage_report_endpoint(client, store):
    put(client, ABANDON_VERB)
    client.post(
        "/instances",
        json={
            "instances": [
                {"id": "i1", "lemma": "abandon", "pos": "verb", "frame": "np",
                 "annotator": "ann1", "sentence": ""},
                {"id": "i2", "lemma": "abandon", "pos": "verb", "frame": "intrans",
                 "annotator": "ann1", "sentence": ""},
            ]
        },
    )
    payload = client.get("/reports/coverage").json()
    assert set(payload["modes"]) == {"complements-only", "full-strict", "full-pdir"}
    cell = payload["modes"]["complements-only"]["per_annotator"]["ann1"]
    assert cell == {"covered": 1, "total": 2, "percent": 50}
    misses = payload["modes"]["complements-only"]["misses"]
    assert misses == [{"id": "i2", "reason": "frame-absent"}]

    single = client.get("/reports/coverage", params={"mode": "full-strict"}).json()
    assert list(single["modes"]) == ["full-strict"]
    assert client.get("/reports/coverage", params={"mode": "nope"}).status_code == 400


def test_coverage_report_requires_data(tmp_path, client):
    # no lexicons at all
    bare = TestClient(create_app(LexiconStore(tmp_path / "empty")))
    assert bare.get("/reports/coverage").status_code == 404
    # lexicons but no instances
    put(client, ABANDON_VERB)
    assert client.get("/reports/coverage").status_code == 404


def test_agreement_report_endpoint(client):
    rows = []
    for k in range(10):
        labels = ["a"] if k else ["a"]
        rows.append({"id": f"i{k}", "lemma": "abandon", "pos": "verb", "frame": "np",
                     "labels": ["argument"], "annotator": "ann1", "sentence": ""})
        rows.append({"id": f"i{k}", "lemma": "abandon", "pos": "verb", "frame": "np",
                     "labels": ["argument" if k else "adjunct"], "annotator": "ann2",
                     "sentence": ""})
    client.post("/instances", json={"instances": rows})
    payload = client.get("/reports/agreement", params={"a": "ann1", "b": "ann2"}).json()
    assert payload["overall_rate"] == 0.9
    assert payload["n_instances"] == 10
    assert payload["a"] == "ann1"
    assert client.get("/reports/agreement",
                      params={"a": "ann1", "b": "ghost"}).status_code == 404


def test_cors_headers_present(client):
    response = client.get("/frames", headers={"Origin": "http://localhost:5173"})
    assert response.headers.get("access-control-allow-origin") == "*"
