from __future__ import annotations

from pathlib import Path

import pytest
from fastapi.testclient import TestClient

from accucheck.gsml import parse_gsml, parse_gsml_file
from accucheck.service import SessionStore, create_app

DATA = Path(__file__).resolve().parent.parent / "data" / "figure1"


@pytest.fixture()
def store(figure1_texts, figure1_game, tmp_path):
    suggestions = parse_gsml_file(DATA / "suggestions.csv", figure1_texts)
    return SessionStore(
        figure1_texts,
        suggestions,
        {"figure1": figure1_game, "figure1_correct": figure1_game},
        tmp_path / "state",
    )


@pytest.fixture()
def client(store):
    return TestClient(create_app(store))


def _create(client, docs=("figure1",)):
    response = client.post(
        "/sessions", json={"annotator_id": "ann-1", "doc_ids": list(docs)}
    )
    assert response.status_code == 201
    return response.json()


def _edit(client, sid, doc, version, command, annotator="ann-1"):
    return client.post(
        f"/sessions/{sid}/docs/{doc}/edits",
        json={"annotator_id": annotator, "version": version, "command": command},
    )


def test_healthz(client):
    assert client.get("/healthz").json()["status"] == "ok"


def test_create_session_lists_pending_docs(client):
    payload = _create(client, ("figure1", "figure1_correct"))
    assert payload["docs"]["figure1"] == {"status": "pending", "version": 0}
    assert len(payload["docs"]) == 2


def test_create_session_without_suggestions_is_fine(
    figure1_texts, figure1_game, tmp_path
):
    store = SessionStore(
        figure1_texts, parse_gsml("TEXT_ID,START_IDX,END_IDX,CATEGORY,NOTE\n"),
        {}, tmp_path / "s",
    )
    client = TestClient(create_app(store))
    payload = _create(client)
    doc = client.get(f"/sessions/{payload['session_id']}/docs/figure1").json()
    assert doc["suggestions"] == []


def test_duplicate_doc_id_rejected(client):
    response = client.post(
        "/sessions", json={"annotator_id": "a", "doc_ids": ["figure1", "figure1"]}
    )
    assert response.status_code == 422


def test_unknown_doc_rejected(client):
    response = client.post(
        "/sessions", json={"annotator_id": "a", "doc_ids": ["nope"]}
    )
    assert response.status_code == 404


def test_doc_payload_has_tokens_suggestions_and_game(client):
    sid = _create(client)["session_id"]
    doc = client.get(f"/sessions/{sid}/docs/figure1").json()
    assert doc["tokens"][17] == "Monday"
    assert len(doc["suggestions"]) == 8
    assert doc["game"]["home"]["nickname"] == "Suns"
    assert doc["game"]["home"]["halftime_points"] == 52
    assert doc["game"]["visitor"]["points_leaders"] == ["Mike Conley"]
    assert {"name": "Zach Randolph", "status": "double-double"} in doc["game"]["doubles"]


def test_accept_pre_copies_suggestion_into_working(client):
    sid = _create(client)["session_id"]
    response = _edit(client, sid, "figure1", 0,
                     {"kind": "accept_pre", "suggestion_id": 0})
    assert response.status_code == 200
    payload = response.json()
    assert payload["version"] == 1
    (entry,) = payload["working"]
    assert (entry["start"], entry["end"], entry["category"]) == (6, 6, "NUMBER")
    assert entry["from_suggestion"] == 0


def test_double_accept_is_idempotent(client):
    sid = _create(client)["session_id"]
    _edit(client, sid, "figure1", 0, {"kind": "accept_pre", "suggestion_id": 3})
    response = _edit(client, sid, "figure1", 1,
                     {"kind": "accept_pre", "suggestion_id": 3})
    assert response.status_code == 200
    assert len(response.json()["working"]) == 1


def test_overlapping_add_rejected_atomically(client):
    sid = _create(client)["session_id"]
    _edit(client, sid, "figure1", 0,
          {"kind": "add", "start": 6, "end": 6, "category": "NUMBER"})
    before = client.get(f"/sessions/{sid}/docs/figure1").json()
    response = _edit(client, sid, "figure1", 1,
                     {"kind": "add", "start": 5, "end": 7, "category": "WORD"})
    assert response.status_code == 422
    after = client.get(f"/sessions/{sid}/docs/figure1").json()
    assert after["working"] == before["working"]
    assert after["version"] == before["version"]


def test_set_category_updates_entry(client):
    sid = _create(client)["session_id"]
    _edit(client, sid, "figure1", 0, {"kind": "accept_pre", "suggestion_id": 0})
    payload = _edit(client, sid, "figure1", 1, {
        "kind": "set_category", "mistake_id": 1, "category": "CONTEXT",
    }).json()
    assert payload["working"][0]["category"] == "CONTEXT"


def test_stale_write_rejected(client):
    sid = _create(client)["session_id"]
    first = _edit(client, sid, "figure1", 0,
                  {"kind": "add", "start": 0, "end": 0, "category": "WORD"})
    second = _edit(client, sid, "figure1", 0,
                   {"kind": "add", "start": 2, "end": 2, "category": "WORD"})
    assert first.status_code == 200
    assert second.status_code == 409
    assert "stale" in second.json()["detail"]


def test_done_doc_is_immutable_until_reopened(client):
    sid = _create(client)["session_id"]
    client.post(f"/sessions/{sid}/docs/figure1/status",
                json={"annotator_id": "ann-1", "version": 0, "status": "done"})
    blocked = _edit(client, sid, "figure1", 1,
                    {"kind": "add", "start": 0, "end": 0, "category": "WORD"})
    assert blocked.status_code == 409
    client.post(f"/sessions/{sid}/docs/figure1/status",
                json={"annotator_id": "ann-1", "version": 1, "status": "in_progress"})
    allowed = _edit(client, sid, "figure1", 2,
                    {"kind": "add", "start": 0, "end": 0, "category": "WORD"})
    assert allowed.status_code == 200


def test_lease_blocks_second_writer(client):
    sid = _create(client)["session_id"]
    response = _edit(client, sid, "figure1", 0,
                     {"kind": "add", "start": 0, "end": 0, "category": "WORD"},
                     annotator="someone-else")
    assert response.status_code == 423


def test_export_accept_all_round_trips(client, figure1_texts):
    suggestions = parse_gsml_file(DATA / "suggestions.csv", figure1_texts)
    sid = _create(client)["session_id"]
    for i in range(len(suggestions)):
        response = _edit(client, sid, "figure1", i,
                         {"kind": "accept_pre", "suggestion_id": i})
        assert response.status_code == 200
    exported = client.post(f"/sessions/{sid}/export")
    assert exported.status_code == 200
    parsed = parse_gsml(exported.text, figure1_texts)
    assert parsed == suggestions


def test_export_untouched_session_is_header_only(client):
    sid = _create(client)["session_id"]
    exported = client.post(f"/sessions/{sid}/export").text
    assert exported.strip() == "TEXT_ID,START_IDX,END_IDX,CATEGORY,NOTE"


def test_metrics_acceptance_rate(client):
    sid = _create(client)["session_id"]
    for i in range(6):
        _edit(client, sid, "figure1", i, {"kind": "accept_pre", "suggestion_id": i})
    client.post(f"/sessions/{sid}/docs/figure1/status",
                json={"annotator_id": "ann-1", "version": 6, "status": "done"})
    metrics = client.get(f"/sessions/{sid}").json()["metrics"]
    assert metrics["docs_done"] == 1
    assert metrics["suggestion_acceptance"] == pytest.approx(6 / 8)
    assert metrics["edits"] == 6


def test_metrics_without_suggestions_is_undefined(
    figure1_texts, figure1_game, tmp_path
):
    store = SessionStore(
        figure1_texts, parse_gsml("TEXT_ID,START_IDX,END_IDX,CATEGORY,NOTE\n"),
        {}, tmp_path / "s",
    )
    client = TestClient(create_app(store))
    sid = _create(client)["session_id"]
    client.post(f"/sessions/{sid}/docs/figure1/status",
                json={"annotator_id": "ann-1", "version": 0, "status": "done"})
    assert client.get(f"/sessions/{sid}").json()["metrics"]["suggestion_acceptance"] is None


def test_restart_replays_acknowledged_edits(figure1_texts, figure1_game, tmp_path):
    suggestions = parse_gsml_file(DATA / "suggestions.csv", figure1_texts)
    state = tmp_path / "state"
    store = SessionStore(figure1_texts, suggestions, {}, state)
    client = TestClient(create_app(store))
    sid = _create(client)["session_id"]
    _edit(client, sid, "figure1", 0, {"kind": "accept_pre", "suggestion_id": 0})
    _edit(client, sid, "figure1", 1,
          {"kind": "add", "start": 34, "end": 34, "category": "WORD",
           "note": "fuzzy"})
    _edit(client, sid, "figure1", 2, {"kind": "remove", "mistake_id": 1})
    before = client.get(f"/sessions/{sid}/docs/figure1").json()

    reborn = SessionStore(figure1_texts, suggestions, {}, state)
    client2 = TestClient(create_app(reborn))
    after = client2.get(f"/sessions/{sid}/docs/figure1").json()
    assert after["version"] == before["version"] == 3
    assert after["working"] == before["working"]
    assert [w["start"] for w in after["working"]] == [34]


def test_pre_annotations_never_mutated(client, store):
    sid = _create(client)["session_id"]
    before = [dict(s) for s in store.suggestions["figure1"]]
    _edit(client, sid, "figure1", 0, {"kind": "accept_pre", "suggestion_id": 2})
    _edit(client, sid, "figure1", 1, {"kind": "reject_pre", "suggestion_id": 4})
    _edit(client, sid, "figure1", 2,
          {"kind": "add", "start": 0, "end": 1, "category": "NAME"})
    assert store.suggestions["figure1"] == before
