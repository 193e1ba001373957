import json

import pytest
from fastapi.testclient import TestClient

from peernudge.audit import AuditLog
from peernudge.datagen import make_message_pool
from peernudge.encoding import KeywordSet
from peernudge.matching import FEATURE_NAMES, GroupModel
from peernudge.pipeline import Pipeline, Status
from peernudge.service import PipelineRunner, create_app
from peernudge.sources import FlakySink, ListSource

from tests.test_pipeline import FakeClock, StubClassifier, tweet


@pytest.fixture
def stack():
    """Pipeline + runner + client; the runner thread is not started, so
    commands execute synchronously on the test thread."""
    clock = FakeClock()
    group_model = GroupModel.build(make_message_pool(40, seed=7), seed=7)
    sink = FlakySink(0)
    pipeline = Pipeline(
        keywords=KeywordSet(["vape", "hookah", "cigarette"]),
        classifier=StubClassifier(),
        group_model=group_model,
        source=ListSource([]),
        sink=sink,
        audit_log=AuditLog(),
        clock=clock.now,
        epoch_clock=clock.time,
    )
    runner = PipelineRunner(pipeline, scan_interval_secs=3600)
    app = create_app(runner, group_model=group_model, long_poll_timeout=0.2)
    client = TestClient(app)
    return pipeline, runner, client, sink


def seed_candidates(pipeline, texts):
    for i, text in enumerate(texts):
        pipeline.source.push(tweet(f"t{i}", text))
    pipeline.set_scanner(True)
    pipeline.tick()


class TestStatus:
    def test_fresh_boot(self, stack):
        _, _, client, _ = stack
        body = client.get("/status").json()
        assert body["scanner_enabled"] is False
        assert body["model_loaded"] is True
        assert all(v == 0 for v in body["counts"].values())
        assert set(body["counts"]) == {s.value for s in Status}
        assert body["uptime_secs"] >= 0

    def test_counts_after_approval(self, stack):
        pipeline, _, client, sink = stack
        seed_candidates(pipeline, ["vape fest"])
        client.post("/candidates/t0/approve", json={"operator_id": "op"})
        counts = client.get("/status").json()["counts"]
        assert counts["posted"] == 1
        assert len(sink.delivered) == 1


class TestScannerEndpoint:
    def test_toggle(self, stack):
        _, _, client, _ = stack
        resp = client.post("/scanner", json={"enabled": True})
        assert resp.status_code == 200
        assert resp.json()["scanner_enabled"] is True
        repeat = client.post("/scanner", json={"enabled": True})
        assert repeat.status_code == 200

    def test_non_boolean_rejected(self, stack):
        _, _, client, _ = stack
        resp = client.post("/scanner", json={"enabled": "yes"})
        assert resp.status_code == 400
        body = resp.json()
        assert body["code"] == "bad_request"
        assert set(body) == {"code", "message", "details"}

    def test_missing_body_rejected(self, stack):
        _, _, client, _ = stack
        resp = client.post("/scanner", content=b"not json",
                           headers={"content-type": "application/json"})
        assert resp.status_code == 400


class TestCandidates:
    def test_empty_store(self, stack):
        _, _, client, _ = stack
        body = client.get("/candidates").json()
        assert body["items"] == [] and body["total"] == 0

    def test_status_filter(self, stack):
        pipeline, _, client, _ = stack
        seed_candidates(pipeline, ["vape fest", "boring news", "hookah time"])
        awaiting = client.get("/candidates",
                              params={"status": "awaiting_approval"}).json()
        assert {i["pending_id"] for i in awaiting["items"]} == {"t0", "t2"}
        assert all(i["status"] == "awaiting_approval" for i in awaiting["items"])

    def test_unknown_status_value(self, stack):
        _, _, client, _ = stack
        resp = client.get("/candidates", params={"status": "nonsense"})
        assert resp.status_code == 400
        assert resp.json()["code"] == "bad_request"

    def test_paging(self, stack):
        pipeline, _, client, _ = stack
        seed_candidates(pipeline, ["vape one", "vape two", "vape three"])
        page = client.get("/candidates", params={"limit": 2, "offset": 1}).json()
        assert page["total"] == 3
        assert len(page["items"]) == 2
        assert page["items"][0]["pending_id"] == "t1"

    def test_response_roundtrips(self, stack):
        pipeline, _, client, _ = stack
        seed_candidates(pipeline, ["vape fest"])
        body = client.get("/candidates").json()
        assert json.loads(json.dumps(body)) == body


class TestApproveReject:
    def test_approve_flow(self, stack):
        pipeline, _, client, sink = stack
        seed_candidates(pipeline, ["vape fest"])
        resp = client.post("/candidates/t0/approve", json={"operator_id": "op"})
        assert resp.status_code == 200
        assert resp.json()["status"] == "posted"
        assert len(sink.delivered) == 1

    def test_double_approve_conflicts(self, stack):
        pipeline, _, client, _ = stack
        seed_candidates(pipeline, ["vape fest"])
        client.post("/candidates/t0/approve")
        resp = client.post("/candidates/t0/approve")
        assert resp.status_code == 409
        assert resp.json()["code"] == "invalid_transition"

    def test_reject(self, stack):
        pipeline, _, client, _ = stack
        seed_candidates(pipeline, ["vape fest"])
        resp = client.post("/candidates/t0/reject")
        assert resp.status_code == 200
        assert resp.json()["status"] == "rejected"

    def test_unknown_id_404(self, stack):
        _, _, client, _ = stack
        resp = client.post("/candidates/ghost/approve")
        assert resp.status_code == 404
        assert resp.json()["code"] == "not_found"


class TestIntervention:
    def test_classified_candidate(self, stack):
        pipeline, _, client, _ = stack
        seed_candidates(pipeline, ["vape fest"])
        body = client.get("/candidates/t0/intervention").json()
        assert body["bin_id"] is not None
        assert body["proposed_message"]["text"]
        assert body["bin_path"], "path should not be empty"
        for step in body["bin_path"]:
            assert step["feature_name"] in FEATURE_NAMES

    def test_discarded_candidate_conflicts(self, stack):
        pipeline, _, client, _ = stack
        seed_candidates(pipeline, ["cigarette tax news"])  # low confidence
        resp = client.get("/candidates/t0/intervention")
        assert resp.status_code == 409

    def test_unknown_id(self, stack):
        _, _, client, _ = stack
        assert client.get("/candidates/ghost/intervention").status_code == 404


class TestModelTree:
    def test_tree_shape(self, stack):
        pipeline, _, client, _ = stack
        body = client.get("/model/tree").json()
        assert body["feature_names"] == list(FEATURE_NAMES)

        def count_leaves(node):
            if "probs" in node:
                return 1
            return count_leaves(node["left"]) + count_leaves(node["right"])

        assert count_leaves(body["tree"]) == len(body["bins"])

    def test_no_model_conflicts(self):
        clock = FakeClock()
        pipeline = Pipeline(
            keywords=KeywordSet(["vape"]), classifier=None, group_model=None,
            source=ListSource([]), sink=FlakySink(0), audit_log=AuditLog(),
            clock=clock.now, epoch_clock=clock.time,
        )
        runner = PipelineRunner(pipeline, scan_interval_secs=3600)
        client = TestClient(create_app(runner, group_model=None))
        resp = client.get("/model/tree")
        assert resp.status_code == 409
        assert resp.json()["code"] == "model_not_loaded"


class TestUpdates:
    def test_returns_events_after_cursor(self, stack):
        pipeline, _, client, _ = stack
        seed_candidates(pipeline, ["vape fest"])
        body = client.get("/candidates/updates", params={"since": 0}).json()
        assert body["latest_event_id"] >= 1
        assert body["events"][0]["event_id"] == 1
        kinds = [e["kind"] for e in body["events"]]
        assert "scanned" in kinds and "matched" in kinds

    def test_times_out_empty(self, stack):
        pipeline, _, client, _ = stack
        last = pipeline.audit.last_event_id
        body = client.get("/candidates/updates",
                          params={"since": last, "timeout_secs": 0.05}).json()
        assert body["events"] == []
