import random

import pytest
from fastapi.testclient import TestClient

from conftest import make_source_documents, make_synthetic_corpus, PERSONNEL_OVERRIDES
from triagekit.pipeline import PipelineConfig, train_all
from triagekit.service import EventLog, TriageService, create_app, word_changes


class FakeClock:
    def __init__(self, start=1_000.0):
        self.value = start

    def __call__(self):
        return self.value

    def advance(self, seconds):
        self.value += seconds


def make_service(tmp_path=None, bundle=None, clock=None, corpus=None):
    corpus = corpus or make_synthetic_corpus(n_escalated=4, n_normal=4, seed=11)
    log = EventLog(tmp_path / "events.jsonl") if tmp_path else EventLog(None)
    service = TriageService(
        requests=corpus, bundle=bundle, event_log=log, clock=clock or FakeClock()
    )
    return service, corpus


@pytest.fixture(scope="module")
def bundle():
    corpus = make_synthetic_corpus(seed=5)
    return train_all(
        corpus, make_source_documents(), PERSONNEL_OVERRIDES, PipelineConfig(), seed=42
    )


class TestWordDiff:
    def test_single_substitution(self):
        assert word_changes("a b c", "a x c") == 1

    def test_insert_delete(self):
        assert word_changes("a b", "a b c") == 1
        assert word_changes("a b c", "a c") == 1

    def test_identical_zero(self):
        assert word_changes("same text here", "same text here") == 0

    def test_matches_dp_oracle(self):
        def oracle(a, b):
            a, b = a.split(), b.split()
            dp = [[0] * (len(b) + 1) for _ in range(len(a) + 1)]
            for i in range(len(a) + 1):
                dp[i][0] = i
            for j in range(len(b) + 1):
                dp[0][j] = j
            for i in range(1, len(a) + 1):
                for j in range(1, len(b) + 1):
                    dp[i][j] = min(
                        dp[i - 1][j] + 1,
                        dp[i][j - 1] + 1,
                        dp[i - 1][j - 1] + (a[i - 1] != b[j - 1]),
                    )
            return dp[len(a)][len(b)]

        rng = random.Random(77)
        words = ["alpha", "beta", "gamma", "delta"]
        for _ in range(200):
            a = " ".join(rng.choice(words) for _ in range(rng.randrange(0, 12)))
            b = " ".join(rng.choice(words) for _ in range(rng.randrange(0, 12)))
            assert word_changes(a, b) == oracle(a, b)

    def test_list_values(self):
        assert word_changes([[0, 0], [0, 1]], [[0, 0], [0, 2]]) == 1


class TestSessionFlow:
    def test_escalation_moves_request_to_pm_queue(self, tmp_path):
        service, corpus = make_service(tmp_path)
        client = TestClient(create_app(service))
        rid = corpus[0].id
        assert {"id": rid, "subject": corpus[0].subject} in client.get("/requests").json()

        opened = client.post(
            "/sessions", json={"role": "crm_expert", "request_id": rid, "mode": "manual", "user": "u1"}
        )
        assert opened.status_code == 201
        session_id = opened.json()["session_id"]

        submitted = client.post(
            f"/sessions/{session_id}/submit",
            json={"decisions": {"escalate": True, "summary_sentences": [[0, 0]]}},
        )
        assert submitted.status_code == 200
        assert submitted.json()["request_state"] == "pm"
        pm_queue = client.get("/requests", params={"state": "pm"}).json()
        assert any(item["id"] == rid for item in pm_queue)

    def test_non_escalation_goes_done(self, tmp_path):
        service, corpus = make_service(tmp_path)
        client = TestClient(create_app(service))
        rid = corpus[0].id
        sid = client.post(
            "/sessions", json={"role": "crm_expert", "request_id": rid, "mode": "manual"}
        ).json()["session_id"]
        client.post(f"/sessions/{sid}/submit", json={"decisions": {"escalate": False}})
        assert client.get("/requests", params={"state": "done"}).json()[0]["id"] == rid

    def test_pm_submission_closes_request(self, tmp_path):
        service, corpus = make_service(tmp_path)
        client = TestClient(create_app(service))
        rid = corpus[0].id
        sid = client.post(
            "/sessions", json={"role": "crm_expert", "request_id": rid, "mode": "manual"}
        ).json()["session_id"]
        client.post(f"/sessions/{sid}/submit", json={"decisions": {"escalate": True}})
        pm_sid = client.post(
            "/sessions", json={"role": "project_manager", "request_id": rid, "mode": "manual"}
        ).json()["session_id"]
        done = client.post(
            f"/sessions/{pm_sid}/submit",
            json={"decisions": {"priority": "Major", "title": "Fix crash", "assignee": "dev"}},
        )
        assert done.json()["request_state"] == "done"

    def test_404_unknown_request(self, tmp_path):
        service, _ = make_service(tmp_path)
        client = TestClient(create_app(service))
        response = client.post(
            "/sessions", json={"role": "crm_expert", "request_id": "nope", "mode": "manual"}
        )
        assert response.status_code == 404

    def test_409_duplicate_open_session(self, tmp_path):
        service, corpus = make_service(tmp_path)
        client = TestClient(create_app(service))
        rid = corpus[0].id
        body = {"role": "crm_expert", "request_id": rid, "mode": "manual", "user": "u1"}
        assert client.post("/sessions", json=body).status_code == 201
        assert client.post("/sessions", json=body).status_code == 409

    def test_422_invalid_payloads(self, tmp_path):
        service, corpus = make_service(tmp_path)
        client = TestClient(create_app(service))
        rid = corpus[0].id
        sid = client.post(
            "/sessions", json={"role": "crm_expert", "request_id": rid, "mode": "manual"}
        ).json()["session_id"]
        # missing escalate decision for a CRM submission
        assert client.post(f"/sessions/{sid}/submit", json={"decisions": {}}).status_code == 422
        # unknown decision field
        assert (
            client.post(
                f"/sessions/{sid}/submit", json={"decisions": {"escalate": True, "zzz": 1}}
            ).status_code
            == 422
        )
        # invalid priority
        assert (
            client.post(
                f"/sessions/{sid}/submit",
                json={"decisions": {"escalate": True, "priority": "Urgent"}},
            ).status_code
            == 422
        )
        # 12-word title
        assert (
            client.post(
                f"/sessions/{sid}/submit",
                json={
                    "decisions": {
                        "escalate": True,
                        "title": "a b c d e f g h i j k l",
                    }
                },
            ).status_code
            == 422
        )
        # invalid edit field
        assert (
            client.post(
                f"/sessions/{sid}/submit",
                json={"decisions": {"escalate": True}, "edits": [{"field": "bogus"}]},
            ).status_code
            == 422
        )

    def test_409_double_submit(self, tmp_path):
        service, corpus = make_service(tmp_path)
        client = TestClient(create_app(service))
        rid = corpus[0].id
        sid = client.post(
            "/sessions", json={"role": "crm_expert", "request_id": rid, "mode": "manual"}
        ).json()["session_id"]
        assert (
            client.post(f"/sessions/{sid}/submit", json={"decisions": {"escalate": False}}).status_code
            == 200
        )
        assert (
            client.post(f"/sessions/{sid}/submit", json={"decisions": {"escalate": False}}).status_code
            == 409
        )


class TestSuggestionModes:
    def test_manual_mode_transfers_no_suggestion_bytes(self, tmp_path, bundle):
        service, corpus = make_service(tmp_path, bundle=bundle)
        client = TestClient(create_app(service))
        rid = corpus[0].id
        sid = client.post(
            "/sessions", json={"role": "crm_expert", "request_id": rid, "mode": "manual"}
        ).json()["session_id"]
        payload = client.get(f"/requests/{rid}/suggestion", params={"session_id": sid}).json()
        assert "suggestion" not in payload
        assert "suggestion" not in str(payload)
        assert payload["conversation"]

    def test_assisted_mode_returns_suggestion(self, tmp_path, bundle):
        service, corpus = make_service(tmp_path, bundle=bundle)
        client = TestClient(create_app(service))
        rid = corpus[0].id
        sid = client.post(
            "/sessions", json={"role": "crm_expert", "request_id": rid, "mode": "assisted"}
        ).json()["session_id"]
        payload = client.get(f"/requests/{rid}/suggestion", params={"session_id": sid}).json()
        assert "suggestion" in payload
        assert payload["suggestion"]["request_id"] == rid
        assert "escalate" in payload["suggestion"]

    def test_assisted_without_bundle_conflicts(self, tmp_path):
        service, corpus = make_service(tmp_path, bundle=None)
        client = TestClient(create_app(service))
        rid = corpus[0].id
        sid = client.post(
            "/sessions", json={"role": "crm_expert", "request_id": rid, "mode": "assisted"}
        ).json()["session_id"]
        response = client.get(f"/requests/{rid}/suggestion", params={"session_id": sid})
        assert response.status_code == 409


def drive_sessions(client, clock, rid_a, rid_b):
    """Two manual + two assisted CRM sessions with fixed durations, plus
    PM sessions, producing known analytics."""
    # manual escalation 120 s, assisted 60 s on two requests each
    for rid, mode, duration, user in (
        (rid_a, "manual", 120.0, "crm1"),
        (rid_b, "assisted", 60.0, "crm2"),
    ):
        sid = client.post(
            "/sessions",
            json={"role": "crm_expert", "request_id": rid, "mode": mode, "user": user},
        ).json()["session_id"]
        clock.advance(duration)
        client.post(
            f"/sessions/{sid}/submit",
            json={"decisions": {"escalate": True}, "client_active_ms": int(duration * 1000)},
        )
    # PM: manual 300 s on A, assisted 180 s on B
    for rid, mode, duration, user in (
        (rid_a, "manual", 300.0, "pm1"),
        (rid_b, "assisted", 180.0, "pm2"),
    ):
        sid = client.post(
            "/sessions",
            json={"role": "project_manager", "request_id": rid, "mode": mode, "user": user},
        ).json()["session_id"]
        clock.advance(duration)
        client.post(
            f"/sessions/{sid}/submit",
            json={
                "decisions": {"priority": "Major", "title": "Fix the crash", "assignee": "dev"},
                "edits": [{"field": "content", "before": "a b c", "after": "a x c"}],
            },
        )


class TestAnalytics:
    def test_timing_report_exact_values(self, tmp_path):
        clock = FakeClock()
        service, corpus = make_service(tmp_path, clock=clock)
        client = TestClient(create_app(service))
        rid_a, rid_b = corpus[0].id, corpus[1].id
        drive_sessions(client, clock, rid_a, rid_b)

        timing = client.get("/analytics/timing").json()
        esc = timing["metrics"]["escalation_time"]
        assert esc["by_mode"]["manual"]["mean_seconds"] == 120.0
        assert esc["by_mode"]["assisted"]["mean_seconds"] == 60.0
        assert esc["mean_saving_seconds"] == 60.0
        dec = timing["metrics"]["decision_time"]
        assert dec["by_mode"]["manual"]["median_seconds"] == 300.0
        assert dec["mean_saving_seconds"] == 120.0
        # share: (120 + 60) / (120 + 60 + 300 + 180)
        assert timing["escalation_share"] == pytest.approx(180.0 / 660.0)
        assert timing["per_user_total_seconds"]["crm1"] == 120.0
        # every closed session has a nonnegative duration
        assert all(s.duration_seconds >= 0 for s in service.closed)

    def test_edits_report_buckets(self, tmp_path):
        clock = FakeClock()
        service, corpus = make_service(tmp_path, clock=clock)
        client = TestClient(create_app(service))
        rid_a, rid_b = corpus[0].id, corpus[1].id
        drive_sessions(client, clock, rid_a, rid_b)
        # an untouched PM submission on a third request
        rid_c = corpus[2].id
        sid = client.post(
            "/sessions", json={"role": "crm_expert", "request_id": rid_c, "mode": "manual", "user": "crm3"},
        ).json()["session_id"]
        client.post(f"/sessions/{sid}/submit", json={"decisions": {"escalate": True}})
        sid = client.post(
            "/sessions",
            json={"role": "project_manager", "request_id": rid_c, "mode": "assisted", "user": "pm3"},
        ).json()["session_id"]
        client.post(f"/sessions/{sid}/submit", json={"decisions": {"priority": "Major"}})

        edits = client.get("/analytics/edits").json()
        words = edits["changed_words"]
        assert words["counts"].get("1") == 2  # the two 1-word content edits
        assert words["counts"].get("0") == 1  # the untouched ticket
        assert words["zero_change_fraction"] == pytest.approx(1 / 3)

    def test_reaggregation_from_raw_log_is_identical(self, tmp_path):
        clock = FakeClock()
        service, corpus = make_service(tmp_path, clock=clock)
        client = TestClient(create_app(service))
        drive_sessions(client, clock, corpus[0].id, corpus[1].id)
        served_timing = service.timing_analytics()
        served_edits = service.edits_analytics()

        replayed = TriageService(
            requests=corpus, bundle=None, event_log=EventLog.read(tmp_path / "events.jsonl")
        )
        assert replayed.timing_analytics() == served_timing
        assert replayed.edits_analytics() == served_edits

    def test_first_interaction_recorded(self, tmp_path):
        clock = FakeClock()
        service, corpus = make_service(tmp_path, clock=clock)
        client = TestClient(create_app(service))
        sid = client.post(
            "/sessions", json={"role": "crm_expert", "request_id": corpus[0].id, "mode": "manual"}
        ).json()["session_id"]
        clock.advance(5)
        client.post(f"/sessions/{sid}/interaction")
        assert service.sessions[sid]["first_interaction_at"] == service.sessions[sid]["started_at"] + 5
