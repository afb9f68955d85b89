import json
from dataclasses import replace

import pytest

from conftest import PERSONNEL_OVERRIDES, make_source_documents, make_synthetic_corpus
from triagekit.corpus import PRIORITY_LEVELS, UserRequest, Utterance
from triagekit.errors import CorruptArtifact, VersionMismatch
from triagekit.pipeline import (
    PipelineConfig,
    TrainStageError,
    load_bundle,
    process_request,
    save_bundle,
    train_all,
)


@pytest.fixture(scope="module")
def trained_bundle():
    corpus = make_synthetic_corpus(with_gold_summaries=True, seed=5)
    return train_all(
        corpus,
        make_source_documents(),
        PERSONNEL_OVERRIDES,
        config=PipelineConfig(),
        seed=42,
    ), corpus


def crash_request(rid="Q1", brand="EMR"):
    return UserRequest(
        id=rid,
        conversation=(
            Utterance(
                "customer",
                "The application crashes when I save patient records. "
                "It crashes again right after the upload finishes. "
                "We reviewed the billing settings yesterday.",
                0,
            ),
        ),
        subject="application crash",
        requester="Jane Doe",
        brand_name=brand,
        organization="Crowfoot clinic",
    )


def calm_request(rid="Q2"):
    return UserRequest(
        id=rid,
        conversation=(
            Utterance(
                "customer",
                "How do I export the billing summary? The billing report downloaded without trouble.",
                0,
            ),
        ),
        subject="billing question",
        requester="Jane Doe",
        brand_name="Portal",
        organization="Crowfoot clinic",
    )


class TestTrainAll:
    def test_uses_supervised_when_gold_present(self, trained_bundle):
        bundle, _ = trained_bundle
        assert bundle.summarizer_method == "supervised"
        assert bundle.sentence_model is not None

    def test_textrank_fallback_without_gold(self):
        corpus = make_synthetic_corpus(seed=6)
        bundle = train_all(corpus, seed=7)
        assert bundle.summarizer_method == "textrank"
        assert bundle.flags.get("summarizer_fallback") == "textrank"

    def test_missing_assignees_degrade(self):
        corpus = make_synthetic_corpus(seed=8)
        stripped = []
        for r in corpus:
            if r.ticket is not None:
                stripped.append(
                    replace(r, assignee=None, ticket=replace(r.ticket, assignee="dev_only"))
                )
            else:
                stripped.append(replace(r, assignee=None))
        bundle = train_all(stripped, seed=9)
        assert bundle.predictors.assignment is None
        assert bundle.flags.get("assignment_model") == "absent"
        suggestion = process_request(bundle, crash_request())
        if suggestion.escalate:
            assert suggestion.ticket.assignee == ""
            assert suggestion.assignment_confidence == 0.0

    def test_stage_error_names_stage(self):
        corpus = [r for r in make_synthetic_corpus(seed=3) if r.escalated]
        with pytest.raises(TrainStageError) as exc:
            train_all(corpus, seed=1)
        assert exc.value.stage == "escalation"


class TestProcessRequest:
    def test_non_escalating_request(self, trained_bundle):
        bundle, _ = trained_bundle
        suggestion = process_request(bundle, calm_request())
        assert suggestion.escalate is False
        assert suggestion.ticket is None
        assert suggestion.error is None

    def test_escalating_request_full_ticket(self, trained_bundle):
        bundle, _ = trained_bundle
        suggestion = process_request(bundle, crash_request())
        assert suggestion.escalate is True
        ticket = suggestion.ticket
        assert ticket is not None
        assert len(ticket.title.split()) <= 11
        assert ticket.content.startswith("In the EMR system; ")
        assert ticket.priority in PRIORITY_LEVELS
        assert 0.0 <= suggestion.escalation_confidence <= 1.0

    def test_requester_role_rewritten(self, trained_bundle):
        bundle, _ = trained_bundle
        suggestion = process_request(bundle, crash_request())
        if suggestion.ticket and " I " in " " + crash_request().conversation[0].text:
            assert " I " not in f" {suggestion.ticket.content} "
            assert "an administrator" in suggestion.ticket.content

    def test_empty_conversation_yields_error_record(self, trained_bundle):
        bundle, _ = trained_bundle
        hollow = UserRequest(
            id="Q9",
            conversation=(Utterance("customer", "...", 0),),
            subject="",
        )
        suggestion = process_request(bundle, hollow)
        assert suggestion.error is not None
        assert suggestion.error["step"] == "summarize"
        assert suggestion.ticket is None

    def test_deterministic_across_runs(self, trained_bundle):
        bundle, corpus = trained_bundle
        for request in corpus[:10]:
            a = process_request(bundle, request)
            b = process_request(bundle, request)
            assert a.content_json() == b.content_json()

    def test_ticket_iff_escalate(self, trained_bundle):
        bundle, corpus = trained_bundle
        for request in corpus:
            suggestion = process_request(bundle, request)
            if suggestion.error is None:
                assert (suggestion.ticket is not None) == suggestion.escalate

    def test_timings_sum_close_to_total(self, trained_bundle):
        bundle, _ = trained_bundle
        suggestion = process_request(bundle, crash_request())
        steps = sum(v for k, v in suggestion.timings.items() if k != "total")
        total = suggestion.timings["total"]
        assert steps <= total
        assert abs(total - steps) <= 0.05 * total


class TestBundlePersistence:
    def test_save_load_identical_suggestions(self, trained_bundle, tmp_path):
        bundle, corpus = trained_bundle
        save_bundle(bundle, tmp_path / "bundle")
        loaded = load_bundle(tmp_path / "bundle")
        for request in corpus[:20]:
            before = process_request(bundle, request).content_json()
            after = process_request(loaded, request).content_json()
            assert before == after

    def test_tampered_artifact_rejected(self, trained_bundle, tmp_path):
        bundle, _ = trained_bundle
        save_bundle(bundle, tmp_path / "bundle")
        target = tmp_path / "bundle" / "thesaurus.json"
        target.write_text(target.read_text("utf-8") + " ", "utf-8")
        with pytest.raises(CorruptArtifact):
            load_bundle(tmp_path / "bundle")

    def test_future_version_rejected(self, trained_bundle, tmp_path):
        bundle, _ = trained_bundle
        save_bundle(bundle, tmp_path / "bundle")
        manifest_path = tmp_path / "bundle" / "manifest.json"
        manifest = json.loads(manifest_path.read_text("utf-8"))
        manifest["format_version"] = 99
        manifest_path.write_text(json.dumps(manifest), "utf-8")
        with pytest.raises(VersionMismatch):
            load_bundle(tmp_path / "bundle")

    def test_missing_manifest(self, tmp_path):
        (tmp_path / "empty").mkdir()
        with pytest.raises(CorruptArtifact):
            load_bundle(tmp_path / "empty")

    def test_config_round_trip(self):
        config = PipelineConfig(budget=3, escalation_family="naive_bayes")
        assert PipelineConfig.from_dict(config.to_dict()) == config
