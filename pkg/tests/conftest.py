"""Shared synthetic corpora (label-bearing by construction so classifier
behavior is verifiable against the generating rule) and the acceptance
criterion reporter."""

import random

import pytest

ACCEPTANCE_RESULTS: list[tuple[str, bool]] = []


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for name, passed in ACCEPTANCE_RESULTS:
        terminalreporter.write_line(f"[{'PASS' if passed else 'FAIL'}] {name}")

from triagekit.corpus import (
    DevelopmentTicket,
    GoldSummary,
    SourceDocument,
    UserRequest,
    Utterance,
)

BRAND_PRIORITY = {"EMR": "Critical", "Portal": "Major", "FaxLine": "Minor"}
BRAND_ASSIGNEE = {"EMR": "dev_alice", "Portal": "dev_bob", "FaxLine": "dev_carol"}
ORGS = ("Crowfoot clinic", "Lakeside hospital", "Downtown practice")

FILLER_TOPICS = (
    "billing",
    "calendar",
    "directory",
    "archive",
    "profile",
    "roster",
    "template",
    "signature",
)

FILLER_SENTENCES = (
    "We reviewed the {topic} settings yesterday.",
    "The {topic} page looks fine otherwise.",
    "Our staff checked the {topic} manual twice.",
    "Could you confirm the {topic} steps again?",
    "The {topic} report downloaded without trouble.",
)

CRASH_SENTENCES = (
    "The application crashes when I save patient records.",
    "It crashes again right after the upload finishes.",
    "Everything crashes once the attachment opens.",
)

QUESTION_SENTENCES = (
    "How do I export the {topic} summary?",
    "Where does the {topic} archive live now?",
    "Can we rename the {topic} folder ourselves?",
)


def _mk_conversation(rng, escalated, topic):
    utterances = []
    texts = []
    if escalated:
        first, second = rng.sample(CRASH_SENTENCES, 2)
        texts.append(first)
        texts.append(rng.choice(FILLER_SENTENCES).format(topic=topic))
        texts.append(second)
        if rng.random() < 0.5:
            texts.append(rng.choice(FILLER_SENTENCES).format(topic=rng.choice(FILLER_TOPICS)))
    else:
        texts.append(rng.choice(QUESTION_SENTENCES).format(topic=topic))
        texts.append(rng.choice(FILLER_SENTENCES).format(topic=topic))
    utterances.append(Utterance("customer", " ".join(texts), 0))
    utterances.append(
        Utterance("crm_staff", "Thanks for the report, we are reviewing it now.", 1)
    )
    return tuple(utterances)


def make_synthetic_corpus(
    n_escalated=20,
    n_normal=40,
    seed=0,
    with_gold_summaries=False,
    with_tickets=True,
):
    """Escalated iff the conversation mentions crashing; priority and
    assignee are functions of the brand."""
    rng = random.Random(seed)
    requests = []
    brands = sorted(BRAND_PRIORITY)
    for i in range(n_escalated + n_normal):
        escalated = i < n_escalated
        topic = rng.choice(FILLER_TOPICS)
        brand = brands[i % len(brands)]
        conversation = _mk_conversation(rng, escalated, topic)
        gold = None
        if with_gold_summaries:
            # gold summary = the customer sentences that carry the signal,
            # or the first customer sentence for calm requests
            from triagekit.textproc import sentence_split

            sentences = sentence_split(conversation[0].text, 0)
            if escalated:
                indices = tuple(
                    s.origin for s in sentences if "crash" in s.text.lower()
                )
            else:
                indices = (sentences[0].origin,)
            gold = GoldSummary(request_id=f"R{i:03d}", sentence_indices=indices)
        ticket = None
        if escalated and with_tickets:
            ticket = DevelopmentTicket(
                request_id=f"R{i:03d}",
                title="Crash while saving records",
                content="The application crashes while saving.",
                priority=BRAND_PRIORITY[brand],
                assignee=BRAND_ASSIGNEE[brand],
                source="human",
            )
        requests.append(
            UserRequest(
                id=f"R{i:03d}",
                conversation=conversation,
                subject=f"{topic} trouble" if not escalated else "application crash",
                requester="Jane Doe",
                brand_name=brand,
                organization=ORGS[i % len(ORGS)],
                escalated=escalated,
                gold_summary=gold,
                ticket=ticket,
            )
        )
    rng.shuffle(requests)
    return requests


def make_source_documents():
    return [
        SourceDocument(
            kind="org_description",
            text="Crowfoot clinic. Jane Doe is the administrator.",
        ),
        SourceDocument(
            kind="org_description",
            text="Lakeside hospital serves the north end. Alan Smith runs intake.",
        ),
        SourceDocument(kind="brand_description", text="EMR stores the patient charts."),
        SourceDocument(kind="brand_description", text="Portal handles appointment booking."),
        SourceDocument(kind="brand_description", text="FaxLine moves documents between offices."),
    ]


PERSONNEL_OVERRIDES = {"Jane Doe": "administrator", "Alan Smith": "coordinator"}


@pytest.fixture
def synthetic_corpus():
    return make_synthetic_corpus()


@pytest.fixture
def synthetic_corpus_with_gold():
    return make_synthetic_corpus(with_gold_summaries=True)


@pytest.fixture
def source_documents():
    return make_source_documents()
