#!/usr/bin/env python3
"""Build the integration-test fixture: a synthetic corpus and a trained
pipeline bundle, written into the directory given as argv[1].

Escalation is separable by construction (crash wording), so crash
requests produce escalate=true suggestions for the scripted sessions.
"""

import random
import sys
from pathlib import Path

from triagekit.corpus import (
    DevelopmentTicket,
    SourceDocument,
    UserRequest,
    Utterance,
    serialize_requests,
)
from triagekit.pipeline import PipelineConfig, save_bundle, train_all

CRASH = (
    "The application crashes when I save patient records.",
    "It crashes again right after the upload finishes.",
    "Everything crashes once the attachment opens.",
)
CALM = (
    "How do I export the billing summary?",
    "Where does the archive folder live now?",
    "Could you confirm the template steps again?",
)
FILLER = (
    "We reviewed the calendar settings yesterday.",
    "The directory page looks fine otherwise.",
    "Our staff checked the roster manual twice.",
)
BRANDS = {"EMR": ("Critical", "dev_alice"), "Portal": ("Major", "dev_bob")}


def build_corpus(n_per_class=24, seed=9):
    rng = random.Random(seed)
    requests = []
    brands = sorted(BRANDS)
    for i in range(n_per_class * 2):
        escalated = i < n_per_class
        brand = brands[i % len(brands)]
        rid = f"{'CRASH' if escalated else 'CALM'}{i:03d}"
        if escalated:
            first, second = rng.sample(CRASH, 2)
            text = f"{first} {rng.choice(FILLER)} {second}"
        else:
            text = f"{rng.choice(CALM)} {rng.choice(FILLER)}"
        conversation = (
            Utterance("customer", text, 0),
            Utterance("crm_staff", "Thanks for the report, we are reviewing it now.", 1),
        )
        ticket = None
        if escalated:
            priority, assignee = BRANDS[brand]
            ticket = DevelopmentTicket(
                request_id=rid,
                title="Crash while saving records",
                content="The application crashes while saving.",
                priority=priority,
                assignee=assignee,
                source="human",
            )
        requests.append(
            UserRequest(
                id=rid,
                conversation=conversation,
                subject="application crash" if escalated else "product question",
                requester="Jane Doe",
                brand_name=brand,
                organization="Crowfoot clinic",
                escalated=escalated,
                ticket=ticket,
            )
        )
    rng.shuffle(requests)
    return requests


def main():
    out = Path(sys.argv[1])
    out.mkdir(parents=True, exist_ok=True)
    corpus = build_corpus()
    serialize_requests(corpus, out / "corpus.jsonl")
    documents = [
        SourceDocument(kind="org_description", text="Crowfoot clinic. Jane Doe is the administrator."),
        SourceDocument(kind="brand_description", text="EMR stores the patient charts."),
        SourceDocument(kind="brand_description", text="Portal handles appointment booking."),
    ]
    bundle = train_all(
        corpus,
        documents,
        {"Jane Doe": "administrator"},
        PipelineConfig(),
        seed=42,
    )
    save_bundle(bundle, out / "bundle")
    print("fixture ready")


if __name__ == "__main__":
    main()
