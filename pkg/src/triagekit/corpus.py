"""Canonical data model, JSONL ingestion, splitting and downsampling.

The input format is JSON-lines, one request per line, UTF-8. Required
fields: id, conversation (array of {speaker_role, text}), subject. All
other attributes are optional; absent strings default to "" and absent
labels to None. Gold labels (escalated, gold_summary, ticket) live in
the same format so one file serves training and live triage.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Iterable, Optional

from .errors import DuplicateId, MalformedRecord, SingleClass, TooFewRecords

SPEAKER_ROLES = ("customer", "crm_staff")
PRIORITY_LEVELS = ("Blocker", "Critical", "Major", "Minor", "Trivial")
SOURCE_KINDS = (
    "user_story",
    "release_note",
    "org_description",
    "team_description",
    "brand_description",
)


@dataclass(frozen=True)
class Utterance:
    speaker_role: str
    text: str
    index: int


@dataclass(frozen=True)
class GoldSummary:
    request_id: str
    sentence_indices: tuple[tuple[int, int], ...]  # (utterance idx, sentence idx)


@dataclass(frozen=True)
class DevelopmentTicket:
    request_id: str
    title: str
    content: str
    priority: str
    assignee: str
    source: str  # 'human' | 'generated'

    def __post_init__(self):
        if self.priority not in PRIORITY_LEVELS:
            raise ValueError(f"priority must be one of {PRIORITY_LEVELS}")
        if len(self.title.split()) > 11:
            raise ValueError("title exceeds 11 words")
        if self.source not in ("human", "generated"):
            raise ValueError("source must be 'human' or 'generated'")


@dataclass(frozen=True)
class SourceDocument:
    kind: str
    text: str

    def __post_init__(self):
        if self.kind not in SOURCE_KINDS:
            raise ValueError(f"kind must be one of {SOURCE_KINDS}")


@dataclass(frozen=True)
class UserRequest:
    """One customer conversation plus its satellite attributes."""

    id: str
    conversation: tuple[Utterance, ...]
    subject: str
    requester: str = ""
    ticket_type: str = ""
    tags: frozenset[str] = field(default_factory=frozenset)
    via: str = ""
    severity: str = ""
    assignee: Optional[str] = None
    time_open: Optional[float] = None  # epoch seconds
    time_escalated: Optional[float] = None
    time_to_assign: Optional[float] = None  # seconds
    brand_name: str = ""
    organization: str = ""
    escalated: Optional[bool] = None
    gold_summary: Optional[GoldSummary] = None
    ticket: Optional[DevelopmentTicket] = None

    def conversation_text(self) -> str:
        return "\n".join(u.text for u in self.conversation)


def _parse_timestamp(value, field_name: str) -> Optional[float]:
    if value is None:
        return None
    if isinstance(value, (int, float)) and not isinstance(value, bool):
        return float(value)
    if isinstance(value, str):
        try:
            return datetime.fromisoformat(value.replace("Z", "+00:00")).timestamp()
        except ValueError:
            raise ValueError(f"{field_name}: not an ISO-8601 timestamp: {value!r}")
    raise ValueError(f"{field_name}: expected number or ISO string")


def _format_timestamp(value: Optional[float]) -> Optional[str]:
    if value is None:
        return None
    return datetime.fromtimestamp(value, tz=timezone.utc).isoformat()


def parse_request(record: dict) -> UserRequest:
    """Build a validated UserRequest from one decoded JSON object."""
    if not isinstance(record, dict):
        raise ValueError("record is not a JSON object")
    request_id = record.get("id")
    if not request_id or not isinstance(request_id, str):
        raise ValueError("missing or non-string 'id'")
    raw_conv = record.get("conversation")
    if not isinstance(raw_conv, list) or not raw_conv:
        raise ValueError("'conversation' must be a non-empty array")
    utterances = []
    for i, item in enumerate(raw_conv):
        if not isinstance(item, dict):
            raise ValueError(f"conversation[{i}] is not an object")
        role = item.get("speaker_role", "customer")
        if role not in SPEAKER_ROLES:
            raise ValueError(f"conversation[{i}].speaker_role must be one of {SPEAKER_ROLES}")
        text = item.get("text")
        if not isinstance(text, str) or not text.strip():
            raise ValueError(f"conversation[{i}].text must be a non-empty string")
        index = item.get("index", i)
        if index != i and (not isinstance(index, int) or utterances and index <= utterances[-1].index):
            raise ValueError(f"conversation[{i}].index must be strictly increasing")
        utterances.append(Utterance(speaker_role=role, text=text, index=index))
    subject = record.get("subject")
    if not isinstance(subject, str):
        raise ValueError("missing or non-string 'subject'")

    time_open = _parse_timestamp(record.get("time_open"), "time_open")
    time_escalated = _parse_timestamp(record.get("time_escalated"), "time_escalated")
    if time_open is not None and time_escalated is not None and time_escalated < time_open:
        raise ValueError("time_escalated precedes time_open")

    escalated = record.get("escalated")
    if escalated is not None and not isinstance(escalated, bool):
        raise ValueError("'escalated' must be a boolean when present")

    gold_summary = None
    if record.get("gold_summary") is not None:
        indices = record["gold_summary"]
        if not isinstance(indices, list) or not indices:
            raise ValueError("'gold_summary' must be a non-empty array of index pairs")
        pairs = []
        for pair in indices:
            if not (isinstance(pair, list) and len(pair) == 2 and all(isinstance(x, int) for x in pair)):
                raise ValueError("'gold_summary' entries must be [utterance, sentence] int pairs")
            if pair[0] >= len(utterances):
                raise ValueError(f"'gold_summary' refers to missing utterance {pair[0]}")
            pairs.append((pair[0], pair[1]))
        gold_summary = GoldSummary(request_id=request_id, sentence_indices=tuple(pairs))

    ticket = None
    if record.get("ticket") is not None:
        t = record["ticket"]
        if not isinstance(t, dict):
            raise ValueError("'ticket' must be an object")
        try:
            ticket = DevelopmentTicket(
                request_id=request_id,
                title=t.get("title", ""),
                content=t.get("content", ""),
                priority=t.get("priority", "Major"),
                assignee=t.get("assignee", ""),
                source=t.get("source", "human"),
            )
        except ValueError as exc:
            raise ValueError(f"ticket: {exc}")

    tags = record.get("tags", [])
    if not isinstance(tags, (list, tuple)):
        raise ValueError("'tags' must be an array")

    return UserRequest(
        id=request_id,
        conversation=tuple(utterances),
        subject=subject,
        requester=record.get("requester", ""),
        ticket_type=record.get("ticket_type", ""),
        tags=frozenset(str(t) for t in tags),
        via=record.get("via", ""),
        severity=record.get("severity", ""),
        assignee=record.get("assignee"),
        time_open=time_open,
        time_escalated=time_escalated,
        time_to_assign=record.get("time_to_assign"),
        brand_name=record.get("brand_name", ""),
        organization=record.get("organization", ""),
        escalated=escalated,
        gold_summary=gold_summary,
        ticket=ticket,
    )


def request_to_record(request: UserRequest) -> dict:
    """Inverse of parse_request; drops absent optional fields."""
    record = {
        "id": request.id,
        "conversation": [
            {"speaker_role": u.speaker_role, "text": u.text} for u in request.conversation
        ],
        "subject": request.subject,
    }
    if request.requester:
        record["requester"] = request.requester
    if request.ticket_type:
        record["ticket_type"] = request.ticket_type
    if request.tags:
        record["tags"] = sorted(request.tags)
    if request.via:
        record["via"] = request.via
    if request.severity:
        record["severity"] = request.severity
    if request.assignee is not None:
        record["assignee"] = request.assignee
    if request.time_open is not None:
        record["time_open"] = _format_timestamp(request.time_open)
    if request.time_escalated is not None:
        record["time_escalated"] = _format_timestamp(request.time_escalated)
    if request.time_to_assign is not None:
        record["time_to_assign"] = request.time_to_assign
    if request.brand_name:
        record["brand_name"] = request.brand_name
    if request.organization:
        record["organization"] = request.organization
    if request.escalated is not None:
        record["escalated"] = request.escalated
    if request.gold_summary is not None:
        record["gold_summary"] = [list(p) for p in request.gold_summary.sentence_indices]
    if request.ticket is not None:
        record["ticket"] = {
            "title": request.ticket.title,
            "content": request.ticket.content,
            "priority": request.ticket.priority,
            "assignee": request.ticket.assignee,
            "source": request.ticket.source,
        }
    return record


def ingest_requests(path: str | Path, format: str = "jsonl") -> list[UserRequest]:
    """Load and validate a whole corpus; rejects the file on any bad line."""
    if format != "jsonl":
        raise ValueError(f"unsupported format {format!r}")
    requests: list[UserRequest] = []
    seen: set[str] = set()
    with open(path, encoding="utf-8") as handle:
        for line_no, line in enumerate(handle, start=1):
            if not line.strip():
                continue
            try:
                record = json.loads(line)
            except json.JSONDecodeError as exc:
                raise MalformedRecord(line_no, f"invalid JSON: {exc.msg}")
            try:
                request = parse_request(record)
            except ValueError as exc:
                raise MalformedRecord(line_no, str(exc))
            if request.id in seen:
                raise DuplicateId(request.id)
            seen.add(request.id)
            requests.append(request)
    return requests


def serialize_requests(requests: Iterable[UserRequest], path: str | Path) -> None:
    """Write a corpus back out as JSONL."""
    with open(path, "w", encoding="utf-8") as handle:
        for request in requests:
            handle.write(json.dumps(request_to_record(request), ensure_ascii=False))
            handle.write("\n")


def split(
    requests: list[UserRequest], test_fraction: float, seed: int
) -> tuple[list[UserRequest], list[UserRequest]]:
    """Deterministic, label-stratified train/test partition."""
    if len(requests) < 2:
        raise TooFewRecords("need at least 2 records to split")
    if not 0 < test_fraction < 1:
        raise ValueError("test_fraction must be in (0, 1)")
    rng = random.Random(seed)
    strata: dict[object, list[int]] = {}
    for i, request in enumerate(requests):
        strata.setdefault(request.escalated, []).append(i)
    test_indices: set[int] = set()
    for key in sorted(strata, key=repr):
        indices = strata[key]
        n_test = round(test_fraction * len(indices))
        n_test = min(max(n_test, 0), len(indices))
        test_indices.update(rng.sample(indices, n_test))
    train = [r for i, r in enumerate(requests) if i not in test_indices]
    test = [r for i, r in enumerate(requests) if i in test_indices]
    return train, test


def downsample_majority(
    requests: list[UserRequest], ratio: float = 1.0, seed: int = 0
) -> list[UserRequest]:
    """Subsample the majority escalation class to at most ratio x minority."""
    if ratio <= 0:
        raise ValueError("ratio must be positive")
    labeled = [r for r in requests if r.escalated is not None]
    n_positive = sum(1 for r in labeled if r.escalated)
    n_negative = len(labeled) - n_positive
    if n_positive == 0 or n_negative == 0:
        raise SingleClass("both escalation classes required")
    majority_label = n_positive >= n_negative
    majority_idx = [i for i, r in enumerate(labeled) if r.escalated == majority_label]
    minority_count = len(labeled) - len(majority_idx)
    cap = int(ratio * minority_count)
    if len(majority_idx) <= cap:
        return list(labeled)
    rng = random.Random(seed)
    keep = set(rng.sample(majority_idx, cap))
    return [
        r
        for i, r in enumerate(labeled)
        if r.escalated != majority_label or i in keep
    ]


def load_source_documents(path: str | Path) -> list[SourceDocument]:
    """JSONL of {kind, text} auxiliary documents for thesaurus building."""
    documents = []
    with open(path, encoding="utf-8") as handle:
        for line_no, line in enumerate(handle, start=1):
            if not line.strip():
                continue
            try:
                record = json.loads(line)
                documents.append(SourceDocument(kind=record["kind"], text=record["text"]))
            except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
                raise MalformedRecord(line_no, str(exc))
    return documents


def load_personnel_overrides(path: str | Path) -> dict[str, str]:
    """CSV of name,role pairs; the manual-curation input for the thesaurus."""
    import csv

    overrides = {}
    with open(path, encoding="utf-8", newline="") as handle:
        for row in csv.reader(handle):
            if not row or row[0].startswith("#"):
                continue
            if len(row) < 2:
                raise ValueError(f"override row needs name,role: {row!r}")
            overrides[row[0].strip()] = row[1].strip()
    return overrides
