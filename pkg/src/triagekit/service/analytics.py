"""Timing and edit analytics over closed review sessions.

Escalation time is the duration of a support-reviewer (crm_expert)
session; decision time is the duration of a project-manager session;
both are server-timestamped (submitted_at - started_at). The
escalation-share statistic is total escalation seconds over total cycle
seconds (escalation + decision), computed across requests that have
both measurements.
"""

from __future__ import annotations

import statistics
from dataclasses import dataclass, field
from typing import Optional

ROLE_METRIC = {"crm_expert": "escalation_time", "project_manager": "decision_time"}
TEXT_EDIT_FIELDS = ("title", "content")
EDIT_FIELDS = ("summary_sentences", "title", "content", "priority", "assignee", "escalate")


@dataclass
class ClosedSession:
    session_id: str
    role: str
    user: str
    request_id: str
    mode: str  # manual | assisted
    duration_seconds: float
    client_active_ms: int
    changed_words: int  # over title+content edits
    changed_sentences: int  # over summary_sentences edits
    edit_count: int


def _mode_stats(durations: list[float]) -> Optional[dict]:
    if not durations:
        return None
    return {
        "count": len(durations),
        "mean_seconds": statistics.fmean(durations),
        "median_seconds": statistics.median(durations),
    }


def timing_report(sessions: list[ClosedSession]) -> dict:
    report: dict = {"metrics": {}, "per_user_total_seconds": {}, "escalation_share": None}
    for role, metric in ROLE_METRIC.items():
        by_mode = {}
        for mode in ("manual", "assisted"):
            stats = _mode_stats(
                [s.duration_seconds for s in sessions if s.role == role and s.mode == mode]
            )
            if stats is not None:
                by_mode[mode] = stats
        entry: dict = {"by_mode": by_mode}
        if "manual" in by_mode and "assisted" in by_mode:
            entry["mean_saving_seconds"] = (
                by_mode["manual"]["mean_seconds"] - by_mode["assisted"]["mean_seconds"]
            )
        report["metrics"][metric] = entry

    for session in sessions:
        report["per_user_total_seconds"][session.user] = (
            report["per_user_total_seconds"].get(session.user, 0.0) + session.duration_seconds
        )

    escalation_by_request: dict[str, float] = {}
    decision_by_request: dict[str, float] = {}
    for session in sessions:
        target = (
            escalation_by_request if session.role == "crm_expert" else decision_by_request
        )
        target[session.request_id] = target.get(session.request_id, 0.0) + session.duration_seconds
    paired = set(escalation_by_request) & set(decision_by_request)
    if paired:
        esc_total = sum(escalation_by_request[r] for r in paired)
        cycle_total = esc_total + sum(decision_by_request[r] for r in paired)
        report["escalation_share"] = esc_total / cycle_total if cycle_total else None
    return report


def _distribution(values: list[int]) -> dict:
    counts: dict[str, int] = {}
    for value in values:
        counts[str(value)] = counts.get(str(value), 0) + 1
    n = len(values)
    return {
        "counts": counts,
        "total_sessions": n,
        "zero_change_fraction": (sum(1 for v in values if v == 0) / n) if n else None,
        "over_ten_fraction": (sum(1 for v in values if v > 10) / n) if n else None,
        "mean": statistics.fmean(values) if values else None,
    }


def edits_report(sessions: list[ClosedSession]) -> dict:
    pm_sessions = [s for s in sessions if s.role == "project_manager"]
    crm_sessions = [s for s in sessions if s.role == "crm_expert"]
    return {
        "changed_words": _distribution([s.changed_words for s in pm_sessions]),
        "changed_sentences": _distribution([s.changed_sentences for s in crm_sessions]),
    }
