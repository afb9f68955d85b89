"""HTTP triage service: request queues, suggestion delivery, review
sessions with server-side timing, edit accounting, and analytics.

State is rebuilt from the append-only event log on startup; the log is
the single source of truth. Sessions are opened per (user, request) and
carry a mode flag (manual or assisted) so A/B review protocols run
verbatim: a manual session's payload contains no generated-suggestion
bytes at all.
"""

from __future__ import annotations

import time
from typing import Callable, Optional, Sequence

from fastapi import FastAPI, HTTPException
from pydantic import BaseModel, Field

from ..corpus import PRIORITY_LEVELS, UserRequest
from ..pipeline import PipelineBundle, process_request
from .analytics import EDIT_FIELDS, TEXT_EDIT_FIELDS, ClosedSession, edits_report, timing_report
from .diffs import word_changes
from .events import EventLog

ROLES = ("crm_expert", "project_manager")
MODES = ("manual", "assisted")


class ServiceError(Exception):
    def __init__(self, status: int, detail: str):
        super().__init__(detail)
        self.status = status
        self.detail = detail


class TriageService:
    """In-memory state over an append-only event log."""

    def __init__(
        self,
        requests: Sequence[UserRequest],
        bundle: Optional[PipelineBundle] = None,
        event_log: Optional[EventLog] = None,
        clock: Callable[[], float] = time.time,
    ):
        self.requests = {r.id: r for r in requests}
        self.bundle = bundle
        self.clock = clock
        self.log = event_log if event_log is not None else EventLog(None)
        self.request_state: dict[str, str] = {rid: "pending" for rid in self.requests}
        self.sessions: dict[str, dict] = {}
        self.open_index: dict[tuple[str, str], str] = {}
        self.closed: list[ClosedSession] = []
        self.crm_summary: dict[str, list] = {}
        self._suggestion_cache: dict[str, dict] = {}
        self._opened_count = 0
        for event in self.log:
            self._apply(event)

    # -- queries ------------------------------------------------------------

    def queue(self, state: str = "pending") -> list[dict]:
        return [
            {"id": rid, "subject": self.requests[rid].subject}
            for rid in self.requests
            if self.request_state[rid] == state
        ]

    def suggestion_payload(self, request_id: str, session_id: str) -> dict:
        request = self.requests.get(request_id)
        if request is None:
            raise ServiceError(404, f"unknown request {request_id!r}")
        session = self.sessions.get(session_id)
        if session is None or session["request_id"] != request_id:
            raise ServiceError(404, "unknown session for this request")
        from ..extractive import conversation_sentences

        payload = {
            "request_id": request_id,
            "subject": request.subject,
            "conversation": [
                {"speaker_role": u.speaker_role, "text": u.text} for u in request.conversation
            ],
            # server-side sentence segmentation, so client checkbox indices
            # always agree with the engine's origins (raw data, not a
            # suggestion: present in manual mode too)
            "sentences": [
                {"origin": list(s.origin), "text": s.text}
                for s in conversation_sentences(request)
            ],
            "mode": session["mode"],
        }
        if session["role"] == "project_manager" and request_id in self.crm_summary:
            payload["crm_summary"] = self.crm_summary[request_id]
        if session["mode"] == "assisted":
            payload["suggestion"] = self._suggestion(request)
        return payload

    def _suggestion(self, request: UserRequest) -> dict:
        if request.id not in self._suggestion_cache:
            if self.bundle is None:
                raise ServiceError(409, "no pipeline bundle loaded; assisted mode unavailable")
            suggestion = process_request(self.bundle, request)
            self._suggestion_cache[request.id] = suggestion.to_dict()
        return self._suggestion_cache[request.id]

    # -- mutations ----------------------------------------------------------

    def open_session(self, role: str, request_id: str, mode: str, user: str = "") -> dict:
        if role not in ROLES:
            raise ServiceError(422, f"role must be one of {ROLES}")
        if mode not in MODES:
            raise ServiceError(422, f"mode must be one of {MODES}")
        if request_id not in self.requests:
            raise ServiceError(404, f"unknown request {request_id!r}")
        user = user or role
        if (user, request_id) in self.open_index:
            raise ServiceError(409, f"user {user!r} already has an open session for {request_id!r}")
        session_id = f"S{self._opened_count:06d}"
        event = {
            "type": "session_opened",
            "session_id": session_id,
            "role": role,
            "user": user,
            "request_id": request_id,
            "mode": mode,
            "at": self.clock(),
        }
        self.log.append(event)
        self._apply(event)
        return {"session_id": session_id, "started_at": event["at"]}

    def first_interaction(self, session_id: str) -> dict:
        session = self._open_session(session_id)
        event = {"type": "first_interaction", "session_id": session_id, "at": self.clock()}
        self.log.append(event)
        self._apply(event)
        return {"session_id": session_id, "first_interaction_at": event["at"]}

    def submit_session(
        self,
        session_id: str,
        decisions: dict,
        edits: list[dict],
        client_active_ms: int = 0,
    ) -> dict:
        session = self._open_session(session_id)
        self._validate_decisions(session["role"], decisions)
        detailed = []
        for edit in edits:
            field_name = edit.get("field")
            if field_name not in EDIT_FIELDS:
                raise ServiceError(422, f"unknown edit field {field_name!r}")
            detailed.append(
                {
                    "field": field_name,
                    "before": edit.get("before"),
                    "after": edit.get("after"),
                    "changed_word_count": word_changes(edit.get("before"), edit.get("after")),
                }
            )
        event = {
            "type": "session_submitted",
            "session_id": session_id,
            "at": self.clock(),
            "client_active_ms": int(client_active_ms),
            "decisions": decisions,
            "edits": detailed,
        }
        self.log.append(event)
        self._apply(event)
        return {
            "session_id": session_id,
            "duration_seconds": event["at"] - session["started_at"],
            "edits": [
                {"field": e["field"], "changed_word_count": e["changed_word_count"]}
                for e in detailed
            ],
            "request_state": self.request_state[session["request_id"]],
        }

    def _open_session(self, session_id: str) -> dict:
        session = self.sessions.get(session_id)
        if session is None:
            raise ServiceError(404, f"unknown session {session_id!r}")
        if session.get("submitted_at") is not None:
            raise ServiceError(409, f"session {session_id!r} already submitted")
        return session

    def _validate_decisions(self, role: str, decisions: dict) -> None:
        allowed = {"escalate", "summary_sentences", "title", "content", "priority", "assignee"}
        unknown = set(decisions) - allowed
        if unknown:
            raise ServiceError(422, f"unknown decision fields {sorted(unknown)}")
        if role == "crm_expert":
            if not isinstance(decisions.get("escalate"), bool):
                raise ServiceError(422, "crm submission requires a boolean 'escalate' decision")
        if "priority" in decisions and decisions["priority"] not in PRIORITY_LEVELS:
            raise ServiceError(422, f"priority must be one of {PRIORITY_LEVELS}")
        if "title" in decisions and len(str(decisions["title"]).split()) > 11:
            raise ServiceError(422, "title exceeds the 11-word cap")

    # -- event application ----------------------------------------------------

    def _apply(self, event: dict) -> None:
        kind = event["type"]
        if kind == "session_opened":
            self.sessions[event["session_id"]] = {
                "session_id": event["session_id"],
                "role": event["role"],
                "user": event["user"],
                "request_id": event["request_id"],
                "mode": event["mode"],
                "started_at": event["at"],
                "first_interaction_at": None,
                "submitted_at": None,
            }
            self.open_index[(event["user"], event["request_id"])] = event["session_id"]
            self._opened_count += 1
        elif kind == "first_interaction":
            self.sessions[event["session_id"]]["first_interaction_at"] = event["at"]
        elif kind == "session_submitted":
            session = self.sessions[event["session_id"]]
            session["submitted_at"] = event["at"]
            self.open_index.pop((session["user"], session["request_id"]), None)
            decisions = event.get("decisions", {})
            request_id = session["request_id"]
            if session["role"] == "crm_expert":
                if "summary_sentences" in decisions:
                    self.crm_summary[request_id] = decisions["summary_sentences"]
                if decisions.get("escalate"):
                    self.request_state[request_id] = "pm"
                else:
                    self.request_state[request_id] = "done"
            else:
                self.request_state[request_id] = "done"
            changed_words = sum(
                e["changed_word_count"]
                for e in event.get("edits", [])
                if e["field"] in TEXT_EDIT_FIELDS
            )
            changed_sentences = sum(
                e["changed_word_count"]
                for e in event.get("edits", [])
                if e["field"] == "summary_sentences"
            )
            self.closed.append(
                ClosedSession(
                    session_id=session["session_id"],
                    role=session["role"],
                    user=session["user"],
                    request_id=request_id,
                    mode=session["mode"],
                    duration_seconds=event["at"] - session["started_at"],
                    client_active_ms=event.get("client_active_ms", 0),
                    changed_words=changed_words,
                    changed_sentences=changed_sentences,
                    edit_count=len(event.get("edits", [])),
                )
            )

    # -- analytics ------------------------------------------------------------

    def timing_analytics(self) -> dict:
        return timing_report(self.closed)

    def edits_analytics(self) -> dict:
        return edits_report(self.closed)


class OpenSessionBody(BaseModel):
    role: str
    request_id: str
    mode: str
    user: str = ""


class EditBody(BaseModel):
    field: str
    before: object = None
    after: object = None


class SubmitBody(BaseModel):
    decisions: dict = Field(default_factory=dict)
    edits: list[EditBody] = Field(default_factory=list)
    client_active_ms: int = 0


def create_app(service: TriageService) -> FastAPI:
    app = FastAPI(title="triagekit service", version="0.1.0")
    app.state.service = service

    def run(fn, *args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except ServiceError as exc:
            raise HTTPException(status_code=exc.status, detail=exc.detail)

    @app.get("/requests")
    def get_requests(state: str = "pending"):
        return service.queue(state)

    @app.get("/requests/{request_id}/suggestion")
    def get_suggestion(request_id: str, session_id: str):
        return run(service.suggestion_payload, request_id, session_id)

    @app.post("/sessions", status_code=201)
    def post_session(body: OpenSessionBody):
        return run(service.open_session, body.role, body.request_id, body.mode, body.user)

    @app.post("/sessions/{session_id}/interaction")
    def post_interaction(session_id: str):
        return run(service.first_interaction, session_id)

    @app.post("/sessions/{session_id}/submit")
    def post_submit(session_id: str, body: SubmitBody):
        return run(
            service.submit_session,
            session_id,
            body.decisions,
            [edit.model_dump() for edit in body.edits],
            body.client_active_ms,
        )

    @app.get("/analytics/timing")
    def get_timing():
        return service.timing_analytics()

    @app.get("/analytics/edits")
    def get_edits():
        return service.edits_analytics()

    return app
