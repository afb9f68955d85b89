"""Human-in-the-loop review service with timing and edit analytics."""

from .analytics import ClosedSession, edits_report, timing_report
from .app import ServiceError, TriageService, create_app
from .diffs import word_changes
from .events import EventLog

__all__ = [
    "ClosedSession",
    "EventLog",
    "ServiceError",
    "TriageService",
    "create_app",
    "edits_report",
    "timing_report",
    "word_changes",
]
