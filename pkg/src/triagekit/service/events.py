"""Append-only JSONL event log; in-memory state is rebuilt by replay.

Event schema (one JSON object per line):
  {"type": "session_opened", "session_id", "role", "user", "request_id",
   "mode", "at"}
  {"type": "first_interaction", "session_id", "at"}
  {"type": "session_submitted", "session_id", "at", "client_active_ms",
   "decisions": {...}, "edits": [{"field", "before", "after",
   "changed_word_count"}]}
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Iterator, Optional


class EventLog:
    def __init__(self, path: Optional[str | Path] = None):
        self.path = Path(path) if path else None
        self._memory: list[dict] = []

    def append(self, event: dict) -> None:
        self._memory.append(event)
        if self.path is not None:
            with open(self.path, "a", encoding="utf-8") as handle:
                handle.write(json.dumps(event, ensure_ascii=False))
                handle.write("\n")

    def __iter__(self) -> Iterator[dict]:
        return iter(list(self._memory))

    @staticmethod
    def read(path: str | Path) -> "EventLog":
        log = EventLog(None)
        file_path = Path(path)
        if file_path.exists():
            for line in file_path.read_text("utf-8").splitlines():
                if line.strip():
                    log._memory.append(json.loads(line))
        log.path = file_path
        return log
