"""Append-only audit log with snapshot records and replay support.

Every pipeline action lands here as an :class:`AuditEvent` with a monotone
event id.  When a log path is configured, each event is appended to a single
JSONL file; a full state snapshot is embedded in the same file every
``snapshot_every`` events so a restart replays only the tail.
"""

from __future__ import annotations

import json
import threading
from dataclasses import dataclass
from pathlib import Path

SNAPSHOT_KIND = "snapshot"


@dataclass(frozen=True)
class AuditEvent:
    event_id: int
    kind: str
    payload: dict
    timestamp: str

    def to_dict(self) -> dict:
        return {"event_id": self.event_id, "kind": self.kind,
                "payload": self.payload, "timestamp": self.timestamp}

    @classmethod
    def from_dict(cls, data: dict) -> "AuditEvent":
        return cls(event_id=data["event_id"], kind=data["kind"],
                   payload=data["payload"], timestamp=data["timestamp"])


class AuditLog:
    """In-memory event list, optionally mirrored to an append-only file.

    ``wait_for`` lets long-poll readers block until an event id beyond their
    cursor exists.  Appends never mutate earlier events.
    """

    def __init__(self, path: str | Path | None = None, snapshot_every: int = 500):
        self.path = Path(path) if path is not None else None
        self.snapshot_every = snapshot_every
        self.events: list[AuditEvent] = []
        self._next_id = 1
        self._cond = threading.Condition()
        self._snapshot_provider = None

    def set_snapshot_provider(self, provider) -> None:
        """Callable returning a JSON-safe pipeline state dict."""
        self._snapshot_provider = provider

    @property
    def last_event_id(self) -> int:
        return self._next_id - 1

    def append(self, kind: str, payload: dict, timestamp: str) -> AuditEvent:
        with self._cond:
            event = AuditEvent(self._next_id, kind, payload, timestamp)
            self._next_id += 1
            self.events.append(event)
            if self.path is not None:
                self._write_line(event.to_dict())
                if (self._snapshot_provider is not None
                        and event.event_id % self.snapshot_every == 0):
                    self._write_line({
                        "event_id": event.event_id,
                        "kind": SNAPSHOT_KIND,
                        "payload": self._snapshot_provider(),
                        "timestamp": timestamp,
                    })
            self._cond.notify_all()
            return event

    def _write_line(self, record: dict) -> None:
        self.path.parent.mkdir(parents=True, exist_ok=True)
        with self.path.open("a", encoding="utf-8") as fh:
            fh.write(json.dumps(record) + "\n")

    def events_after(self, event_id: int, limit: int = 500) -> list[AuditEvent]:
        with self._cond:
            return [e for e in self.events if e.event_id > event_id][:limit]

    def wait_for(self, event_id: int, timeout: float) -> bool:
        """Block until an event with id > event_id exists; True if one does."""
        with self._cond:
            return self._cond.wait_for(
                lambda: self._next_id - 1 > event_id, timeout=timeout
            )

    def counts_by_kind(self) -> dict:
        with self._cond:
            out: dict = {}
            for event in self.events:
                out[event.kind] = out.get(event.kind, 0) + 1
            return out

    def restore_from(self, events: list[AuditEvent]) -> None:
        """Adopt replayed events so new ids continue the sequence."""
        with self._cond:
            self.events = list(events)
            self._next_id = (events[-1].event_id + 1) if events else 1


def read_log_file(path: str | Path):
    """Parse a log file into (last_snapshot_payload, events).

    ``events`` holds every non-snapshot event; the snapshot, when present,
    is the most recent one.  Replays apply the snapshot first and then the
    events with ids beyond it.
    """
    snapshot = None
    snapshot_id = 0
    events: list[AuditEvent] = []
    text = Path(path).read_text(encoding="utf-8")
    for line in text.splitlines():
        line = line.strip()
        if not line:
            continue
        record = json.loads(line)
        if record["kind"] == SNAPSHOT_KIND:
            snapshot = record["payload"]
            snapshot_id = record["event_id"]
        else:
            events.append(AuditEvent.from_dict(record))
    return snapshot, snapshot_id, events
