"""The scan -> filter -> classify -> match -> approve loop.

A single pipeline instance owns all state; mutations happen on one thread
(directly in tests, via :class:`PipelineRunner`'s command queue in the
service).  Every action appends to the audit log, and the whole state can be
rebuilt by replaying that log.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field
from datetime import datetime, timezone
from enum import Enum
from pathlib import Path

from peernudge.audit import AuditLog, read_log_file
from peernudge.classifiers.common import load_checkpoint
from peernudge.encoding import KeywordSet, TextEncoder
from peernudge.errors import (
    InvalidStateError,
    ModelNotLoadedError,
    SinkFailureError,
    SourceUnavailableError,
    UnknownPendingError,
)
from peernudge.matching import GroupModel, InterventionMessage
from peernudge.sources import TweetRecord


class Status(str, Enum):
    AWAITING_CLASSIFICATION = "awaiting_classification"
    AWAITING_APPROVAL = "awaiting_approval"
    APPROVED = "approved"
    REJECTED = "rejected"
    POSTED = "posted"
    DISCARDED = "discarded"


ALLOWED_TRANSITIONS = {
    Status.AWAITING_CLASSIFICATION: {Status.DISCARDED, Status.AWAITING_APPROVAL},
    Status.AWAITING_APPROVAL: {Status.REJECTED, Status.APPROVED},
    Status.APPROVED: {Status.POSTED},
    Status.REJECTED: set(),
    Status.POSTED: set(),
    Status.DISCARDED: set(),
}


def utc_now_rfc3339() -> str:
    return datetime.now(timezone.utc).isoformat()


@dataclass
class PendingIntervention:
    """Pipeline state for one keyword-matched candidate tweet."""

    candidate: TweetRecord
    matched_keywords: list[str]
    status: Status = Status.AWAITING_CLASSIFICATION
    confidence: float | None = None
    bin_id: int | None = None
    proposed_message: InterventionMessage | None = None
    timestamps: dict = field(default_factory=dict)
    post_attempts: int = 0
    next_post_attempt: float = 0.0

    @property
    def pending_id(self) -> str:
        return self.candidate.id

    def transition(self, to: Status, timestamp: str) -> None:
        if to not in ALLOWED_TRANSITIONS[self.status]:
            raise InvalidStateError(
                f"cannot move {self.pending_id} from {self.status.value} "
                f"to {to.value}"
            )
        self.status = to
        self.timestamps[to.value] = timestamp

    def to_dict(self) -> dict:
        return {
            "pending_id": self.pending_id,
            "candidate": self.candidate.to_dict(),
            "matched_keywords": list(self.matched_keywords),
            "status": self.status.value,
            "confidence": self.confidence,
            "bin_id": self.bin_id,
            "proposed_message": (self.proposed_message.to_dict()
                                 if self.proposed_message else None),
            "timestamps": dict(self.timestamps),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "PendingIntervention":
        return cls(
            candidate=TweetRecord.from_dict(data["candidate"]),
            matched_keywords=list(data["matched_keywords"]),
            status=Status(data["status"]),
            confidence=data["confidence"],
            bin_id=data["bin_id"],
            proposed_message=(InterventionMessage.from_dict(data["proposed_message"])
                              if data["proposed_message"] else None),
            timestamps=dict(data["timestamps"]),
        )


@dataclass
class TweetClassifier:
    """Checkpointed model plus the encoder it was trained with."""

    model: object
    encoder: TextEncoder
    model_type: str = ""

    @classmethod
    def from_checkpoint(cls, path: str | Path) -> "TweetClassifier":
        model, model_type, encoder = load_checkpoint(path)
        return cls(model=model, encoder=encoder, model_type=model_type)

    def confidence(self, text: str) -> float:
        encoded = self.encoder.encode(text)
        if self.model.input_kind == "onehot":
            return float(self.model.predict_proba(encoded.onehot))
        return float(self.model.predict_proba(encoded.features[None])[0])


@dataclass
class PipelineConfig:
    """Run configuration, loadable from a JSON file."""

    scan_interval_secs: float = 60.0
    classification_threshold: float = 0.5
    model_checkpoint_path: str | None = None
    keywords_path: str | None = None
    message_pool_path: str | None = None
    source: dict = field(default_factory=dict)
    sink: dict = field(default_factory=dict)
    seed: int = 0
    log_path: str | None = None
    snapshot_every: int = 500
    retry_delay_secs: float = 5.0

    @classmethod
    def from_file(cls, path: str | Path) -> "PipelineConfig":
        data = json.loads(Path(path).read_text(encoding="utf-8"))
        known = {f for f in cls.__dataclass_fields__}
        unknown = set(data) - known
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        return cls(**data)


class Pipeline:
    """Owns candidate state; all methods must run on a single thread."""

    def __init__(self, keywords: KeywordSet, classifier: TweetClassifier | None,
                 group_model: GroupModel | None, source, sink,
                 threshold: float = 0.5, audit_log: AuditLog | None = None,
                 clock=utc_now_rfc3339, epoch_clock=time.time,
                 retry_delay_secs: float = 5.0):
        self.keywords = keywords
        self.classifier = classifier
        self.group_model = group_model
        self.source = source
        self.sink = sink
        self.threshold = threshold
        self.audit = audit_log if audit_log is not None else AuditLog()
        self.audit.set_snapshot_provider(self.snapshot_state)
        self.clock = clock
        self.epoch_clock = epoch_clock
        self.retry_delay_secs = retry_delay_secs
        self.pendings: dict[str, PendingIntervention] = {}
        self.seen_ids: set[str] = set()
        self.scanner_enabled = False
        self.counters = {"scanned": 0, "matched": 0, "awaiting_ever": 0,
                         "approved": 0, "posted": 0}

    # ------------------------------------------------------------------
    # scanning and classification
    # ------------------------------------------------------------------

    def scan_once(self) -> list[PendingIntervention]:
        """Pull one batch, keyword-filter it, and enqueue new candidates."""
        if not self.scanner_enabled:
            return []
        try:
            batch = self.source.next_batch()
        except SourceUnavailableError as exc:
            self.audit.append("source_error", {"error": str(exc)}, self.clock())
            return []
        created = []
        for tweet in batch:
            if tweet.id in self.seen_ids:
                continue
            self.seen_ids.add(tweet.id)
            self.counters["scanned"] += 1
            self.audit.append("scanned", {"tweet_id": tweet.id}, self.clock())
            matched = self.keywords.match(tweet.text)
            if not matched:
                continue
            self.counters["matched"] += 1
            pending = PendingIntervention(candidate=tweet, matched_keywords=matched)
            pending.timestamps[Status.AWAITING_CLASSIFICATION.value] = self.clock()
            self.pendings[tweet.id] = pending
            self.audit.append("filtered", {
                "tweet": tweet.to_dict(), "keywords": matched,
            }, self.clock())
            created.append(pending)
        return created

    def classify_candidate(self, pending: PendingIntervention) -> PendingIntervention:
        """Score one candidate; advance to approval or discard it."""
        if pending.status is not Status.AWAITING_CLASSIFICATION:
            raise InvalidStateError(
                f"{pending.pending_id} is {pending.status.value}, not awaiting "
                "classification"
            )
        if self.classifier is None:
            raise ModelNotLoadedError("no classifier loaded")
        confidence = self.classifier.confidence(pending.candidate.text)
        pending.confidence = confidence
        pro = confidence >= self.threshold
        self.audit.append("classified", {
            "pending_id": pending.pending_id,
            "confidence": confidence,
            "pro_tobacco": pro,
        }, self.clock())
        if not pro:
            pending.transition(Status.DISCARDED, self.clock())
            return pending
        if self.group_model is None:
            pending.transition(Status.DISCARDED, self.clock())
            self.audit.append("match_failed", {
                "pending_id": pending.pending_id,
                "error": "no group model loaded",
            }, self.clock())
            return pending
        try:
            message = self.group_model.representative_for(pending.candidate.author)
            bin_id = self.group_model.assign_bin(pending.candidate.author)
        except Exception as exc:  # empty bin / malformed model: discard, audit
            pending.transition(Status.DISCARDED, self.clock())
            self.audit.append("match_failed", {
                "pending_id": pending.pending_id, "error": str(exc),
            }, self.clock())
            return pending
        pending.bin_id = bin_id
        pending.proposed_message = message
        pending.transition(Status.AWAITING_APPROVAL, self.clock())
        self.counters["awaiting_ever"] += 1
        self.audit.append("matched", {
            "pending_id": pending.pending_id,
            "bin_id": bin_id,
            "message_id": message.message_id,
        }, self.clock())
        return pending

    def classify_all(self) -> None:
        for pending in list(self.pendings.values()):
            if pending.status is Status.AWAITING_CLASSIFICATION:
                self.classify_candidate(pending)

    # ------------------------------------------------------------------
    # operator commands
    # ------------------------------------------------------------------

    def _get(self, pending_id: str) -> PendingIntervention:
        if pending_id not in self.pendings:
            raise UnknownPendingError(f"no pending intervention {pending_id!r}")
        return self.pendings[pending_id]

    def approve(self, pending_id: str, operator_id: str) -> PendingIntervention:
        """Approve a candidate and attempt delivery immediately."""
        pending = self._get(pending_id)
        pending.transition(Status.APPROVED, self.clock())
        self.counters["approved"] += 1
        self.audit.append("approved", {
            "pending_id": pending_id, "operator_id": operator_id,
        }, self.clock())
        self._attempt_post(pending)
        return pending

    def reject(self, pending_id: str, operator_id: str) -> PendingIntervention:
        pending = self._get(pending_id)
        pending.transition(Status.REJECTED, self.clock())
        self.audit.append("rejected", {
            "pending_id": pending_id, "operator_id": operator_id,
        }, self.clock())
        return pending

    def set_scanner(self, enabled: bool) -> bool:
        """Idempotent toggle; scan ticks are skipped while disabled."""
        if enabled != self.scanner_enabled:
            self.scanner_enabled = enabled
            self.audit.append("scanner_toggled", {"enabled": enabled}, self.clock())
        return self.scanner_enabled

    # ------------------------------------------------------------------
    # delivery
    # ------------------------------------------------------------------

    def _outbox_record(self, pending: PendingIntervention) -> dict:
        return {
            "pending_id": pending.pending_id,
            "candidate_id": pending.candidate.id,
            "message_id": pending.proposed_message.message_id,
            "text": pending.proposed_message.text,
            "mentioned_user": pending.candidate.mention,
            "posted_at": self.clock(),
        }

    def _attempt_post(self, pending: PendingIntervention) -> None:
        try:
            self.sink.deliver(self._outbox_record(pending))
        except SinkFailureError as exc:
            pending.post_attempts += 1
            delay = min(self.retry_delay_secs * (2 ** (pending.post_attempts - 1)),
                        60.0)
            pending.next_post_attempt = self.epoch_clock() + delay
            self.audit.append("post_failed", {
                "pending_id": pending.pending_id,
                "attempts": pending.post_attempts,
                "error": str(exc),
            }, self.clock())
            return
        pending.transition(Status.POSTED, self.clock())
        self.counters["posted"] += 1
        self.audit.append("posted", {"pending_id": pending.pending_id},
                          self.clock())

    def retry_pending_posts(self) -> None:
        now = self.epoch_clock()
        for pending in self.pendings.values():
            if (pending.status is Status.APPROVED
                    and pending.post_attempts > 0
                    and now >= pending.next_post_attempt):
                self._attempt_post(pending)

    # ------------------------------------------------------------------
    # loop entry point and reads
    # ------------------------------------------------------------------

    def tick(self) -> None:
        """One scan cycle: retries, then scan + classify when enabled."""
        self.retry_pending_posts()
        if not self.scanner_enabled:
            return
        self.scan_once()
        self.classify_all()

    def counts_by_status(self) -> dict:
        counts = {status.value: 0 for status in Status}
        for pending in self.pendings.values():
            counts[pending.status.value] += 1
        return counts

    def snapshot_state(self) -> dict:
        return {
            "pendings": [p.to_dict() for p in self.pendings.values()],
            "seen_ids": sorted(self.seen_ids),
            "scanner_enabled": self.scanner_enabled,
            "counters": dict(self.counters),
        }

    def load_state(self, state: dict) -> None:
        self.pendings = {
            p["pending_id"]: PendingIntervention.from_dict(p)
            for p in state["pendings"]
        }
        self.seen_ids = set(state["seen_ids"])
        self.scanner_enabled = state["scanner_enabled"]
        self.counters = dict(state["counters"])

    # ------------------------------------------------------------------
    # replay
    # ------------------------------------------------------------------

    def apply_event(self, event) -> None:
        """Re-apply one audit event to the state, without side effects."""
        kind, payload = event.kind, event.payload
        if kind == "scanned":
            self.seen_ids.add(payload["tweet_id"])
            self.counters["scanned"] += 1
        elif kind == "filtered":
            tweet = TweetRecord.from_dict(payload["tweet"])
            pending = PendingIntervention(candidate=tweet,
                                          matched_keywords=payload["keywords"])
            pending.timestamps[Status.AWAITING_CLASSIFICATION.value] = event.timestamp
            self.pendings[tweet.id] = pending
            self.counters["matched"] += 1
        elif kind == "classified":
            pending = self.pendings[payload["pending_id"]]
            pending.confidence = payload["confidence"]
            if not payload["pro_tobacco"]:
                pending.transition(Status.DISCARDED, event.timestamp)
        elif kind == "match_failed":
            pending = self.pendings[payload["pending_id"]]
            if pending.status is Status.AWAITING_CLASSIFICATION:
                pending.transition(Status.DISCARDED, event.timestamp)
        elif kind == "matched":
            pending = self.pendings[payload["pending_id"]]
            pending.bin_id = payload["bin_id"]
            if self.group_model is not None:
                pending.proposed_message = self.group_model.messages.get(
                    payload["message_id"])
            pending.transition(Status.AWAITING_APPROVAL, event.timestamp)
            self.counters["awaiting_ever"] += 1
        elif kind == "approved":
            self.pendings[payload["pending_id"]].transition(
                Status.APPROVED, event.timestamp)
            self.counters["approved"] += 1
        elif kind == "rejected":
            self.pendings[payload["pending_id"]].transition(
                Status.REJECTED, event.timestamp)
        elif kind == "posted":
            self.pendings[payload["pending_id"]].transition(
                Status.POSTED, event.timestamp)
            self.counters["posted"] += 1
        elif kind == "scanner_toggled":
            self.scanner_enabled = payload["enabled"]
        # source_error / post_failed carry no state

    def restore_from_log(self, path: str | Path) -> int:
        """Rebuild state from a log file; returns the number of events kept."""
        snapshot, snapshot_id, events = read_log_file(path)
        if snapshot is not None:
            self.load_state(snapshot)
        for event in events:
            if event.event_id > snapshot_id:
                self.apply_event(event)
        self.audit.restore_from(events)
        return len(events)
