"""Pluggable tweet sources and delivery sinks.

Two sources ship: JSONL file replay and an HTTP-polling client for a mock
feed service.  Two sinks ship: a JSONL outbox file (default) and a webhook
POST.  Live social-network access is deliberately absent.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import requests

from peernudge.errors import SinkFailureError, SourceUnavailableError
from peernudge.matching import UserMetadata


@dataclass(frozen=True)
class TweetRecord:
    """One post pulled from a source."""

    id: str
    text: str
    author: UserMetadata
    created_at: str
    author_handle: str | None = None

    def __post_init__(self):
        if not self.text:
            raise ValueError("tweet text must be non-empty")

    @property
    def mention(self) -> str:
        handle = self.author_handle or f"user_{self.id}"
        return handle if handle.startswith("@") else f"@{handle}"

    def to_dict(self) -> dict:
        return {"id": self.id, "text": self.text,
                "author": self.author.to_dict(),
                "created_at": self.created_at,
                "author_handle": self.author_handle}

    @classmethod
    def from_dict(cls, data: dict) -> "TweetRecord":
        return cls(id=str(data["id"]), text=data["text"],
                   author=UserMetadata.from_dict(data["author"]),
                   created_at=data.get("created_at", ""),
                   author_handle=data.get("author_handle"))


class JsonlReplaySource:
    """Replays a JSONL tweet file in fixed-size batches, then empties out."""

    def __init__(self, path: str | Path, batch_size: int = 20):
        self.batch_size = batch_size
        try:
            text = Path(path).read_text(encoding="utf-8")
        except OSError as exc:
            raise SourceUnavailableError(f"cannot read tweet file {path}: {exc}") from exc
        self._tweets = [
            TweetRecord.from_dict(json.loads(line))
            for line in text.splitlines() if line.strip()
        ]
        self._cursor = 0

    def next_batch(self) -> list[TweetRecord]:
        batch = self._tweets[self._cursor:self._cursor + self.batch_size]
        self._cursor += len(batch)
        return batch

    @property
    def exhausted(self) -> bool:
        return self._cursor >= len(self._tweets)


class HttpPollSource:
    """Polls ``GET {url}?cursor=N`` expecting {"tweets": [...], "cursor": M}."""

    def __init__(self, url: str, timeout: float = 5.0):
        self.url = url
        self.timeout = timeout
        self._cursor = 0

    def next_batch(self) -> list[TweetRecord]:
        try:
            resp = requests.get(self.url, params={"cursor": self._cursor},
                                timeout=self.timeout)
            resp.raise_for_status()
            payload = resp.json()
        except (requests.RequestException, ValueError) as exc:
            raise SourceUnavailableError(f"feed poll failed: {exc}") from exc
        self._cursor = int(payload.get("cursor", self._cursor))
        return [TweetRecord.from_dict(t) for t in payload.get("tweets", [])]


class ListSource:
    """In-memory source for tests and demos."""

    def __init__(self, tweets: list[TweetRecord], batch_size: int = 20):
        self._tweets = list(tweets)
        self.batch_size = batch_size
        self._cursor = 0

    def push(self, tweet: TweetRecord) -> None:
        self._tweets.append(tweet)

    def next_batch(self) -> list[TweetRecord]:
        batch = self._tweets[self._cursor:self._cursor + self.batch_size]
        self._cursor += len(batch)
        return batch


@dataclass
class JsonlOutboxSink:
    """Appends each delivery record as one JSON line."""

    path: Path

    def __post_init__(self):
        self.path = Path(self.path)

    def deliver(self, record: dict) -> None:
        try:
            self.path.parent.mkdir(parents=True, exist_ok=True)
            with self.path.open("a", encoding="utf-8") as fh:
                fh.write(json.dumps(record) + "\n")
        except OSError as exc:
            raise SinkFailureError(f"outbox write failed: {exc}") from exc

    def read_all(self) -> list[dict]:
        if not self.path.exists():
            return []
        return [json.loads(line) for line in
                self.path.read_text(encoding="utf-8").splitlines() if line.strip()]


@dataclass
class WebhookSink:
    """POSTs each delivery record as JSON to a configured URL."""

    url: str
    timeout: float = 5.0

    def deliver(self, record: dict) -> None:
        try:
            resp = requests.post(self.url, json=record, timeout=self.timeout)
            resp.raise_for_status()
        except requests.RequestException as exc:
            raise SinkFailureError(f"webhook delivery failed: {exc}") from exc


class FlakySink:
    """Test sink that fails until ``fail_times`` deliveries were attempted."""

    def __init__(self, fail_times: int = 0):
        self.fail_times = fail_times
        self.attempts = 0
        self.delivered: list[dict] = []

    def deliver(self, record: dict) -> None:
        self.attempts += 1
        if self.attempts <= self.fail_times:
            raise SinkFailureError("injected sink failure")
        self.delivered.append(record)


def build_source(spec: dict):
    kind = spec.get("type")
    if kind == "jsonl":
        return JsonlReplaySource(spec["path"], batch_size=spec.get("batch_size", 20))
    if kind == "http":
        return HttpPollSource(spec["url"], timeout=spec.get("timeout", 5.0))
    raise ValueError(f"unknown source type {kind!r}")


def build_sink(spec: dict):
    kind = spec.get("type")
    if kind == "jsonl":
        return JsonlOutboxSink(spec["path"])
    if kind == "webhook":
        return WebhookSink(spec["url"], timeout=spec.get("timeout", 5.0))
    raise ValueError(f"unknown sink type {kind!r}")
