"""HTTP facade over the pipeline for the operator console and scripts.

All mutations are serialized through the pipeline runner's command queue;
read endpoints receive point-in-time snapshots computed on the pipeline
thread.  Every non-2xx response body has the shape
{"code": ..., "message": ..., "details": ...}.
"""

from __future__ import annotations

import queue
import threading
import time
from pathlib import Path

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel, StrictBool

from peernudge.audit import AuditLog
from peernudge.encoding import load_keywords
from peernudge.errors import (
    InvalidStateError,
    ModelNotLoadedError,
    UnknownPendingError,
)
from peernudge.matching import GroupModel, load_message_pool
from peernudge.pipeline import Pipeline, PipelineConfig, Status, TweetClassifier
from peernudge.sources import build_sink, build_source


class PipelineRunner:
    """Single writer thread: executes commands in order, ticks on schedule."""

    def __init__(self, pipeline: Pipeline, scan_interval_secs: float = 60.0):
        self.pipeline = pipeline
        self.scan_interval_secs = scan_interval_secs
        self._commands: queue.Queue = queue.Queue()
        self._stop = threading.Event()
        self._thread = threading.Thread(target=self._run, daemon=True)
        self.started_at = time.time()

    def start(self) -> "PipelineRunner":
        self._thread.start()
        return self

    def stop(self) -> None:
        self._stop.set()
        self._thread.join(timeout=5.0)

    def _run(self) -> None:
        next_tick = time.time()
        while not self._stop.is_set():
            timeout = max(next_tick - time.time(), 0.0)
            try:
                fn, done, result = self._commands.get(timeout=timeout)
            except queue.Empty:
                fn = None
            if fn is not None:
                try:
                    result["value"] = fn(self.pipeline)
                except BaseException as exc:  # handed back to the caller
                    result["error"] = exc
                done.set()
            if time.time() >= next_tick:
                self.pipeline.tick()
                next_tick = time.time() + self.scan_interval_secs

    def submit(self, fn, timeout: float = 10.0):
        """Run ``fn(pipeline)`` on the pipeline thread and return its result."""
        if not self._thread.is_alive():
            return fn(self.pipeline)
        done = threading.Event()
        result: dict = {}
        self._commands.put((fn, done, result))
        if not done.wait(timeout=timeout):
            raise TimeoutError("pipeline command timed out")
        if "error" in result:
            raise result["error"]
        return result.get("value")

    @property
    def uptime_secs(self) -> float:
        return time.time() - self.started_at


class ScannerToggle(BaseModel):
    enabled: StrictBool


class OperatorAction(BaseModel):
    operator_id: str = "console"


def _error_response(status_code: int, code: str, message: str,
                    details: dict | None = None) -> JSONResponse:
    return JSONResponse(status_code=status_code, content={
        "code": code, "message": message, "details": details or {},
    })


def create_app(runner: PipelineRunner, group_model: GroupModel | None = None,
               ui_dir: str | Path | None = None,
               long_poll_timeout: float = 25.0) -> FastAPI:
    app = FastAPI(title="peernudge operator API")
    pipeline = runner.pipeline

    @app.exception_handler(RequestValidationError)
    async def validation_handler(request: Request, exc: RequestValidationError):
        return _error_response(400, "bad_request", "malformed request",
                               {"errors": [str(e.get("msg", e)) for e in exc.errors()]})

    @app.exception_handler(UnknownPendingError)
    async def unknown_handler(request: Request, exc: UnknownPendingError):
        return _error_response(404, "not_found", str(exc))

    @app.exception_handler(InvalidStateError)
    async def state_handler(request: Request, exc: InvalidStateError):
        return _error_response(409, "invalid_transition", str(exc))

    @app.exception_handler(ModelNotLoadedError)
    async def model_handler(request: Request, exc: ModelNotLoadedError):
        return _error_response(409, "model_not_loaded", str(exc))

    @app.get("/status")
    def status():
        def read(p: Pipeline):
            return {
                "scanner_enabled": p.scanner_enabled,
                "model_loaded": p.classifier is not None,
                "counts": p.counts_by_status(),
                "uptime_secs": runner.uptime_secs,
                "last_event_id": p.audit.last_event_id,
            }
        return runner.submit(read)

    @app.post("/scanner")
    def set_scanner(body: ScannerToggle):
        enabled = runner.submit(lambda p: p.set_scanner(body.enabled))
        return {"scanner_enabled": enabled}

    @app.get("/candidates")
    def candidates(status: str | None = None, limit: int = 50, offset: int = 0):
        if status is not None and status not in {s.value for s in Status}:
            return _error_response(400, "bad_request",
                                   f"unknown status {status!r}")
        if limit < 1 or offset < 0:
            return _error_response(400, "bad_request",
                                   "limit must be >= 1 and offset >= 0")

        def read(p: Pipeline):
            records = [pend.to_dict() for pend in p.pendings.values()
                       if status is None or pend.status.value == status]
            return {"total": len(records),
                    "items": records[offset:offset + limit],
                    "limit": limit, "offset": offset}
        return runner.submit(read)

    @app.post("/candidates/{pending_id}/approve")
    def approve(pending_id: str, body: OperatorAction | None = None):
        operator = (body or OperatorAction()).operator_id
        record = runner.submit(lambda p: p.approve(pending_id, operator).to_dict())
        return record

    @app.post("/candidates/{pending_id}/reject")
    def reject(pending_id: str, body: OperatorAction | None = None):
        operator = (body or OperatorAction()).operator_id
        record = runner.submit(lambda p: p.reject(pending_id, operator).to_dict())
        return record

    @app.get("/candidates/{pending_id}/intervention")
    def intervention(pending_id: str):
        def read(p: Pipeline):
            pending = p._get(pending_id)
            if pending.bin_id is None or pending.proposed_message is None:
                raise InvalidStateError(
                    f"{pending_id} has no matched intervention "
                    f"(status {pending.status.value})"
                )
            path = (group_model.bin_path(pending.candidate.author)
                    if group_model is not None else [])
            return {
                "pending_id": pending_id,
                "bin_id": pending.bin_id,
                "proposed_message": pending.proposed_message.to_dict(),
                "bin_path": path,
            }
        return runner.submit(read)

    @app.get("/model/tree")
    def model_tree():
        if group_model is None:
            raise ModelNotLoadedError("no group model loaded")
        return group_model.to_dict()

    @app.get("/candidates/updates")
    def updates(since: int = 0, timeout_secs: float | None = None):
        wait = long_poll_timeout if timeout_secs is None else timeout_secs
        pipeline.audit.wait_for(since, timeout=min(wait, long_poll_timeout))

        def read(p: Pipeline):
            events = p.audit.events_after(since)
            return {"latest_event_id": p.audit.last_event_id,
                    "events": [e.to_dict() for e in events]}
        return runner.submit(read)

    if ui_dir is not None and Path(ui_dir).is_dir():
        app.mount("/ui", StaticFiles(directory=str(ui_dir), html=True), name="ui")

    return app


def build_pipeline(config: PipelineConfig) -> tuple[Pipeline, GroupModel | None]:
    """Assemble a pipeline (and its group model) from a config."""
    keywords = load_keywords(config.keywords_path)
    classifier = None
    if config.model_checkpoint_path:
        classifier = TweetClassifier.from_checkpoint(config.model_checkpoint_path)
    group_model = None
    if config.message_pool_path:
        pool = load_message_pool(config.message_pool_path)
        group_model = GroupModel.build(pool, seed=config.seed)
    source = build_source(config.source)
    sink = build_sink(config.sink)
    audit = AuditLog(config.log_path, snapshot_every=config.snapshot_every)
    pipeline = Pipeline(
        keywords=keywords, classifier=classifier, group_model=group_model,
        source=source, sink=sink, threshold=config.classification_threshold,
        audit_log=audit, retry_delay_secs=config.retry_delay_secs,
    )
    if config.log_path and Path(config.log_path).exists():
        pipeline.restore_from_log(config.log_path)
    return pipeline, group_model


def serve(config_path: str | Path, port: int = 8000, host: str = "127.0.0.1",
          ui_dir: str | Path | None = None) -> None:
    """Blocking entry point used by the CLI ``serve`` subcommand."""
    import uvicorn

    config = PipelineConfig.from_file(config_path)
    pipeline, group_model = build_pipeline(config)
    runner = PipelineRunner(pipeline, scan_interval_secs=config.scan_interval_secs)
    runner.start()
    if ui_dir is None:
        default_ui = Path(__file__).resolve().parents[2] / "frontend" / "dist"
        ui_dir = default_ui if default_ui.is_dir() else None
    app = create_app(runner, group_model=group_model, ui_dir=ui_dir)
    try:
        uvicorn.run(app, host=host, port=port, log_level="warning")
    finally:
        runner.stop()
