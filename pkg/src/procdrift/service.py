"""HTTP facade over the analysis pipeline.

Uploaded logs are content-addressed on disk; analyses run on a bounded
worker pool and are polled through opaque handles. Every read endpoint
serves views of an immutable report.json, so repeated reads are
byte-identical.
"""

from __future__ import annotations

import hashlib
import json
import os
import threading
import uuid
from concurrent.futures import ThreadPoolExecutor
from contextlib import asynccontextmanager
from datetime import datetime, timezone
from pathlib import Path

from fastapi import FastAPI, Request, UploadFile
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse, Response

from .log import (
    EventLog,
    LogParseError,
    dumps_canonical,
    format_timestamp,
    parse_csv,
    parse_xes,
)
from .render import chart_data, drift_map_layout, render_drift_map
from .report import AnalysisCancelled, AnalysisParams, ParamError, analyze

DEFAULT_MAX_UPLOAD_MB = 64


def _utcnow() -> str:
    return format_timestamp(datetime.now(timezone.utc))


def _parse_upload(data: bytes, filename: str) -> EventLog:
    name = (filename or "").lower()
    if name.endswith(".csv"):
        return parse_csv(data)
    if name.endswith((".xes", ".xml")):
        return parse_xes(data)
    if data.lstrip()[:1] == b"<":
        return parse_xes(data)
    return parse_csv(data)


class AnalysisStore:
    """Disk layout: logs/<sha>.src|.json, analyses/<id>/handle.json|report.json."""

    def __init__(self, data_dir: Path, max_upload_mb: int, max_workers: int | None):
        self.data_dir = data_dir
        self.logs_dir = data_dir / "logs"
        self.analyses_dir = data_dir / "analyses"
        self.logs_dir.mkdir(parents=True, exist_ok=True)
        self.analyses_dir.mkdir(parents=True, exist_ok=True)
        self.max_upload_bytes = max_upload_mb * 1024 * 1024
        self.lock = threading.Lock()
        self.executor = ThreadPoolExecutor(
            max_workers=max_workers or os.cpu_count() or 2
        )
        self.jobs: dict[str, dict] = {}
        self._reports: dict[str, dict] = {}
        self._recover()

    def close(self) -> None:
        self.executor.shutdown(wait=False, cancel_futures=True)

    # -- logs ------------------------------------------------------------

    def save_log(self, data: bytes, filename: str) -> dict:
        log = _parse_upload(data, filename)
        log_id = hashlib.sha256(data).hexdigest()
        t0, t1 = log.time_span
        meta = {
            "log_id": log_id,
            "filename": filename or "",
            "size": len(data),
            "n_traces": len(log),
            "n_events": log.n_events,
            "alphabet": list(log.alphabet),
            "time_span": [format_timestamp(t0), format_timestamp(t1)],
        }
        src = self.logs_dir / f"{log_id}.src"
        if not src.exists():
            src.write_bytes(data)
            (self.logs_dir / f"{log_id}.json").write_text(
                dumps_canonical(meta), encoding="utf-8"
            )
        return meta

    def log_meta(self, log_id: str) -> dict | None:
        path = self.logs_dir / f"{log_id}.json"
        if not path.exists():
            return None
        return json.loads(path.read_text(encoding="utf-8"))

    def load_log(self, log_id: str) -> EventLog:
        meta = self.log_meta(log_id)
        data = (self.logs_dir / f"{log_id}.src").read_bytes()
        return _parse_upload(data, meta["filename"] if meta else "")

    # -- analyses --------------------------------------------------------

    def _handle_path(self, analysis_id: str) -> Path:
        return self.analyses_dir / analysis_id / "handle.json"

    def _report_path(self, analysis_id: str) -> Path:
        return self.analyses_dir / analysis_id / "report.json"

    def _write_handle(self, handle: dict) -> None:
        path = self._handle_path(handle["id"])
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(dumps_canonical(handle), encoding="utf-8")

    def _recover(self) -> None:
        # jobs do not survive a restart; mark leftovers from a previous run
        for handle_path in self.analyses_dir.glob("*/handle.json"):
            handle = json.loads(handle_path.read_text(encoding="utf-8"))
            if handle.get("state") in ("pending", "running"):
                handle["state"] = "failed"
                handle["error"] = "interrupted by service restart"
                handle_path.write_text(dumps_canonical(handle), encoding="utf-8")

    def get_handle(self, analysis_id: str) -> dict | None:
        with self.lock:
            job = self.jobs.get(analysis_id)
            if job is not None:
                return dict(job["handle"])
        path = self._handle_path(analysis_id)
        if not path.exists():
            return None
        return json.loads(path.read_text(encoding="utf-8"))

    def start_analysis(self, log_id: str, params: AnalysisParams) -> dict:
        handle = {
            "id": uuid.uuid4().hex,
            "state": "pending",
            "log_id": log_id,
            "params": params.to_json(),
            "created_at": _utcnow(),
            "error": None,
        }
        cancel = threading.Event()
        job = {"handle": handle, "cancel": cancel}
        with self.lock:
            self.jobs[handle["id"]] = job
        self._write_handle(handle)
        job["future"] = self.executor.submit(
            self._run, handle["id"], log_id, params, cancel
        )
        return dict(handle)

    def _transition(self, analysis_id: str, state: str, error: str | None = None) -> None:
        with self.lock:
            job = self.jobs.get(analysis_id)
            if job is None:
                return
            if job["handle"]["state"] in ("done", "failed"):
                return
            job["handle"]["state"] = state
            job["handle"]["error"] = error
            handle = dict(job["handle"])
        self._write_handle(handle)

    def _run(
        self,
        analysis_id: str,
        log_id: str,
        params: AnalysisParams,
        cancel: threading.Event,
    ) -> None:
        if cancel.is_set():
            self._transition(analysis_id, "failed", "canceled")
            return
        self._transition(analysis_id, "running")
        try:
            log = self.load_log(log_id)
            report = analyze(log, params, cancel=cancel.is_set)
            self._report_path(analysis_id).write_text(
                dumps_canonical(report.to_json_dict()), encoding="utf-8"
            )
            self._transition(analysis_id, "done")
        except AnalysisCancelled:
            self._transition(analysis_id, "failed", "canceled")
        except Exception as exc:  # surfaced through the handle, not the log
            self._transition(analysis_id, "failed", str(exc))

    def cancel(self, analysis_id: str) -> dict | None:
        """Request cancellation; returns the handle, or None if unknown."""
        with self.lock:
            job = self.jobs.get(analysis_id)
        if job is None:
            return self.get_handle(analysis_id)
        job["cancel"].set()
        future = job.get("future")
        if future is not None and future.cancel():
            self._transition(analysis_id, "failed", "canceled")
        return self.get_handle(analysis_id)

    def report(self, analysis_id: str) -> dict | None:
        cached = self._reports.get(analysis_id)
        if cached is not None:
            return cached
        path = self._report_path(analysis_id)
        if not path.exists():
            return None
        data = json.loads(path.read_text(encoding="utf-8"))
        self._reports[analysis_id] = data
        return data


def _error(status: int, detail) -> JSONResponse:
    return JSONResponse(status_code=status, content={"detail": detail})


def create_app(
    data_dir: str | Path | None = None,
    max_upload_mb: int | None = None,
    max_workers: int | None = None,
) -> FastAPI:
    data_dir = Path(data_dir or os.environ.get("DATA_DIR", "procdrift-data"))
    if max_upload_mb is None:
        max_upload_mb = int(os.environ.get("MAX_UPLOAD_MB", DEFAULT_MAX_UPLOAD_MB))
    store = AnalysisStore(data_dir, max_upload_mb, max_workers)

    @asynccontextmanager
    async def lifespan(app: FastAPI):
        yield
        store.close()

    app = FastAPI(
        title="procdrift",
        description="Concept-drift analysis for process event logs.",
        version="0.1.0",
        lifespan=lifespan,
    )
    app.state.store = store
    # the browser client may be served from a different origin
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )

    @app.post("/logs", status_code=201)
    async def upload_log(file: UploadFile):
        data = await file.read()
        if len(data) > store.max_upload_bytes:
            return _error(
                413,
                {
                    "component": "log_io",
                    "error": f"upload exceeds {max_upload_mb} MiB limit",
                },
            )
        try:
            meta = store.save_log(data, file.filename or "")
        except LogParseError as exc:
            return _error(400, {"component": "log_io", "error": str(exc)})
        return meta

    @app.post("/analyses", status_code=202)
    async def start_analysis(body: dict):
        log_id = body.get("log_id")
        if not isinstance(log_id, str) or not log_id:
            return _error(422, {"field": "log_id", "message": "log_id is required"})
        meta = store.log_meta(log_id)
        if meta is None:
            return _error(404, {"message": f"unknown log {log_id}"})
        raw_params = body.get("params") or {}
        if not isinstance(raw_params, dict):
            return _error(422, {"field": "params", "message": "params must be an object"})
        try:
            params = AnalysisParams.from_dict(raw_params).validate(meta["n_traces"])
        except ParamError as exc:
            return _error(422, {"field": exc.field, "message": str(exc)})
        except (TypeError, ValueError) as exc:
            return _error(422, {"field": "params", "message": str(exc)})
        return store.start_analysis(log_id, params)

    def _lookup(analysis_id: str):
        handle = store.get_handle(analysis_id)
        if handle is None:
            return None, _error(404, {"message": f"unknown analysis {analysis_id}"})
        return handle, None

    def _report_or_error(analysis_id: str):
        handle, err = _lookup(analysis_id)
        if err is not None:
            return None, err
        if handle["state"] != "done":
            return None, _error(
                409,
                {
                    "message": f"analysis is {handle['state']}, not done",
                    "state": handle["state"],
                },
            )
        return store.report(analysis_id), None

    @app.get("/analyses/{analysis_id}")
    async def get_analysis(analysis_id: str):
        handle, err = _lookup(analysis_id)
        if err is not None:
            return err
        if handle["state"] == "done":
            report = store.report(analysis_id)
            if report is not None:
                handle = dict(handle)
                handle["summary"] = {
                    "n_windows": len(report["windows"]),
                    "n_clusters": len(report["clusters"]),
                    "constraint_counts": report["constraint_counts"],
                    "global_change_points": report["global_change_points"],
                    "spread": report["spread"],
                }
        return handle

    @app.delete("/analyses/{analysis_id}")
    async def cancel_analysis(analysis_id: str):
        handle, err = _lookup(analysis_id)
        if err is not None:
            return err
        if handle["state"] == "done":
            return _error(409, {"message": "analysis already done; not cancelable"})
        return store.cancel(analysis_id)

    @app.get("/analyses/{analysis_id}/driftmap")
    async def get_driftmap(analysis_id: str, request: Request):
        report, err = _report_or_error(analysis_id)
        if err is not None:
            return err
        if "image/svg+xml" in request.headers.get("accept", ""):
            return Response(render_drift_map(report), media_type="image/svg+xml")
        return drift_map_layout(report)

    @app.get("/analyses/{analysis_id}/clusters")
    async def get_clusters(analysis_id: str):
        report, err = _report_or_error(analysis_id)
        if err is not None:
            return err
        return [
            {
                "id": c["id"],
                "rank": c["rank"],
                "size": c["size"],
                "erratic": c["erratic"],
                "tags": c["tags"],
                "change_points": c["change_points"],
                "case_count": c["case_count"],
            }
            for c in report["clusters"]
        ]

    def _cluster_or_error(analysis_id: str, k: int):
        report, err = _report_or_error(analysis_id)
        if err is not None:
            return None, None, err
        for cluster in report["clusters"]:
            if cluster["id"] == k:
                return report, cluster, None
        return None, None, _error(404, {"message": f"no cluster with id {k}"})

    @app.get("/analyses/{analysis_id}/clusters/{k}/chart")
    async def get_chart(analysis_id: str, k: int):
        report, _, err = _cluster_or_error(analysis_id, k)
        if err is not None:
            return err
        return chart_data(report, k)

    @app.get("/analyses/{analysis_id}/clusters/{k}/constraints")
    async def get_constraints(analysis_id: str, k: int):
        _, cluster, err = _cluster_or_error(analysis_id, k)
        if err is not None:
            return err
        return {"cluster": k, "constraints": cluster["constraints_minimized"]}

    @app.get("/analyses/{analysis_id}/clusters/{k}/edfg")
    async def get_edfg(analysis_id: str, k: int):
        _, cluster, err = _cluster_or_error(analysis_id, k)
        if err is not None:
            return err
        return cluster["edfg"]

    @app.get("/analyses/{analysis_id}/metrics")
    async def get_metrics(analysis_id: str):
        report, err = _report_or_error(analysis_id)
        if err is not None:
            return err
        return {
            "spread": report["spread"],
            "global_change_points": report["global_change_points"],
            "clusters": [
                {
                    "id": c["id"],
                    "erratic": c["erratic"],
                    "adf_statistic": c["adf_statistic"],
                    "adf_p": c["adf_p"],
                    "acf": c["acf"],
                    "tags": c["tags"],
                }
                for c in report["clusters"]
            ],
            "stable_band_size": report["stable_band"]["size"],
        }

    return app
