"""HTTP service: upload, lifecycle, report views, and failure modes."""

import json
import threading
import time

import pytest
from fastapi.testclient import TestClient

from procdrift.cli import main as cli_main
from procdrift.log import serialize_csv, serialize_xes
from procdrift.service import AnalysisStore, create_app
from procdrift.synthetic import synthesize_log

LOG = synthesize_log(n_traces=200, n_acts=6, seed=50)
LOG_BYTES = serialize_xes(LOG)


def wait_done(client, analysis_id, timeout=60.0):
    deadline = time.monotonic() + timeout
    while time.monotonic() < deadline:
        handle = client.get(f"/analyses/{analysis_id}").json()
        if handle["state"] in ("done", "failed"):
            return handle
        time.sleep(0.05)
    raise TimeoutError(f"analysis {analysis_id} did not finish")


@pytest.fixture(scope="module")
def client(tmp_path_factory):
    app = create_app(tmp_path_factory.mktemp("svc"))
    with TestClient(app) as c:
        yield c


@pytest.fixture(scope="module")
def log_id(client):
    resp = client.post("/logs", files={"file": ("demo.xes", LOG_BYTES)})
    assert resp.status_code == 201
    return resp.json()["log_id"]


@pytest.fixture(scope="module")
def done_analysis(client, log_id):
    resp = client.post("/analyses", json={"log_id": log_id})
    assert resp.status_code == 202
    handle = resp.json()
    assert handle["state"] in ("pending", "running")
    finished = wait_done(client, handle["id"])
    assert finished["state"] == "done", finished.get("error")
    return finished


class TestUpload:
    def test_meta_fields(self, client):
        resp = client.post("/logs", files={"file": ("demo.xes", LOG_BYTES)})
        assert resp.status_code == 201
        meta = resp.json()
        assert meta["n_traces"] == 200
        assert meta["n_events"] == LOG.n_events
        assert meta["alphabet"] == list(LOG.alphabet)
        assert len(meta["log_id"]) == 64
        assert meta["size"] == len(LOG_BYTES)

    def test_idempotent_by_content(self, client):
        a = client.post("/logs", files={"file": ("one.xes", LOG_BYTES)}).json()
        b = client.post("/logs", files={"file": ("two.xes", LOG_BYTES)}).json()
        assert a["log_id"] == b["log_id"]

    def test_csv_upload(self, client):
        data = serialize_csv(LOG).encode()
        resp = client.post("/logs", files={"file": ("demo.csv", data)})
        assert resp.status_code == 201
        assert resp.json()["n_traces"] == 200

    def test_extensionless_sniffing(self, client):
        resp = client.post("/logs", files={"file": ("blob", LOG_BYTES)})
        assert resp.status_code == 201

    def test_unparseable_upload_400(self, client):
        resp = client.post("/logs", files={"file": ("bad.xes", b"<not-a-log/>")})
        assert resp.status_code == 400
        detail = resp.json()["detail"]
        assert detail["component"] == "log_io"
        assert detail["error"]

    def test_oversize_upload_413(self, tmp_path):
        app = create_app(tmp_path, max_upload_mb=1)
        with TestClient(app) as c:
            resp = c.post(
                "/logs", files={"file": ("big.csv", b"x" * (1024 * 1024 + 1))}
            )
            assert resp.status_code == 413

    def test_missing_file_field_422(self, client):
        assert client.post("/logs").status_code == 422


class TestStartAnalysis:
    def test_missing_log_id(self, client):
        resp = client.post("/analyses", json={})
        assert resp.status_code == 422
        assert resp.json()["detail"]["field"] == "log_id"

    def test_unknown_log(self, client):
        resp = client.post("/analyses", json={"log_id": "f" * 64})
        assert resp.status_code == 404

    def test_bad_params_named_field(self, client, log_id):
        resp = client.post(
            "/analyses",
            json={"log_id": log_id, "params": {"win_size": 10, "win_step": 20}},
        )
        assert resp.status_code == 422
        assert resp.json()["detail"]["field"] == "win_step"

    def test_unknown_param_key_named(self, client, log_id):
        resp = client.post(
            "/analyses", json={"log_id": log_id, "params": {"window": 5}}
        )
        assert resp.status_code == 422
        assert resp.json()["detail"]["field"] == "window"

    def test_params_must_be_object(self, client, log_id):
        resp = client.post(
            "/analyses", json={"log_id": log_id, "params": [1, 2]}
        )
        assert resp.status_code == 422

    def test_resolved_params_echoed(self, client, log_id, done_analysis):
        assert done_analysis["params"]["win_size"] == 200 // 61 * 2
        assert done_analysis["params"]["win_step"] == 200 // 61
        assert done_analysis["log_id"] == log_id


class TestLifecycle:
    def test_done_handle_has_summary(self, done_analysis):
        summary = done_analysis["summary"]
        assert summary["n_windows"] > 0
        assert summary["n_clusters"] >= 1
        counts = summary["constraint_counts"]
        assert (
            counts["dropped_all_zero"] + counts["stable"] + counts["clustered"]
            == counts["enumerated"]
        )
        assert "spread" in summary and "global_change_points" in summary

    def test_unknown_analysis_404(self, client):
        assert client.get("/analyses/deadbeef").status_code == 404

    def test_reads_before_done_409(self, tmp_path, log_id):
        app = create_app(tmp_path, max_workers=1)
        with TestClient(app) as c:
            store: AnalysisStore = app.state.store
            release = threading.Event()
            store.executor.submit(release.wait)  # occupy the only worker
            try:
                c.post("/logs", files={"file": ("demo.xes", LOG_BYTES)})
                handle = c.post("/analyses", json={"log_id": log_id}).json()
                aid = handle["id"]
                assert c.get(f"/analyses/{aid}").json()["state"] == "pending"
                for path in (
                    "metrics",
                    "driftmap",
                    "clusters",
                    "clusters/0/chart",
                    "clusters/0/constraints",
                    "clusters/0/edfg",
                ):
                    resp = c.get(f"/analyses/{aid}/{path}")
                    assert resp.status_code == 409
                    assert resp.json()["detail"]["state"] == "pending"
            finally:
                release.set()

    def test_cancel_pending_analysis(self, tmp_path, log_id):
        app = create_app(tmp_path, max_workers=1)
        with TestClient(app) as c:
            store: AnalysisStore = app.state.store
            release = threading.Event()
            store.executor.submit(release.wait)
            try:
                c.post("/logs", files={"file": ("demo.xes", LOG_BYTES)})
                handle = c.post("/analyses", json={"log_id": log_id}).json()
                resp = c.delete(f"/analyses/{handle['id']}")
                assert resp.status_code == 200
                canceled = resp.json()
                assert canceled["state"] == "failed"
                assert canceled["error"] == "canceled"
            finally:
                release.set()

    def test_cancel_done_analysis_409(self, client, done_analysis):
        resp = client.delete(f"/analyses/{done_analysis['id']}")
        assert resp.status_code == 409

    def test_cancel_unknown_404(self, client):
        assert client.delete("/analyses/deadbeef").status_code == 404

    def test_restart_marks_orphans_failed(self, tmp_path):
        store = AnalysisStore(tmp_path, 64, 1)
        handle = {
            "id": "orphan1",
            "state": "running",
            "log_id": "x",
            "params": {},
            "created_at": "2026-01-01T00:00:00.000Z",
            "error": None,
        }
        store._write_handle(handle)
        store.close()
        store2 = AnalysisStore(tmp_path, 64, 1)
        recovered = store2.get_handle("orphan1")
        assert recovered["state"] == "failed"
        assert recovered["error"] == "interrupted by service restart"
        store2.close()


class TestReportViews:
    def test_driftmap_layout_json(self, client, done_analysis):
        resp = client.get(f"/analyses/{done_analysis['id']}/driftmap")
        assert resp.status_code == 200
        layout = resp.json()
        assert {"rows", "bands", "lines", "n_windows", "colormap"} <= set(layout)

    def test_driftmap_svg_negotiated_and_stable(self, client, done_analysis):
        aid = done_analysis["id"]
        headers = {"accept": "image/svg+xml"}
        r1 = client.get(f"/analyses/{aid}/driftmap", headers=headers)
        r2 = client.get(f"/analyses/{aid}/driftmap", headers=headers)
        assert r1.headers["content-type"].startswith("image/svg+xml")
        assert r1.content.startswith(b"<svg ")
        assert r1.content == r2.content

    def test_clusters_listing_ranked(self, client, done_analysis):
        resp = client.get(f"/analyses/{done_analysis['id']}/clusters")
        clusters = resp.json()
        assert clusters
        assert [c["rank"] for c in clusters] == list(range(len(clusters)))
        errs = [c["erratic"] for c in clusters]
        assert errs == sorted(errs, reverse=True)
        assert {"id", "size", "tags", "change_points", "case_count"} <= set(clusters[0])

    def test_cluster_chart(self, client, done_analysis):
        aid = done_analysis["id"]
        k = client.get(f"/analyses/{aid}/clusters").json()[0]["id"]
        data = client.get(f"/analyses/{aid}/clusters/{k}/chart").json()
        assert data["cluster"] == k
        assert len(data["mean_series"]) == done_analysis["summary"]["n_windows"]

    def test_cluster_constraints(self, client, done_analysis):
        aid = done_analysis["id"]
        k = client.get(f"/analyses/{aid}/clusters").json()[0]["id"]
        data = client.get(f"/analyses/{aid}/clusters/{k}/constraints").json()
        assert data["cluster"] == k
        for row in data["constraints"]:
            assert {"template", "a", "b", "min", "max", "mean"} <= set(row)

    def test_cluster_edfg(self, client, done_analysis):
        aid = done_analysis["id"]
        k = client.get(f"/analyses/{aid}/clusters").json()[0]["id"]
        edfg = client.get(f"/analyses/{aid}/clusters/{k}/edfg").json()
        assert "dfg" in edfg and "constraint_arcs" in edfg
        assert edfg["dfg"]["nodes"]

    def test_unknown_cluster_404(self, client, done_analysis):
        aid = done_analysis["id"]
        assert client.get(f"/analyses/{aid}/clusters/999/chart").status_code == 404

    def test_metrics_schema(self, client, done_analysis):
        metrics = client.get(f"/analyses/{done_analysis['id']}/metrics").json()
        assert {"spread", "global_change_points", "clusters", "stable_band_size"} <= set(
            metrics
        )
        for c in metrics["clusters"]:
            assert {"id", "erratic", "adf_statistic", "adf_p", "acf", "tags"} <= set(c)
            assert {"values", "significant", "band"} <= set(c["acf"])

    def test_openapi_served(self, client):
        assert client.get("/openapi.json").status_code == 200

    def test_cross_origin_reads_allowed(self, client, done_analysis):
        resp = client.get(
            f"/analyses/{done_analysis['id']}/clusters",
            headers={"origin": "http://localhost:3000"},
        )
        assert resp.status_code == 200
        assert resp.headers["access-control-allow-origin"] == "*"


class TestCliServiceEquivalence:
    def test_report_bytes_identical(self, client, done_analysis, tmp_path):
        log_file = tmp_path / "same.xes"
        log_file.write_bytes(LOG_BYTES)
        out = tmp_path / "out"
        assert cli_main(["analyze", "--log", str(log_file), "--out", str(out)]) == 0
        cli_bytes = (out / "report.json").read_bytes()
        store = client.app.state.store
        svc_bytes = store._report_path(done_analysis["id"]).read_bytes()
        assert cli_bytes == svc_bytes

    def test_report_json_loads(self, client, done_analysis):
        store = client.app.state.store
        data = json.loads(
            store._report_path(done_analysis["id"]).read_text(encoding="utf-8")
        )
        assert data["schema_version"] == 1
