"""Regenerate the service-response fixtures used by the frontend tests.

Runs the real HTTP service in-process against a small synthetic log with an
injected sudden drift and saves each endpoint's JSON verbatim, so the test
fixtures are exactly what a browser would receive.

    python3 scripts/make_fixtures.py
"""

import json
import sys
import tempfile
import time
from pathlib import Path

from fastapi.testclient import TestClient

from procdrift.inject import inject_drift
from procdrift.log import serialize_xes
from procdrift.service import create_app
from procdrift.synthetic import synthesize_log

OUT = Path(__file__).resolve().parent.parent / "test" / "fixtures"
PARAMS = {"win_size": 30, "win_step": 15}


def dump(name: str, data) -> None:
    path = OUT / name
    path.write_text(
        json.dumps(data, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )
    print(f"wrote {path.relative_to(OUT.parent.parent)}")


def main() -> int:
    OUT.mkdir(parents=True, exist_ok=True)
    base = synthesize_log(300, 8, seed=11)
    drifted, truth = inject_drift(base, "sudden", (0.5,), seed=5)
    dump("truth.json", truth)

    with tempfile.TemporaryDirectory() as td:
        with TestClient(create_app(data_dir=td)) as client:
            meta = client.post(
                "/logs", files={"file": ("fixture.xes", serialize_xes(drifted))}
            ).json()
            handle = client.post(
                "/analyses", json={"log_id": meta["log_id"], "params": PARAMS}
            ).json()
            aid = handle["id"]
            while True:
                handle = client.get(f"/analyses/{aid}").json()
                if handle["state"] in ("done", "failed"):
                    break
                time.sleep(0.05)
            if handle["state"] != "done":
                print(f"analysis failed: {handle}", file=sys.stderr)
                return 1
            # ids vary per run; pin them so fixtures stay diffable
            handle["id"] = "fixture-analysis"
            handle["created_at"] = "2026-01-01T00:00:00.000+00:00"
            dump("handle.json", handle)
            dump("driftmap.json", client.get(f"/analyses/{aid}/driftmap").json())
            clusters = client.get(f"/analyses/{aid}/clusters").json()
            dump("clusters.json", clusters)
            for c in clusters:
                k = c["id"]
                root = f"/analyses/{aid}/clusters/{k}"
                dump(f"chart-{k}.json", client.get(f"{root}/chart").json())
                dump(f"constraints-{k}.json", client.get(f"{root}/constraints").json())
                dump(f"edfg-{k}.json", client.get(f"{root}/edfg").json())
            dump("metrics.json", client.get(f"/analyses/{aid}/metrics").json())
    return 0


if __name__ == "__main__":
    sys.exit(main())
