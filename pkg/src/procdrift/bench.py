"""Benchmark the compiled constraint kernel against the numpy fallback.

Run with ``python -m procdrift.bench``. Both backends are timed on the same
synthetic workload and their outputs are verified to be identical, so the
numbers are comparable and the fallback is exercised on every run.
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from . import _kernel_py
from .declare import _encode
from .synthetic import synthesize_log

TENSOR_NAMES = ("counts", "chain", "resp", "altresp", "prec", "altprec")


def _load_compiled():
    try:
        from . import _speedups  # type: ignore[attr-defined]
    except ImportError:
        return None
    return _speedups.log_tensors


def run_benchmark(n_traces: int, n_acts: int, repeats: int) -> dict:
    log = synthesize_log(n_traces=n_traces, n_acts=n_acts, seed=7, loop_prob=0.2)
    codes, offsets = _encode(log.traces, log.alphabet)
    n = len(log.alphabet)

    backends = {"python": _kernel_py.log_tensors}
    compiled = _load_compiled()
    if compiled is not None:
        backends["compiled"] = compiled

    timings: dict[str, float] = {}
    outputs: dict[str, tuple] = {}
    for name, fn in backends.items():
        best = float("inf")
        for _ in range(repeats):
            t0 = time.perf_counter()
            out = fn(codes, offsets, n)
            best = min(best, time.perf_counter() - t0)
        timings[name] = best
        outputs[name] = out

    if compiled is not None:
        for tensor_name, a, b in zip(
            TENSOR_NAMES, outputs["python"], outputs["compiled"]
        ):
            if not np.array_equal(a, b):
                raise AssertionError(f"backend mismatch in tensor {tensor_name!r}")

    return {
        "n_traces": n_traces,
        "n_acts": n_acts,
        "n_events": log.n_events,
        "repeats": repeats,
        "timings": timings,
        "outputs_equal": compiled is not None,
    }


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="python -m procdrift.bench",
        description="Time the per-trace constraint kernel on both backends.",
    )
    parser.add_argument("--traces", type=int, default=5000)
    parser.add_argument("--acts", type=int, default=16)
    parser.add_argument("--repeats", type=int, default=5)
    args = parser.parse_args(argv)

    result = run_benchmark(args.traces, args.acts, args.repeats)
    print(
        f"workload: {result['n_traces']} traces, {result['n_acts']} activities, "
        f"{result['n_events']} events (best of {result['repeats']})"
    )
    py = result["timings"]["python"]
    print(f"  python    {py * 1000:8.1f} ms")
    if "compiled" in result["timings"]:
        comp = result["timings"]["compiled"]
        print(f"  compiled  {comp * 1000:8.1f} ms   ({py / comp:.1f}x faster)")
        print("  outputs identical across backends")
    else:
        print("  compiled  unavailable (extension not built)")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
