"""Structured random log generation for benchmarks, fixtures, and demos."""

from __future__ import annotations

from datetime import datetime, timedelta, timezone

import numpy as np

from .log import Event, EventLog, Trace


def synthesize_log(
    n_traces: int = 1000,
    n_acts: int = 10,
    seed: int = 0,
    skip_prob: float = 0.1,
    repeat_prob: float = 0.1,
    insert_prob: float = 0.08,
    loop_prob: float = 0.0,
    loop_every: int = 0,
    start: datetime | None = None,
) -> EventLog:
    """Traces follow a linear skeleton a00..aNN with random local variations.

    With ``loop_prob`` > 0 a fraction of traces executes an optional two-step
    loop body (l00, l01) mid-process, repeated 1-3 times: a sub-behavior that
    only some cases exhibit. ``loop_every`` = k > 0 instead assigns the loop
    to every k-th trace, modelling a steady share of a distinct case type
    (the anchor step can still be skipped like any other, so the realized
    share runs slightly under 1/k).
    """
    rng = np.random.default_rng(seed)
    acts = [f"a{i:02d}" for i in range(n_acts)]
    loop_body = ["l00", "l01"]
    t0 = start or datetime(2021, 1, 1, tzinfo=timezone.utc)
    traces = []
    for i in range(n_traces):
        seq: list[str] = []
        j = 0
        take_loop = (
            i % loop_every == 0
            if loop_every > 0
            else loop_prob > 0 and rng.random() < loop_prob
        )
        while j < n_acts:
            if j > 0 and rng.random() < skip_prob:
                j += 1
                continue
            seq.append(acts[j])
            if rng.random() < repeat_prob:
                seq.append(acts[j])
            if rng.random() < insert_prob:
                seq.append(acts[int(rng.integers(0, n_acts))])
            if take_loop and j == n_acts // 2:
                for _ in range(int(rng.integers(1, 4))):
                    seq.extend(loop_body)
            j += 1
        if not seq:
            seq = [acts[0]]
        base = t0 + timedelta(minutes=i)
        events = [
            Event(act, base + timedelta(seconds=k)) for k, act in enumerate(seq)
        ]
        traces.append(Trace(f"case-{i:05d}", events))
    return EventLog.from_traces(traces)
