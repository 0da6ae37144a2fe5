"""Shared builders and reference implementations for the test suite.

The reference functions here (trace scanner, exhaustive segmentation) are
deliberately written in the most obvious way possible, trading speed for
reviewability, so they can serve as independent oracles.
"""

from __future__ import annotations

import itertools
from datetime import datetime, timedelta, timezone

import numpy as np

from procdrift.log import Event, EventLog, Trace

T0 = datetime(2020, 1, 1, tzinfo=timezone.utc)


def make_trace(activities, case_id: str = "c0", start: datetime = T0) -> Trace:
    """One trace from an activity sequence, events one second apart."""
    events = [
        Event(act, start + timedelta(seconds=i)) for i, act in enumerate(activities)
    ]
    return Trace(case_id, events)


def make_log(sequences) -> EventLog:
    """A log from compact sequences ('abc' or ['a','b','c']), one per trace.

    Trace i starts i minutes after the previous one, so log order follows
    list order.
    """
    traces = [
        make_trace(list(seq), case_id=f"c{i:04d}", start=T0 + timedelta(minutes=i))
        for i, seq in enumerate(sequences)
    ]
    return EventLog.from_traces(traces)


# -- naive per-trace constraint scanner ----------------------------------


def oracle_check(kind: str, a: str, b: str | None, seq) -> tuple[int, int]:
    """(activations, satisfied) for one template on one activity sequence.

    Straight transliteration of the template definitions; every quantifier
    becomes an explicit scan.
    """
    seq = list(seq)
    n = len(seq)
    if kind == "AtMostOne":
        occ = [i for i, x in enumerate(seq) if x == a]
        return len(occ), len(occ) if len(occ) == 1 else 0
    if kind == "Response":
        acts = [i for i, x in enumerate(seq) if x == a]
        sat = sum(1 for i in acts if any(seq[j] == b for j in range(i + 1, n)))
        return len(acts), sat
    if kind == "AlternateResponse":
        acts = [i for i, x in enumerate(seq) if x == a]
        sat = 0
        for i in acts:
            for j in range(i + 1, n):
                if seq[j] == a:
                    break
                if seq[j] == b:
                    sat += 1
                    break
        return len(acts), sat
    if kind == "ChainResponse":
        acts = [i for i, x in enumerate(seq) if x == a]
        sat = sum(1 for i in acts if i + 1 < n and seq[i + 1] == b)
        return len(acts), sat
    if kind == "Precedence":
        acts = [i for i, x in enumerate(seq) if x == b]
        sat = sum(1 for i in acts if any(seq[j] == a for j in range(i)))
        return len(acts), sat
    if kind == "AlternatePrecedence":
        acts = [i for i, x in enumerate(seq) if x == b]
        sat = 0
        for i in acts:
            for j in range(i - 1, -1, -1):
                if seq[j] == b:
                    break
                if seq[j] == a:
                    sat += 1
                    break
        return len(acts), sat
    if kind == "ChainPrecedence":
        acts = [i for i, x in enumerate(seq) if x == b]
        sat = sum(1 for i in acts if i > 0 and seq[i - 1] == a)
        return len(acts), sat
    if kind == "Succession":
        ra, rs = oracle_check("Response", a, b, seq)
        pa, ps = oracle_check("Precedence", a, b, seq)
        return ra + pa, rs + ps
    if kind == "NotSuccession":
        acts = [i for i, x in enumerate(seq) if x == a]
        sat = sum(1 for i in acts if not any(seq[j] == b for j in range(i + 1, n)))
        return len(acts), sat
    raise ValueError(f"unknown template kind {kind!r}")


# -- exhaustive change-point segmentation --------------------------------


def l2_cost_direct(points: np.ndarray):
    """Two-pass within-segment sum of squared deviations, no shortcuts."""
    pts = np.asarray(points, dtype=float)
    if pts.ndim == 1:
        pts = pts[:, None]

    def cost(s: int, e: int) -> float:
        seg = pts[s:e]
        return float(((seg - seg.mean(axis=0)) ** 2).sum())

    return cost


def brute_force_segmentation(
    points: np.ndarray, penalty: float, min_segment: int = 1, cost_fn=None
):
    """Minimize total segment cost + penalty per cut over every cut subset."""
    points = np.asarray(points, dtype=float)
    if points.ndim == 1:
        points = points[:, None]
    n = points.shape[0]
    cost = cost_fn if cost_fn is not None else l2_cost_direct(points)
    best_obj = float("inf")
    best_cuts: list[int] = []
    for r in range(0, n):
        for cuts in itertools.combinations(range(1, n), r):
            bounds = [0, *cuts, n]
            if any(e - s < min_segment for s, e in zip(bounds, bounds[1:])):
                continue
            total = sum(cost(s, e) for s, e in zip(bounds, bounds[1:]))
            total += penalty * r
            if total < best_obj - 1e-12:
                best_obj = total
                best_cuts = list(cuts)
    return best_cuts, best_obj


# -- drift scoring -------------------------------------------------------


def merge_near(points, gap: int = 1) -> list[int]:
    """Deduplicate detections closer than `gap`+1 windows apart."""
    out: list[int] = []
    for p in sorted(points):
        if out and p - out[-1] <= gap:
            continue
        out.append(p)
    return out


def fscore(truth, pred, tol: int = 1) -> float:
    """F-score with greedy matching of detections to truths within ±tol."""
    truth = list(truth)
    pred = list(pred)
    if not truth and not pred:
        return 1.0
    if not truth or not pred:
        return 0.0
    used: set[int] = set()
    tp = 0
    for t in truth:
        best = None
        for j, p in enumerate(pred):
            if j in used or abs(p - t) > tol:
                continue
            if best is None or abs(p - t) < abs(pred[best] - t):
                best = j
        if best is not None:
            used.add(best)
            tp += 1
    if tp == 0:
        return 0.0
    precision = tp / len(pred)
    recall = tp / len(truth)
    return 2 * precision * recall / (precision + recall)


# -- drifted-log fixtures ------------------------------------------------


def swap_subsequence_from(log: EventLog, pair: tuple[str, str], start_idx: int) -> EventLog:
    """Swap every adjacent `pair` occurrence in traces from `start_idx` on."""
    from procdrift.inject import _rebuild, _swap_pair

    traces = []
    for i, tr in enumerate(log.traces):
        seq = tr.activities()
        if i >= start_idx:
            seq = _swap_pair(seq, *pair)
        traces.append(_rebuild(tr, seq))
    return EventLog(traces, log.alphabet)
