"""Controlled drift injection with ground-truth output.

Each kind perturbs the order of a frequent directly-follows pair so that the
windowed constraint confidences shift at known trace positions:

  sudden       swap the pair in every trace from the cut onward (one distinct
               pair per cut)
  gradual      swap with linearly rising probability across the ramp
  incremental  staged swaps of progressively less frequent pairs
  reoccurring  alternate original/swapped regimes between the cuts
"""

from __future__ import annotations

import hashlib

import numpy as np

from .dfg import mine_dfg
from .log import Event, EventLog, Trace, serialize_xes

DRIFT_KINDS = ("sudden", "gradual", "incremental", "reoccurring")


def _frequent_pairs(log: EventLog, limit: int = 16) -> list[tuple[str, str]]:
    """Most frequent directly-follows pairs with pairwise disjoint activities.

    Disjointness keeps staged injections independent: swapping one pair must
    not erase the adjacency a later stage relies on.
    """
    arcs = mine_dfg(log).arcs
    ranked = sorted(
        ((a, b) for (a, b) in arcs if a != b),
        key=lambda p: (-arcs[p], p),
    )
    chosen: list[tuple[str, str]] = []
    used: set[str] = set()
    for a, b in ranked:
        if a in used or b in used:
            continue
        chosen.append((a, b))
        used.update((a, b))
        if len(chosen) >= limit:
            break
    return chosen


def _swap_pair(seq: list[str], a: str, b: str) -> list[str]:
    out = list(seq)
    i = 0
    while i < len(out) - 1:
        if out[i] == a and out[i + 1] == b:
            out[i], out[i + 1] = out[i + 1], out[i]
            i += 2
        else:
            i += 1
    return out


def _rebuild(trace: Trace, seq: list[str]) -> Trace:
    # activities move between the original timestamps, order is preserved
    stamps = [e.timestamp for e in trace.events]
    return Trace(trace.case_id, [Event(a, t) for a, t in zip(seq, stamps)])


def _seed_from(log: EventLog, kind: str, fractions: tuple[float, ...]) -> int:
    h = hashlib.sha256()
    h.update(kind.encode())
    h.update(repr(fractions).encode())
    h.update(serialize_xes(log)[:65536])
    return int.from_bytes(h.digest()[:8], "big")


def inject_drift(
    log: EventLog,
    kind: str,
    fractions: tuple[float, ...],
    seed: int | None = None,
) -> tuple[EventLog, dict]:
    """Return (mutated log, ground truth). Fractions are positions in (0, 1)."""
    if kind not in DRIFT_KINDS:
        raise ValueError(f"kind must be one of {DRIFT_KINDS}, got {kind!r}")
    if not fractions:
        raise ValueError("at least one fraction is required")
    fractions = tuple(sorted(float(f) for f in fractions))
    if any(not (0.0 < f < 1.0) for f in fractions):
        raise ValueError("fractions must lie strictly between 0 and 1")
    if seed is None:
        seed = _seed_from(log, kind, fractions)
    rng = np.random.default_rng(seed)
    n = len(log)
    cuts = [int(f * n) for f in fractions]
    pairs = _frequent_pairs(log)
    if not pairs:
        raise ValueError("log has no two-activity directly-follows pair to perturb")

    new_traces: list[Trace] = []
    used_pairs: list[tuple[str, str]] = []

    if kind == "sudden":
        used_pairs = [pairs[min(j, len(pairs) - 1)] for j in range(len(cuts))]
        for i, trace in enumerate(log.traces):
            seq = trace.activities()
            for cut, (a, b) in zip(cuts, used_pairs):
                if i >= cut:
                    seq = _swap_pair(seq, a, b)
            new_traces.append(_rebuild(trace, seq))

    elif kind == "gradual":
        a, b = pairs[0]
        used_pairs = [(a, b)]
        lo = cuts[0]
        hi = cuts[1] if len(cuts) > 1 else n
        for i, trace in enumerate(log.traces):
            seq = trace.activities()
            if i >= hi:
                seq = _swap_pair(seq, a, b)
            elif i >= lo:
                p = (i - lo) / max(hi - lo, 1)
                if rng.random() < p:
                    seq = _swap_pair(seq, a, b)
            new_traces.append(_rebuild(trace, seq))

    elif kind == "incremental":
        # later stages use less frequent pairs: small accumulating shifts
        base = len(pairs) // 2
        used_pairs = [
            pairs[min(base + j, len(pairs) - 1)] for j in range(len(cuts))
        ]
        for i, trace in enumerate(log.traces):
            seq = trace.activities()
            for cut, (a, b) in zip(cuts, used_pairs):
                if i >= cut:
                    seq = _swap_pair(seq, a, b)
            new_traces.append(_rebuild(trace, seq))

    elif kind == "reoccurring":
        a, b = pairs[0]
        used_pairs = [(a, b)]
        for i, trace in enumerate(log.traces):
            segment = sum(1 for c in cuts if i >= c)
            seq = trace.activities()
            if segment % 2 == 1:
                seq = _swap_pair(seq, a, b)
            new_traces.append(_rebuild(trace, seq))

    mutated = EventLog.from_traces(new_traces)
    ground_truth = {
        "kind": kind,
        "fractions": list(fractions),
        "trace_indices": cuts,
        "pairs": [list(p) for p in used_pairs],
        "n_traces": n,
        "seed": seed,
    }
    return mutated, ground_truth
