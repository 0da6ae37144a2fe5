"""Directly-follows graph mining and export."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field

from .log import EventLog


@dataclass
class Dfg:
    nodes: dict[str, int] = field(default_factory=dict)   # activity -> occurrences
    arcs: dict[tuple[str, str], int] = field(default_factory=dict)
    starts: dict[str, int] = field(default_factory=dict)  # first events
    ends: dict[str, int] = field(default_factory=dict)    # last events


def mine_dfg(log: EventLog) -> Dfg:
    """Count activity occurrences, adjacent pairs, and start/end events."""
    nodes: Counter = Counter()
    arcs: Counter = Counter()
    starts: Counter = Counter()
    ends: Counter = Counter()
    for trace in log.traces:
        acts = trace.activities()
        nodes.update(acts)
        starts[acts[0]] += 1
        ends[acts[-1]] += 1
        for i in range(len(acts) - 1):
            arcs[(acts[i], acts[i + 1])] += 1
    return Dfg(
        nodes=dict(sorted(nodes.items())),
        arcs=dict(sorted(arcs.items())),
        starts=dict(sorted(starts.items())),
        ends=dict(sorted(ends.items())),
    )


def filter_dfg(dfg: Dfg, min_arc_count: int) -> Dfg:
    """Drop arcs below the count threshold; node counts are kept as-is."""
    return Dfg(
        nodes=dict(dfg.nodes),
        arcs={k: v for k, v in dfg.arcs.items() if v >= min_arc_count},
        starts=dict(dfg.starts),
        ends=dict(dfg.ends),
    )


def _node_id(activity: str, index: dict[str, str]) -> str:
    if activity not in index:
        index[activity] = f"n{len(index)}"
    return index[activity]


def dfg_to_dot(dfg: Dfg) -> str:
    lines = ["digraph dfg {", "  rankdir=LR;", '  node [shape=box, style=rounded];']
    ids: dict[str, str] = {}
    for act in sorted(dfg.nodes):
        nid = _node_id(act, ids)
        label = f"{act}\\n{dfg.nodes[act]}"
        lines.append(f'  {nid} [label="{label}"];')
    for (a, b), count in sorted(dfg.arcs.items()):
        lines.append(f'  {_node_id(a, ids)} -> {_node_id(b, ids)} [label="{count}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def dfg_to_json(dfg: Dfg) -> dict:
    return {
        "nodes": [{"activity": a, "count": c} for a, c in sorted(dfg.nodes.items())],
        "arcs": [
            {"source": a, "target": b, "count": c}
            for (a, b), c in sorted(dfg.arcs.items())
        ],
        "starts": [{"activity": a, "count": c} for a, c in sorted(dfg.starts.items())],
        "ends": [{"activity": a, "count": c} for a, c in sorted(dfg.ends.items())],
    }
