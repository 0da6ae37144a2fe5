"""End-to-end drift analysis: matrix, clusters, change points, drift typing.

The pipeline: mine a DFG overview, window the log, compute the constraint
confidence matrix, cluster the rows, locate change points globally and per
cluster, compute per-cluster diagnostics, and derive minimized constraint
lists plus an extended DFG for each cluster.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Callable

import numpy as np

from .changepoint import COSTS, ChangePointConfig, detect_change_points
from .clustering import LINKAGES, METRICS, cluster_series
from .declare import (
    ALL_TEMPLATES,
    CATEGORY_COLORS,
    Constraint,
    LogStats,
    Template,
    confidence_matrix,
    enumerate_constraints,
    minimize_constraints,
    template_category,
)
from .dfg import Dfg, dfg_to_json, mine_dfg
from .log import EventLog, format_timestamp
from .seriesstats import AcfResult, AdfResult, adf_test, autocorrelation, erratic, spread
from .windows import WindowConfig, default_window_config, make_windows

SCHEMA_VERSION = 1

DRIFT_TAGS = ("sudden", "gradual", "incremental", "reoccurring", "outlier")


class ParamError(ValueError):
    """Invalid analysis parameter; `field` names the offender."""

    def __init__(self, field_name: str, message: str):
        super().__init__(message)
        self.field = field_name


class AnalysisCancelled(RuntimeError):
    pass


@dataclass(frozen=True)
class AnalysisParams:
    win_size: int | None = None
    win_step: int | None = None
    kinds: tuple[str, ...] = tuple(t.value for t in ALL_TEMPLATES)
    linkage: str = "ward"
    metric: str = "euclidean"
    cut_threshold: float = 6.0
    cost: str = "kernel-rbf"
    penalty: float | str = "auto"
    penalty_c: float = 3.0
    min_segment: int = 2
    confidence_threshold: float = 0.9
    alpha: float = 0.05
    max_lag: int | None = None
    split_threshold: float = 5.0
    outlier_max_members: int = 5

    def validate(self, log_size: int) -> "AnalysisParams":
        """Check fields, resolve defaulted window sizes, return resolved copy."""
        p = self
        if p.win_size is None and p.win_step is None:
            cfg = default_window_config(log_size)
            p = replace(p, win_size=cfg.win_size, win_step=cfg.win_step)
        elif p.win_size is None or p.win_step is None:
            raise ParamError(
                "win_size", "win_size and win_step must be given together"
            )
        if not isinstance(p.win_size, int) or p.win_size < 1:
            raise ParamError("win_size", f"win_size must be a positive integer")
        if not isinstance(p.win_step, int) or p.win_step < 1:
            raise ParamError("win_step", "win_step must be a positive integer")
        if p.win_step > p.win_size:
            raise ParamError(
                "win_step",
                f"win_step ({p.win_step}) must not exceed win_size ({p.win_size})",
            )
        if p.win_size > log_size:
            raise ParamError(
                "win_size",
                f"win_size ({p.win_size}) exceeds the number of traces ({log_size})",
            )
        valid_kinds = {t.value for t in ALL_TEMPLATES}
        if not p.kinds:
            raise ParamError("kinds", "at least one template kind is required")
        for k in p.kinds:
            if k not in valid_kinds:
                raise ParamError("kinds", f"unknown template kind {k!r}")
        if p.linkage not in LINKAGES:
            raise ParamError("linkage", f"linkage must be one of {LINKAGES}")
        if p.metric not in METRICS:
            raise ParamError("metric", f"metric must be one of {METRICS}")
        if p.linkage == "ward" and p.metric != "euclidean":
            raise ParamError("metric", "ward linkage requires the euclidean metric")
        if not (p.cut_threshold > 0):
            raise ParamError("cut_threshold", "cut_threshold must be positive")
        if p.cost not in COSTS:
            raise ParamError("cost", f"cost must be one of {COSTS}")
        if p.penalty != "auto":
            try:
                pen = float(p.penalty)
            except (TypeError, ValueError):
                raise ParamError("penalty", "penalty must be 'auto' or a number")
            if pen <= 0:
                raise ParamError("penalty", "penalty must be positive")
            p = replace(p, penalty=pen)
        if p.min_segment < 1:
            raise ParamError("min_segment", "min_segment must be >= 1")
        if not (0 < p.confidence_threshold <= 1):
            raise ParamError(
                "confidence_threshold", "confidence_threshold must be in (0, 1]"
            )
        if not (0 < p.alpha < 1):
            raise ParamError("alpha", "alpha must be in (0, 1)")
        if p.max_lag is not None and p.max_lag < 1:
            raise ParamError("max_lag", "max_lag must be >= 1")
        if p.split_threshold <= 0:
            raise ParamError("split_threshold", "split_threshold must be positive")
        if p.outlier_max_members < 1:
            raise ParamError("outlier_max_members", "outlier_max_members must be >= 1")
        return p

    def template_kinds(self) -> tuple[Template, ...]:
        return tuple(t for t in ALL_TEMPLATES if t.value in set(self.kinds))

    def to_json(self) -> dict:
        return {
            "win_size": self.win_size,
            "win_step": self.win_step,
            "kinds": list(self.kinds),
            "linkage": self.linkage,
            "metric": self.metric,
            "cut_threshold": self.cut_threshold,
            "cost": self.cost,
            "penalty": self.penalty,
            "penalty_c": self.penalty_c,
            "min_segment": self.min_segment,
            "confidence_threshold": self.confidence_threshold,
            "alpha": self.alpha,
            "max_lag": self.max_lag,
            "split_threshold": self.split_threshold,
            "outlier_max_members": self.outlier_max_members,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "AnalysisParams":
        known = set(cls.__dataclass_fields__)
        unknown = set(data) - known
        if unknown:
            raise ParamError(sorted(unknown)[0], f"unknown parameter {sorted(unknown)[0]!r}")
        clean = dict(data)
        if "kinds" in clean and clean["kinds"] is not None:
            clean["kinds"] = tuple(clean["kinds"])
        return cls(**{k: v for k, v in clean.items() if v is not None})


def classify_cluster(
    change_points: list[int],
    adf_p: float,
    significant_lags: list[int],
    erratic_value: float,
    n_members: int,
    mean_series: np.ndarray,
    alpha: float = 0.05,
    split_threshold: float = 5.0,
    outlier_max_members: int = 5,
) -> tuple[str, ...]:
    """Drift tags for one cluster; ('stable',) when nothing else applies.

    sudden: any change point. reoccurring: any significant autocorrelation
    lag >= 1. Non-stationary clusters are incremental when the per-member
    erratic score stays under the split threshold, gradual otherwise.
    outlier: a small cluster whose mean series has 1-2 isolated 3-sigma
    spikes.
    """
    tags: list[str] = []
    if change_points:
        tags.append("sudden")
    if adf_p > alpha:
        if erratic_value / max(n_members, 1) < split_threshold:
            tags.append("incremental")
        else:
            tags.append("gradual")
    if any(lag >= 1 for lag in significant_lags):
        tags.append("reoccurring")
    if n_members < outlier_max_members:
        x = np.asarray(mean_series, dtype=np.float64)
        sd = float(x.std())
        if sd > 0:
            spikes = int(np.sum(np.abs(x - x.mean()) > 3.0 * sd))
            if 1 <= spikes <= 2:
                tags.append("outlier")
    if not tags:
        return ("stable",)
    return tuple(t for t in DRIFT_TAGS if t in tags)


@dataclass
class ClusterReport:
    id: int
    members: list[int]  # row indices into the retained matrix
    mean_series: np.ndarray
    change_points: list[int]
    erratic: float
    adf: AdfResult
    acf: AcfResult
    tags: tuple[str, ...]
    case_count: int
    minimized: list[dict]
    edfg: dict


@dataclass
class DriftReport:
    log_meta: dict
    params: AnalysisParams
    windows: list
    dfg: Dfg
    constraints: list[Constraint]  # retained (clustered + stable), matrix row order
    values: np.ndarray             # retained confidence matrix
    cluster_labels: np.ndarray     # per retained row: cluster id or -1 for stable
    clusters: list[ClusterReport]  # ranked by erratic descending
    stable_rows: list[int]
    dropped_all_zero: int
    enumerated_total: int
    global_change_points: list[int]
    spread: float

    def to_json_dict(self) -> dict:
        rows_by_cluster: dict[int, list[int]] = {}
        for cl in self.clusters:
            rows_by_cluster[cl.id] = cl.members
        return {
            "schema_version": SCHEMA_VERSION,
            "log": self.log_meta,
            "params": self.params.to_json(),
            "windows": [
                {
                    "index": w.index,
                    "first": w.first,
                    "last": w.last,
                    "span": [format_timestamp(w.span[0]), format_timestamp(w.span[1])],
                }
                for w in self.windows
            ],
            "dfg": dfg_to_json(self.dfg),
            "constraint_counts": {
                "enumerated": self.enumerated_total,
                "dropped_all_zero": self.dropped_all_zero,
                "stable": len(self.stable_rows),
                "clustered": int(sum(len(c.members) for c in self.clusters)),
            },
            "global_change_points": list(self.global_change_points),
            "spread": round(float(self.spread), 12),
            "clusters": [
                {
                    "id": cl.id,
                    "rank": rank,
                    "size": len(cl.members),
                    "erratic": round(float(cl.erratic), 9),
                    "adf_statistic": None
                    if cl.adf.statistic is None
                    else round(float(cl.adf.statistic), 9),
                    "adf_p": round(float(cl.adf.p_value), 12),
                    "acf": {
                        "values": [round(v, 9) for v in cl.acf.values],
                        "significant": list(cl.acf.significant),
                        "band": round(cl.acf.band, 9),
                    },
                    "tags": list(cl.tags),
                    "change_points": list(cl.change_points),
                    "case_count": cl.case_count,
                    "mean_series": [round(float(v), 9) for v in cl.mean_series],
                    "members": [
                        {
                            "row": int(r),
                            "constraint": self.constraints[r].to_json(),
                            "label": self.constraints[r].label(),
                            "values": [round(float(v), 9) for v in self.values[r]],
                        }
                        for r in cl.members
                    ],
                    "constraints_minimized": cl.minimized,
                    "edfg": cl.edfg,
                }
                for rank, cl in enumerate(self.clusters)
            ],
            "stable_band": {
                "size": len(self.stable_rows),
                "members": [
                    {
                        "row": int(r),
                        "constraint": self.constraints[r].to_json(),
                        "label": self.constraints[r].label(),
                        "values": [round(float(v), 9) for v in self.values[r]],
                    }
                    for r in self.stable_rows
                ],
            },
        }


def build_edfg(dfg: Dfg, minimized: list[tuple[Constraint, float]]) -> dict:
    """DFG plus one colored constraint arc per minimized constraint."""
    arcs = []
    for c, conf in minimized:
        cat = template_category(c.kind)
        arcs.append(
            {
                "a": c.a,
                "b": c.b if c.b is not None else c.a,
                "kind": c.kind.value,
                "category": cat,
                "color": CATEGORY_COLORS[cat],
                "confidence": round(float(conf), 4),
            }
        )
    return {"dfg": dfg_to_json(dfg), "constraint_arcs": arcs}


def edfg_to_dot(edfg: dict) -> str:
    lines = ["digraph edfg {", "  rankdir=LR;", "  node [shape=box, style=rounded];"]
    ids: dict[str, str] = {}

    def nid(act: str) -> str:
        if act not in ids:
            ids[act] = f"n{len(ids)}"
        return ids[act]

    for node in edfg["dfg"]["nodes"]:
        lines.append(f'  {nid(node["activity"])} [label="{node["activity"]}\\n{node["count"]}"];')
    for arc in edfg["dfg"]["arcs"]:
        lines.append(
            f'  {nid(arc["source"])} -> {nid(arc["target"])} '
            f'[label="{arc["count"]}", color=gray];'
        )
    for arc in edfg["constraint_arcs"]:
        style = "dashed" if arc["category"] == "negated" else "bold"
        lines.append(
            f'  {nid(arc["a"])} -> {nid(arc["b"])} '
            f'[label="{arc["kind"]} {arc["confidence"]:.2f}", '
            f'color="{arc["color"]}", style={style}];'
        )
    lines.append("}")
    return "\n".join(lines) + "\n"


def analyze(
    log: EventLog,
    params: AnalysisParams | None = None,
    cancel: Callable[[], bool] | None = None,
) -> DriftReport:
    """Run the full six-step pipeline on a log. Deterministic for fixed input."""

    def checkpoint():
        if cancel is not None and cancel():
            raise AnalysisCancelled()

    params = (params or AnalysisParams()).validate(len(log))
    checkpoint()

    dfg = mine_dfg(log)
    cfg = WindowConfig(win_size=params.win_size, win_step=params.win_step)
    windows = make_windows(log, cfg)
    stats = LogStats(log)
    kinds = params.template_kinds()
    matrix = confidence_matrix(log, windows, kinds=kinds, stats=stats)
    checkpoint()

    values = matrix.values
    nonzero = ~np.all(values == 0.0, axis=1)
    constant = np.ptp(values, axis=1) == 0.0
    retained_idx = np.flatnonzero(nonzero)
    dropped = int(np.sum(~nonzero))

    constraints = [matrix.constraints[i] for i in retained_idx]
    retained = values[retained_idx]
    retained_constant = constant[retained_idx]
    stable_rows = [int(i) for i in np.flatnonzero(retained_constant)]
    varying_rows = np.flatnonzero(~retained_constant)
    checkpoint()

    labels_full = np.full(len(constraints), -1, dtype=int)
    clusters_members: dict[int, list[int]] = {}
    if len(varying_rows):
        varying = retained[varying_rows]
        result = cluster_series(
            varying,
            linkage=params.linkage,
            metric=params.metric,
            cut_threshold=params.cut_threshold,
        )
        for local, row in enumerate(varying_rows):
            cid = int(result.labels[local])
            labels_full[row] = cid
            clusters_members.setdefault(cid, []).append(int(row))
    checkpoint()

    cp_cfg = ChangePointConfig(
        cost=params.cost,
        penalty=params.penalty,
        min_segment=params.min_segment,
        auto_c=params.penalty_c,
        # overlapping windows correlate neighbouring observations; estimate
        # noise at the first lag where two windows share no traces
        noise_lag=max(1, -(-cfg.win_size // cfg.win_step)),
    )
    global_points = (
        detect_change_points(retained[varying_rows], cp_cfg) if len(varying_rows) else []
    )
    checkpoint()

    activation_presence = stats.trace_counts > 0  # (n_traces, n_acts)
    clusters: list[ClusterReport] = []
    for cid in sorted(clusters_members):
        members = clusters_members[cid]
        sub = retained[members]
        mean_series = sub.mean(axis=0)
        # order member rows by closeness to the cluster mean
        mse = ((sub - mean_series) ** 2).mean(axis=1)
        members = [r for _, r in sorted(zip(mse, members), key=lambda p: (p[0], p[1]))]
        points = detect_change_points(sub, cp_cfg)
        err = erratic(sub)
        adf = adf_test(mean_series)
        acf = autocorrelation(mean_series, params.max_lag)
        tags = classify_cluster(
            points,
            adf.p_value,
            acf.significant_lags,
            err,
            len(members),
            mean_series,
            alpha=params.alpha,
            split_threshold=params.split_threshold,
            outlier_max_members=params.outlier_max_members,
        )
        acts = sorted(
            {stats.index[constraints[r].activation] for r in members
             if constraints[r].activation in stats.index}
        )
        case_count = (
            int(np.sum(activation_presence[:, acts].any(axis=1))) if acts else 0
        )
        row_of = {constraints[r]: r for r in members}
        items = [(constraints[r], float(retained[r].mean())) for r in members]
        kept = minimize_constraints(items, params.confidence_threshold)
        kept_rows = []
        for c, conf in kept:
            series = retained[row_of[c]]
            kept_rows.append(
                {
                    "template": c.kind.value,
                    "a": c.a,
                    "b": c.b,
                    "min": round(float(series.min()), 4),
                    "max": round(float(series.max()), 4),
                    "mean": round(float(series.mean()), 4),
                }
            )
        edfg = build_edfg(dfg, kept)
        clusters.append(
            ClusterReport(
                id=cid,
                members=members,
                mean_series=mean_series,
                change_points=points,
                erratic=err,
                adf=adf,
                acf=acf,
                tags=tags,
                case_count=case_count,
                minimized=kept_rows,
                edfg=edfg,
            )
        )
        checkpoint()

    clusters.sort(key=lambda c: (-c.erratic, c.id))
    spread_rows = retained if len(retained) else np.zeros((0, len(windows)))
    t0, t1 = log.time_span
    report = DriftReport(
        log_meta={
            "n_traces": len(log),
            "n_events": log.n_events,
            "alphabet": list(log.alphabet),
            "time_span": [format_timestamp(t0), format_timestamp(t1)],
        },
        params=params,
        windows=windows,
        dfg=dfg,
        constraints=constraints,
        values=retained,
        cluster_labels=labels_full,
        clusters=clusters,
        stable_rows=stable_rows,
        dropped_all_zero=dropped,
        enumerated_total=len(matrix.constraints),
        global_change_points=global_points,
        spread=spread(spread_rows) if len(spread_rows) else 0.0,
    )
    return report
