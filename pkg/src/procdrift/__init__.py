"""Concept-drift detection for business-process event logs.

The pipeline mines declarative behavioral constraints from a log, tracks
their confidence over a sliding window of traces, clusters the resulting
time series, and locates, classifies, and explains the drifts each cluster
exhibits.
"""

from ._kernel import BACKEND as KERNEL_BACKEND
from .changepoint import (
    COSTS,
    ChangePointConfig,
    auto_penalty,
    detect_change_points,
    pelt_segmentation,
)
from .clustering import LINKAGES, METRICS, ClusterResult, cluster_series
from .declare import (
    ALL_TEMPLATES,
    CATEGORY_COLORS,
    SUBSUMES,
    ConfidenceMatrix,
    Constraint,
    ConstraintStats,
    LogStats,
    Template,
    check_trace,
    confidence_matrix,
    constraints_to_csv,
    enumerate_constraints,
    measure,
    minimize_constraints,
    template_category,
)
from .dfg import Dfg, dfg_to_dot, dfg_to_json, filter_dfg, mine_dfg
from .inject import DRIFT_KINDS, inject_drift
from .log import (
    Event,
    EventLog,
    LogParseError,
    Trace,
    dumps_canonical,
    load_log,
    parse_csv,
    parse_xes,
    serialize_csv,
    serialize_xes,
)
from .render import (
    chart_data,
    drift_map_layout,
    plasma_lut,
    render_acf_chart,
    render_drift_chart,
    render_drift_map,
)
from .report import (
    DRIFT_TAGS,
    SCHEMA_VERSION,
    AnalysisCancelled,
    AnalysisParams,
    DriftReport,
    ParamError,
    analyze,
    build_edfg,
    classify_cluster,
    edfg_to_dot,
)
from .seriesstats import (
    AcfResult,
    AdfResult,
    adf_test,
    autocorrelation,
    erratic,
    spread,
)
from .synthetic import synthesize_log
from .windows import (
    SubLogWindow,
    WindowConfig,
    WindowError,
    default_window_config,
    make_windows,
    window_count,
)

__version__ = "0.1.0"

__all__ = [
    "ALL_TEMPLATES",
    "AcfResult",
    "AdfResult",
    "AnalysisCancelled",
    "AnalysisParams",
    "CATEGORY_COLORS",
    "COSTS",
    "ChangePointConfig",
    "ClusterResult",
    "ConfidenceMatrix",
    "Constraint",
    "ConstraintStats",
    "DRIFT_KINDS",
    "DRIFT_TAGS",
    "Dfg",
    "DriftReport",
    "Event",
    "EventLog",
    "KERNEL_BACKEND",
    "LINKAGES",
    "LogParseError",
    "LogStats",
    "METRICS",
    "ParamError",
    "SCHEMA_VERSION",
    "SUBSUMES",
    "SubLogWindow",
    "Template",
    "Trace",
    "WindowConfig",
    "WindowError",
    "analyze",
    "adf_test",
    "auto_penalty",
    "autocorrelation",
    "build_edfg",
    "chart_data",
    "check_trace",
    "classify_cluster",
    "cluster_series",
    "confidence_matrix",
    "constraints_to_csv",
    "default_window_config",
    "detect_change_points",
    "dfg_to_dot",
    "dfg_to_json",
    "drift_map_layout",
    "dumps_canonical",
    "edfg_to_dot",
    "enumerate_constraints",
    "erratic",
    "filter_dfg",
    "inject_drift",
    "load_log",
    "make_windows",
    "measure",
    "mine_dfg",
    "minimize_constraints",
    "parse_csv",
    "parse_xes",
    "pelt_segmentation",
    "plasma_lut",
    "render_acf_chart",
    "render_drift_chart",
    "render_drift_map",
    "serialize_csv",
    "serialize_xes",
    "spread",
    "synthesize_log",
    "template_category",
    "window_count",
]
