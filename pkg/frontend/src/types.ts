/**
 * Shapes of the analysis-service JSON this client consumes.
 *
 * The UI renders exclusively from these payloads; it never recomputes
 * metrics on its own. Field names mirror the wire format exactly.
 */

export interface LogMeta {
  log_id: string;
  filename: string;
  size: number;
  n_traces: number;
  n_events: number;
  alphabet: string[];
  time_span: [string, string];
}

export type AnalysisState = "pending" | "running" | "done" | "failed";

export interface AnalysisSummary {
  n_windows: number;
  n_clusters: number;
  constraint_counts: {
    enumerated: number;
    dropped_all_zero: number;
    stable: number;
    clustered: number;
  };
  global_change_points: number[];
  spread: number;
}

export interface AnalysisHandle {
  id: string;
  state: AnalysisState;
  log_id: string;
  params: Record<string, unknown>;
  created_at: string;
  error: string | null;
  summary?: AnalysisSummary;
}

export interface ConstraintRef {
  kind: string;
  a: string;
  b: string | null;
}

/** One drift-map row: a constraint and its per-window confidence series. */
export interface LayoutRow {
  label: string;
  constraint: ConstraintRef;
  cluster: number | "stable";
  values: number[];
}

export interface LayoutBand {
  cluster: number | "stable";
  label: string;
  start: number; // first row index, inclusive
  end: number; // last row index, exclusive
  tags: string[];
  change_points: number[];
}

export interface DriftMapLayout {
  n_windows: number;
  window_labels: string[];
  rows: LayoutRow[];
  bands: LayoutBand[];
  lines: { window: number; scope: string }[];
  colormap: { name: string; rgb: number[][] };
}

export interface ClusterSummary {
  id: number;
  rank: number;
  size: number;
  erratic: number;
  tags: string[];
  change_points: number[];
  case_count: number;
}

export interface ChartData {
  cluster: number;
  windows: number[];
  window_starts: string[];
  mean_series: number[];
  change_points: number[];
  case_count: number;
  tags: string[];
}

export interface ConstraintRow {
  template: string;
  a: string;
  b: string | null;
  min: number;
  max: number;
  mean: number;
}

export interface ConstraintTable {
  cluster: number;
  constraints: ConstraintRow[];
}

export interface DfgJson {
  nodes: { activity: string; count: number }[];
  arcs: { source: string; target: string; count: number }[];
  starts: { activity: string; count: number }[];
  ends: { activity: string; count: number }[];
}

export interface ConstraintArc {
  a: string;
  b: string;
  kind: string;
  category: string;
  color: string;
  confidence: number;
}

export interface Edfg {
  dfg: DfgJson;
  constraint_arcs: ConstraintArc[];
}

export interface AcfJson {
  values: number[];
  significant: number[];
  band: number;
}

export interface ClusterMetrics {
  id: number;
  erratic: number;
  adf_statistic: number | null;
  adf_p: number;
  acf: AcfJson;
  tags: string[];
}

export interface MetricsView {
  spread: number;
  global_change_points: number[];
  clusters: ClusterMetrics[];
  stable_band_size: number;
}

/** Error payload the service wraps under {"detail": ...}. */
export interface ErrorDetail {
  message?: string;
  error?: string;
  field?: string;
  component?: string;
  state?: string;
  [key: string]: unknown;
}
