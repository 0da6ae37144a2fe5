/**
 * View state and reducer.
 *
 * All per-cluster panel payloads are fetched up front when a report loads,
 * so selecting a cluster is a synchronous state transition: one dispatch,
 * one notification, and every panel view derives from the new state in the
 * same render cycle. Responses are tagged with the analysis id they belong
 * to and dropped when a newer analysis has taken over.
 */

import type {
  AnalysisState,
  ChartData,
  ClusterMetrics,
  ClusterSummary,
  ConstraintRow,
  ConstraintTable,
  DriftMapLayout,
  Edfg,
  MetricsView,
} from "./types.js";

export interface PanelBundle {
  chart: ChartData;
  constraints: ConstraintTable;
  edfg: Edfg;
}

export interface ReportBundle {
  layout: DriftMapLayout;
  clusters: ClusterSummary[];
  metrics: MetricsView;
  panels: Record<number, PanelBundle>;
  alphabet: string[];
}

export type Selection = number | "stable";

export interface Banner {
  message: string;
  retryable: boolean;
  component?: string;
}

export type Phase = "idle" | "uploading" | "waiting" | "ready" | "error";

export interface ViewState {
  analysisId: string | null;
  phase: Phase;
  progress: AnalysisState | null;
  banner: Banner | null;
  fieldErrors: Record<string, string>;
  paramDraft: Record<string, string>;
  report: ReportBundle | null;
  selected: Selection | null;
  activityFilter: string | null;
}

export type Action =
  | { type: "param-edited"; field: string; value: string }
  | { type: "field-errors"; errors: Record<string, string> }
  | { type: "upload-started" }
  | { type: "analysis-started"; analysisId: string }
  | { type: "analysis-progress"; analysisId: string; state: AnalysisState }
  | { type: "analysis-failed"; analysisId: string | null; banner: Banner }
  | { type: "report-loaded"; analysisId: string; report: ReportBundle }
  | { type: "select-cluster"; selection: Selection }
  | { type: "cycle-cluster"; delta: 1 | -1 }
  | { type: "set-activity-filter"; activity: string | null }
  | { type: "banner-cleared" };

export function initialState(): ViewState {
  return {
    analysisId: null,
    phase: "idle",
    progress: null,
    banner: null,
    fieldErrors: {},
    paramDraft: {},
    report: null,
    selected: null,
    activityFilter: null,
  };
}

function hasStableBand(report: ReportBundle): boolean {
  return report.layout.bands.some((b) => b.cluster === "stable");
}

/** Cycling order: clusters by rank, stable band last. */
export function selectionOrder(report: ReportBundle): Selection[] {
  const order: Selection[] = report.clusters.map((c) => c.id);
  if (hasStableBand(report)) order.push("stable");
  return order;
}

function selectionValid(report: ReportBundle, sel: Selection): boolean {
  if (sel === "stable") return hasStableBand(report);
  return report.clusters.some((c) => c.id === sel);
}

export function reduce(state: ViewState, action: Action): ViewState {
  switch (action.type) {
    case "param-edited": {
      const fieldErrors = { ...state.fieldErrors };
      delete fieldErrors[action.field];
      return {
        ...state,
        paramDraft: { ...state.paramDraft, [action.field]: action.value },
        fieldErrors,
      };
    }
    case "field-errors":
      return { ...state, phase: "idle", fieldErrors: action.errors };
    case "upload-started":
      return {
        ...state,
        phase: "uploading",
        banner: null,
        fieldErrors: {},
        progress: null,
      };
    case "analysis-started":
      return {
        ...state,
        analysisId: action.analysisId,
        phase: "waiting",
        progress: "pending",
        report: null,
        selected: null,
        banner: null,
      };
    case "analysis-progress":
      if (action.analysisId !== state.analysisId) return state;
      return { ...state, progress: action.state };
    case "analysis-failed":
      if (action.analysisId !== null && action.analysisId !== state.analysisId)
        return state;
      return { ...state, phase: "error", banner: action.banner };
    case "report-loaded": {
      if (action.analysisId !== state.analysisId) return state;
      const order = selectionOrder(action.report);
      return {
        ...state,
        phase: "ready",
        progress: "done",
        report: action.report,
        selected: order[0] ?? null,
        banner: null,
      };
    }
    case "select-cluster": {
      if (!state.report || !selectionValid(state.report, action.selection))
        return state;
      if (state.selected === action.selection) return state;
      return { ...state, selected: action.selection };
    }
    case "cycle-cluster": {
      if (!state.report) return state;
      const order = selectionOrder(state.report);
      if (!order.length) return state;
      const at = state.selected === null ? -1 : order.indexOf(state.selected);
      const next =
        order[(at + action.delta + order.length) % order.length] ?? order[0]!;
      if (next === state.selected) return state;
      return { ...state, selected: next };
    }
    case "set-activity-filter": {
      const activity = action.activity || null;
      if (activity === state.activityFilter) return state;
      return { ...state, activityFilter: activity };
    }
    case "banner-cleared":
      return state.banner ? { ...state, banner: null } : state;
  }
}

export type Listener = (state: ViewState) => void;

export class Store {
  state: ViewState;
  private listeners = new Set<Listener>();

  constructor(state: ViewState = initialState()) {
    this.state = state;
  }

  /** Apply the action; notify subscribers once iff the state changed. */
  dispatch(action: Action): void {
    const next = reduce(this.state, action);
    if (next === this.state) return;
    this.state = next;
    for (const fn of this.listeners) fn(next);
  }

  subscribe(fn: Listener): () => void {
    this.listeners.add(fn);
    return () => this.listeners.delete(fn);
  }
}

/** Everything the per-cluster panels need, derived from one state. */
export interface PanelView {
  kind: "cluster" | "stable";
  selection: Selection;
  title: string;
  chart: { series: number[][]; changePoints: number[]; nWindows: number };
  tags: string[];
  metrics: ClusterMetrics | null;
  spread: number;
  caseCount: number | null;
  constraints: ConstraintRow[];
  edfg: Edfg | null;
}

const STABLE_OVERLAY_LIMIT = 12;

export function derivePanels(state: ViewState): PanelView | null {
  const report = state.report;
  if (!report || state.selected === null) return null;
  const layout = report.layout;
  if (state.selected === "stable") {
    const band = layout.bands.find((b) => b.cluster === "stable");
    const rows = band ? layout.rows.slice(band.start, band.end) : [];
    return {
      kind: "stable",
      selection: "stable",
      title: band?.label ?? "stable",
      chart: {
        series: rows.slice(0, STABLE_OVERLAY_LIMIT).map((r) => r.values),
        changePoints: [],
        nWindows: layout.n_windows,
      },
      tags: band?.tags ?? ["stable"],
      metrics: null,
      spread: report.metrics.spread,
      caseCount: null,
      // constant series: min, max and mean all coincide with the level
      constraints: rows.map((r) => ({
        template: r.constraint.kind,
        a: r.constraint.a,
        b: r.constraint.b,
        min: r.values[0] ?? 0,
        max: r.values[0] ?? 0,
        mean: r.values[0] ?? 0,
      })),
      edfg: null,
    };
  }
  const k = state.selected;
  const bundle = report.panels[k];
  const summary = report.clusters.find((c) => c.id === k);
  if (!bundle || !summary) return null;
  const band = layout.bands.find((b) => b.cluster === k);
  return {
    kind: "cluster",
    selection: k,
    title: band?.label ?? `cluster ${k}`,
    chart: {
      series: [bundle.chart.mean_series],
      changePoints: bundle.chart.change_points,
      nWindows: layout.n_windows,
    },
    tags: summary.tags,
    metrics: report.metrics.clusters.find((c) => c.id === k) ?? null,
    spread: report.metrics.spread,
    caseCount: summary.case_count,
    constraints: bundle.constraints.constraints,
    edfg: bundle.edfg,
  };
}
