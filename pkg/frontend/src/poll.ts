/**
 * Upload / analyze / poll orchestration.
 *
 * Drives the store through the full flow. Every service response is
 * dispatched with the analysis id it belongs to; the reducer drops
 * anything stale, and polling stops as soon as the store has moved on to
 * a different analysis.
 */

import { ApiError, DriftApi } from "./api.js";
import { activitiesInLayout } from "./filter.js";
import type { PanelBundle, ReportBundle, Store } from "./state.js";
import type { AnalysisHandle } from "./types.js";

export interface FlowOptions {
  intervalMs?: number;
  sleep?: (ms: number) => Promise<void>;
}

const defaultSleep = (ms: number): Promise<void> =>
  new Promise((resolve) => setTimeout(resolve, ms));

export async function loadReport(
  api: DriftApi,
  analysisId: string,
): Promise<ReportBundle> {
  const [layout, clusters, metrics] = await Promise.all([
    api.getDriftMapLayout(analysisId),
    api.getClusters(analysisId),
    api.getMetrics(analysisId),
  ]);
  const bundles = await Promise.all(
    clusters.map(async (c): Promise<[number, PanelBundle]> => {
      const [chart, constraints, edfg] = await Promise.all([
        api.getChart(analysisId, c.id),
        api.getConstraints(analysisId, c.id),
        api.getEdfg(analysisId, c.id),
      ]);
      return [c.id, { chart, constraints, edfg }];
    }),
  );
  return {
    layout,
    clusters,
    metrics,
    panels: Object.fromEntries(bundles),
    alphabet: activitiesInLayout(layout),
  };
}

/**
 * Poll the analysis until it settles, is canceled, or the store switches
 * to another analysis. Resolves with the final handle, or null if stale.
 */
export async function pollAnalysis(
  api: DriftApi,
  store: Store,
  analysisId: string,
  opts: FlowOptions = {},
): Promise<AnalysisHandle | null> {
  const sleep = opts.sleep ?? defaultSleep;
  const interval = opts.intervalMs ?? 500;
  for (;;) {
    if (store.state.analysisId !== analysisId) return null;
    const handle = await api.getAnalysis(analysisId);
    if (store.state.analysisId !== analysisId) return null;
    store.dispatch({
      type: "analysis-progress",
      analysisId,
      state: handle.state,
    });
    if (handle.state === "done" || handle.state === "failed") return handle;
    await sleep(interval);
  }
}

/** Full flow: upload the file, start the analysis, poll, load the report. */
export async function uploadAndAnalyze(
  api: DriftApi,
  store: Store,
  file: Blob,
  filename: string,
  params: Record<string, unknown>,
  opts: FlowOptions = {},
): Promise<void> {
  store.dispatch({ type: "upload-started" });
  let analysisId: string | null = null;
  try {
    const meta = await api.uploadLog(file, filename);
    const handle = await api.startAnalysis(meta.log_id, params);
    analysisId = handle.id;
    store.dispatch({ type: "analysis-started", analysisId });
    const final = await pollAnalysis(api, store, analysisId, opts);
    if (final === null) return; // superseded by a newer analysis
    if (final.state === "failed") {
      store.dispatch({
        type: "analysis-failed",
        analysisId,
        banner: {
          message: `analysis failed: ${final.error ?? "unknown error"}`,
          retryable: true,
        },
      });
      return;
    }
    const report = await loadReport(api, analysisId);
    store.dispatch({ type: "report-loaded", analysisId, report });
  } catch (err) {
    if (err instanceof ApiError) {
      if (err.status === 422 && err.detail.field) {
        store.dispatch({
          type: "field-errors",
          errors: { [err.detail.field]: err.message },
        });
        return;
      }
      store.dispatch({
        type: "analysis-failed",
        analysisId,
        banner: {
          message: err.message,
          retryable: err.status >= 500,
          component: err.detail.component,
        },
      });
      return;
    }
    // network failure: the service may just be down, offer a retry
    store.dispatch({
      type: "analysis-failed",
      analysisId,
      banner: { message: `service unreachable: ${String(err)}`, retryable: true },
    });
  }
}
