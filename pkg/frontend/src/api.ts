/** Thin typed client for the analysis service. */

import type {
  AnalysisHandle,
  ChartData,
  ClusterSummary,
  ConstraintTable,
  DriftMapLayout,
  Edfg,
  ErrorDetail,
  LogMeta,
  MetricsView,
} from "./types.js";

export class ApiError extends Error {
  readonly status: number;
  readonly detail: ErrorDetail;

  constructor(status: number, detail: ErrorDetail) {
    super(detail.message ?? detail.error ?? `service responded ${status}`);
    this.name = "ApiError";
    this.status = status;
    this.detail = detail;
  }
}

export type FetchLike = (
  url: string,
  init?: RequestInit,
) => Promise<Response>;

export class DriftApi {
  readonly baseUrl: string;
  private readonly fetchFn: FetchLike;

  constructor(baseUrl = "", fetchFn: FetchLike = (u, i) => fetch(u, i)) {
    this.baseUrl = baseUrl.replace(/\/$/, "");
    this.fetchFn = fetchFn;
  }

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const resp = await this.fetchFn(this.baseUrl + path, init);
    if (!resp.ok) {
      let detail: ErrorDetail = {};
      try {
        const body = await resp.json();
        detail =
          body && typeof body.detail === "object"
            ? body.detail
            : { message: String(body?.detail ?? resp.statusText) };
      } catch {
        detail = { message: resp.statusText };
      }
      throw new ApiError(resp.status, detail);
    }
    return (await resp.json()) as T;
  }

  uploadLog(file: Blob, filename: string): Promise<LogMeta> {
    const form = new FormData();
    form.append("file", file, filename);
    return this.request<LogMeta>("/logs", { method: "POST", body: form });
  }

  startAnalysis(
    logId: string,
    params: Record<string, unknown>,
  ): Promise<AnalysisHandle> {
    return this.request<AnalysisHandle>("/analyses", {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ log_id: logId, params }),
    });
  }

  getAnalysis(id: string): Promise<AnalysisHandle> {
    return this.request<AnalysisHandle>(`/analyses/${id}`);
  }

  cancelAnalysis(id: string): Promise<AnalysisHandle> {
    return this.request<AnalysisHandle>(`/analyses/${id}`, {
      method: "DELETE",
    });
  }

  getDriftMapLayout(id: string): Promise<DriftMapLayout> {
    return this.request<DriftMapLayout>(`/analyses/${id}/driftmap`);
  }

  getClusters(id: string): Promise<ClusterSummary[]> {
    return this.request<ClusterSummary[]>(`/analyses/${id}/clusters`);
  }

  getChart(id: string, k: number): Promise<ChartData> {
    return this.request<ChartData>(`/analyses/${id}/clusters/${k}/chart`);
  }

  getConstraints(id: string, k: number): Promise<ConstraintTable> {
    return this.request<ConstraintTable>(
      `/analyses/${id}/clusters/${k}/constraints`,
    );
  }

  getEdfg(id: string, k: number): Promise<Edfg> {
    return this.request<Edfg>(`/analyses/${id}/clusters/${k}/edfg`);
  }

  getMetrics(id: string): Promise<MetricsView> {
    return this.request<MetricsView>(`/analyses/${id}/metrics`);
  }
}
