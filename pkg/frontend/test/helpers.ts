import { readFileSync } from "node:fs";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";

import { activitiesInLayout } from "../src/filter.js";
import type { PanelBundle, ReportBundle } from "../src/state.js";
import type {
  ChartData,
  ClusterSummary,
  ConstraintTable,
  DriftMapLayout,
  Edfg,
  MetricsView,
} from "../src/types.js";

const here = dirname(fileURLToPath(import.meta.url));

export function fixturePath(name: string): string {
  return join(here, "fixtures", name);
}

export function fixture<T>(name: string): T {
  return JSON.parse(readFileSync(fixturePath(name), "utf8")) as T;
}

/** Assemble the in-memory report exactly as loadReport would. */
export function fixtureReport(): ReportBundle {
  const layout = fixture<DriftMapLayout>("driftmap.json");
  const clusters = fixture<ClusterSummary[]>("clusters.json");
  const metrics = fixture<MetricsView>("metrics.json");
  const panels: Record<number, PanelBundle> = {};
  for (const c of clusters) {
    panels[c.id] = {
      chart: fixture<ChartData>(`chart-${c.id}.json`),
      constraints: fixture<ConstraintTable>(`constraints-${c.id}.json`),
      edfg: fixture<Edfg>(`edfg-${c.id}.json`),
    };
  }
  return {
    layout,
    clusters,
    metrics,
    panels,
    alphabet: activitiesInLayout(layout),
  };
}

export function goldenPath(name: string): string {
  return join(here, "golden", name);
}
