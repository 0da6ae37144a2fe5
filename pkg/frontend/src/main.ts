/**
 * DOM wiring. All logic lives in the pure modules; this file only moves
 * bytes between the store and the document.
 */

import { DriftApi } from "./api.js";
import { buildAcfSvg, buildChartSvg } from "./chart.js";
import {
  bandOfRow,
  renderDriftMap,
  rowAtPixel,
  type DriftMapImage,
} from "./driftmap.js";
import { buildEdfgSvg, layoutEdfg } from "./edfg.js";
import { filterCounts } from "./filter.js";
import { derivePanels, Store, type ViewState } from "./state.js";
import { uploadAndAnalyze } from "./poll.js";

const CELL_W = 6;
const CELL_H = 3;

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing #${id}`);
  return node as T;
}

function apiBase(): string {
  const qs = new URLSearchParams(window.location.search);
  return qs.get("api") ?? "";
}

function paramValues(state: ViewState): Record<string, unknown> {
  const out: Record<string, unknown> = {};
  for (const [field, raw] of Object.entries(state.paramDraft)) {
    const text = raw.trim();
    if (!text) continue;
    if (field === "kinds") {
      out[field] = text.split(",").map((s) => s.trim());
    } else if (field === "penalty" && text !== "auto") {
      out[field] = Number(text);
    } else if (/^-?\d+$/.test(text)) {
      out[field] = Number(text);
    } else if (/^-?\d*\.\d+$/.test(text)) {
      out[field] = Number(text);
    } else {
      out[field] = text;
    }
  }
  return out;
}

function main(): void {
  const api = new DriftApi(apiBase());
  const store = new Store();

  const fileInput = el<HTMLInputElement>("log-file");
  const form = el<HTMLFormElement>("param-form");
  const banner = el<HTMLDivElement>("banner");
  const progress = el<HTMLDivElement>("progress");
  const canvas = el<HTMLCanvasElement>("driftmap");
  const mapEmpty = el<HTMLDivElement>("map-empty");
  const filterInput = el<HTMLInputElement>("activity-filter");
  const filterInfo = el<HTMLSpanElement>("filter-info");
  const alphabetList = el<HTMLDataListElement>("alphabet");
  const clusterList = el<HTMLUListElement>("cluster-list");
  const chartPanel = el<HTMLDivElement>("chart-panel");
  const acfPanel = el<HTMLDivElement>("acf-panel");
  const metricsPanel = el<HTMLDivElement>("metrics-panel");
  const constraintsPanel = el<HTMLDivElement>("constraints-panel");
  const edfgPanel = el<HTMLDivElement>("edfg-panel");

  let image: DriftMapImage | null = null;

  form.addEventListener("submit", (ev) => {
    ev.preventDefault();
    const file = fileInput.files?.[0];
    if (!file) {
      store.dispatch({
        type: "analysis-failed",
        analysisId: null,
        banner: { message: "choose an event log first", retryable: false },
      });
      return;
    }
    void uploadAndAnalyze(
      api,
      store,
      file,
      file.name,
      paramValues(store.state),
    );
  });

  for (const input of form.querySelectorAll<HTMLInputElement>("input[name]")) {
    input.addEventListener("input", () => {
      store.dispatch({
        type: "param-edited",
        field: input.name,
        value: input.value,
      });
    });
  }

  filterInput.addEventListener("input", () => {
    store.dispatch({
      type: "set-activity-filter",
      activity: filterInput.value.trim() || null,
    });
  });

  document.addEventListener("keydown", (ev) => {
    if (ev.target instanceof HTMLInputElement) return;
    if (ev.key === "ArrowDown" || ev.key === "ArrowUp") {
      ev.preventDefault();
      store.dispatch({
        type: "cycle-cluster",
        delta: ev.key === "ArrowDown" ? 1 : -1,
      });
    }
  });

  canvas.addEventListener("click", (ev) => {
    const state = store.state;
    if (!state.report || !image) return;
    const rect = canvas.getBoundingClientRect();
    const y = ((ev.clientY - rect.top) / rect.height) * image.height;
    const rowIdx = rowAtPixel(image, y, CELL_H);
    if (rowIdx === null) return;
    const band = bandOfRow(state.report.layout, rowIdx);
    if (band) store.dispatch({ type: "select-cluster", selection: band.cluster });
  });

  function renderBanner(state: ViewState): void {
    if (state.banner) {
      banner.hidden = false;
      banner.textContent = state.banner.message;
      if (state.banner.retryable) {
        const retry = document.createElement("button");
        retry.textContent = "retry";
        retry.addEventListener("click", () => form.requestSubmit());
        banner.append(" ", retry);
      }
    } else {
      banner.hidden = true;
      banner.textContent = "";
    }
    for (const input of form.querySelectorAll<HTMLInputElement>("input[name]")) {
      const msg = state.fieldErrors[input.name];
      input.classList.toggle("invalid", Boolean(msg));
      input.title = msg ?? "";
    }
  }

  function renderProgress(state: ViewState): void {
    progress.hidden = state.phase !== "uploading" && state.phase !== "waiting";
    progress.textContent =
      state.phase === "uploading"
        ? "uploading log…"
        : state.phase === "waiting"
          ? `analysis ${state.progress ?? "pending"}…`
          : "";
  }

  function renderMap(state: ViewState): void {
    if (!state.report) {
      canvas.hidden = true;
      mapEmpty.hidden = false;
      mapEmpty.textContent = "upload an event log to see its drift map";
      image = null;
      return;
    }
    const layout = state.report.layout;
    if (alphabetList.children.length !== state.report.alphabet.length) {
      alphabetList.textContent = "";
      for (const act of state.report.alphabet) {
        const opt = document.createElement("option");
        opt.value = act;
        alphabetList.append(opt);
      }
    }
    image = renderDriftMap(layout, {
      cellW: CELL_W,
      cellH: CELL_H,
      highlight: state.selected,
      activity: state.activityFilter,
    });
    const counts = filterCounts(layout.rows, state.activityFilter);
    filterInfo.textContent = state.activityFilter
      ? `${counts.shown} of ${counts.total} constraints mention "${state.activityFilter}"`
      : `${counts.total} constraints`;
    if (image.height === 0) {
      canvas.hidden = true;
      mapEmpty.hidden = false;
      mapEmpty.textContent = `no constraints mention "${state.activityFilter}"`;
      return;
    }
    canvas.hidden = false;
    mapEmpty.hidden = true;
    canvas.width = image.width;
    canvas.height = image.height;
    const ctx = canvas.getContext("2d");
    if (ctx)
      ctx.putImageData(
        new ImageData(image.data, image.width, image.height),
        0,
        0,
      );
  }

  function renderClusterList(state: ViewState): void {
    clusterList.textContent = "";
    if (!state.report) return;
    for (const band of state.report.layout.bands) {
      const li = document.createElement("li");
      li.textContent = band.label;
      li.classList.toggle("selected", state.selected === band.cluster);
      li.addEventListener("click", () =>
        store.dispatch({ type: "select-cluster", selection: band.cluster }),
      );
      clusterList.append(li);
    }
  }

  function renderPanels(state: ViewState): void {
    const view = derivePanels(state);
    if (!view) {
      for (const panel of [
        chartPanel,
        acfPanel,
        metricsPanel,
        constraintsPanel,
        edfgPanel,
      ])
        panel.textContent = "";
      return;
    }
    chartPanel.innerHTML = buildChartSvg(view.chart, view.title);
    acfPanel.innerHTML = view.metrics ? buildAcfSvg(view.metrics.acf) : "";
    const dl = document.createElement("dl");
    const add = (term: string, value: string): void => {
      const dt = document.createElement("dt");
      dt.textContent = term;
      const dd = document.createElement("dd");
      dd.textContent = value;
      dl.append(dt, dd);
    };
    add("tags", view.tags.join(", ") || "none");
    add("spread", view.spread.toFixed(4));
    if (view.metrics) {
      add("erratic", view.metrics.erratic.toFixed(2));
      add(
        "ADF",
        view.metrics.adf_statistic === null
          ? "constant series"
          : `${view.metrics.adf_statistic.toFixed(3)} (p=${view.metrics.adf_p.toExponential(2)})`,
      );
    }
    if (view.caseCount !== null) add("cases", String(view.caseCount));
    metricsPanel.textContent = "";
    metricsPanel.append(dl);

    const table = document.createElement("table");
    const head = table.insertRow();
    for (const h of ["template", "a", "b", "min", "max", "mean"]) {
      const th = document.createElement("th");
      th.textContent = h;
      head.append(th);
    }
    for (const row of view.constraints) {
      const tr = table.insertRow();
      for (const cell of [
        row.template,
        row.a,
        row.b ?? "",
        row.min.toFixed(4),
        row.max.toFixed(4),
        row.mean.toFixed(4),
      ]) {
        const td = tr.insertCell();
        td.textContent = cell;
      }
    }
    constraintsPanel.textContent = "";
    constraintsPanel.append(table);

    edfgPanel.innerHTML = view.edfg ? buildEdfgSvg(layoutEdfg(view.edfg)) : "";
  }

  function render(state: ViewState): void {
    renderBanner(state);
    renderProgress(state);
    renderMap(state);
    renderClusterList(state);
    renderPanels(state);
  }

  store.subscribe(render);
  render(store.state);
}

main();
