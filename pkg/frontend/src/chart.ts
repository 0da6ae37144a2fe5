/**
 * SVG builders for the per-cluster panels.
 *
 * Everything is plotted straight from service JSON values; the only math
 * here is coordinate mapping.
 */

import type { AcfJson } from "./types.js";

export interface ChartSeries {
  /** one polyline per series, each a per-window value list on a [0,1] axis */
  series: number[][];
  changePoints: number[];
  nWindows: number;
}

const W = 520;
const H = 180;
const ML = 34;
const MT = 10;
const MB = 22;
const MR = 10;

function esc(s: string): string {
  return s
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

function px(i: number, n: number): number {
  const plotW = W - ML - MR;
  return ML + (plotW * i) / Math.max(n - 1, 1);
}

function py(v: number): number {
  const plotH = H - MT - MB;
  const c = v < 0 ? 0 : v > 1 ? 1 : v;
  return MT + plotH * (1 - c);
}

export function buildChartSvg(chart: ChartSeries, title = ""): string {
  const n = chart.nWindows;
  const out: string[] = [
    `<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 ${W} ${H}" width="${W}" height="${H}">`,
    `<rect width="${W}" height="${H}" fill="#ffffff"/>`,
  ];
  for (const frac of [0, 0.5, 1]) {
    const y = py(frac).toFixed(2);
    out.push(
      `<line x1="${ML}" y1="${y}" x2="${W - MR}" y2="${y}" stroke="#dddddd" stroke-width="1"/>`,
      `<text x="${ML - 4}" y="${y}" text-anchor="end" dominant-baseline="middle" font-size="10" fill="#555555">${frac.toFixed(1)}</text>`,
    );
  }
  for (const cp of chart.changePoints) {
    const x = px(cp, n).toFixed(2);
    out.push(
      `<line x1="${x}" y1="${MT}" x2="${x}" y2="${H - MB}" stroke="#cc3333" stroke-width="1" stroke-dasharray="4 3"/>`,
    );
  }
  chart.series.forEach((values, idx) => {
    const pts = values
      .map((v, i) => `${px(i, n).toFixed(2)},${py(v).toFixed(2)}`)
      .join(" ");
    const color = idx === 0 ? "#2a6fb0" : "#9bb8d0";
    out.push(
      `<polyline points="${pts}" fill="none" stroke="${color}" stroke-width="${idx === 0 ? 1.6 : 1}"/>`,
    );
  });
  if (title) {
    out.push(
      `<text x="${ML}" y="${H - 6}" font-size="11" fill="#333333">${esc(title)}</text>`,
    );
  }
  out.push("</svg>");
  return out.join("\n");
}

export function buildAcfSvg(acf: AcfJson): string {
  const n = acf.values.length;
  const plotW = W - ML - MR;
  const plotH = H - MT - MB;
  const mid = MT + plotH / 2;
  const sy = (v: number): number => {
    const c = v < -1 ? -1 : v > 1 ? 1 : v;
    return mid - (c * plotH) / 2;
  };
  const sig = new Set(acf.significant);
  const out: string[] = [
    `<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 ${W} ${H}" width="${W}" height="${H}">`,
    `<rect width="${W}" height="${H}" fill="#ffffff"/>`,
    `<rect x="${ML}" y="${sy(acf.band).toFixed(2)}" width="${plotW}" height="${(sy(-acf.band) - sy(acf.band)).toFixed(2)}" fill="#e8eef5"/>`,
    `<line x1="${ML}" y1="${mid.toFixed(2)}" x2="${W - MR}" y2="${mid.toFixed(2)}" stroke="#999999" stroke-width="1"/>`,
  ];
  const barW = Math.max(1, Math.floor(plotW / Math.max(n, 1)) - 2);
  acf.values.forEach((v, lag) => {
    const x = ML + (plotW * lag) / Math.max(n, 1);
    const y = Math.min(mid, sy(v));
    const h = Math.abs(sy(v) - mid);
    const color = sig.has(lag) ? "#cc3333" : "#2a6fb0";
    out.push(
      `<rect x="${x.toFixed(2)}" y="${y.toFixed(2)}" width="${barW}" height="${Math.max(h, 0.5).toFixed(2)}" fill="${color}"/>`,
    );
  });
  out.push("</svg>");
  return out.join("\n");
}
