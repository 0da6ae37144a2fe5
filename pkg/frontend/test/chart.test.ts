import { describe, expect, it } from "vitest";

import { buildAcfSvg, buildChartSvg } from "../src/chart.js";
import type { ChartData, MetricsView } from "../src/types.js";
import { fixture } from "./helpers.js";

const chart = fixture<ChartData>("chart-2.json"); // three change points
const metrics = fixture<MetricsView>("metrics.json");

describe("buildChartSvg", () => {
  const svg = buildChartSvg(
    {
      series: [chart.mean_series],
      changePoints: chart.change_points,
      nWindows: chart.windows.length,
    },
    "cluster 2",
  );

  it("emits one polyline point per window", () => {
    const points = svg.match(/<polyline points="([^"]+)"/)?.[1] ?? "";
    expect(points.split(" ")).toHaveLength(chart.windows.length);
  });

  it("marks every change point with a dashed line", () => {
    const dashed = svg.match(/stroke-dasharray/g) ?? [];
    expect(dashed.length).toBe(chart.change_points.length);
  });

  it("stays inside the [0,1] axis even for out-of-range values", () => {
    const wild = buildChartSvg({
      series: [[-2, 0.5, 3]],
      changePoints: [],
      nWindows: 3,
    });
    const points = wild.match(/<polyline points="([^"]+)"/)?.[1] ?? "";
    const ys = points.split(" ").map((p) => Number(p.split(",")[1]));
    const lo = Math.min(...ys);
    const hi = Math.max(...ys);
    const flat = buildChartSvg({
      series: [[1, 0.5, 0]],
      changePoints: [],
      nWindows: 3,
    });
    const fpts = flat.match(/<polyline points="([^"]+)"/)?.[1] ?? "";
    const fys = fpts.split(" ").map((p) => Number(p.split(",")[1]));
    expect(lo).toBe(Math.min(...fys));
    expect(hi).toBe(Math.max(...fys));
  });

  it("escapes markup in the title", () => {
    const evil = buildChartSvg(
      { series: [[0.5]], changePoints: [], nWindows: 1 },
      `<script>"x"</script>`,
    );
    expect(evil).not.toContain("<script>");
    expect(evil).toContain("&lt;script&gt;");
  });

  it("is deterministic", () => {
    const again = buildChartSvg(
      {
        series: [chart.mean_series],
        changePoints: chart.change_points,
        nWindows: chart.windows.length,
      },
      "cluster 2",
    );
    expect(again).toBe(svg);
  });

  it("overlays multiple series", () => {
    const multi = buildChartSvg({
      series: [
        [0.1, 0.2],
        [0.3, 0.4],
        [0.5, 0.6],
      ],
      changePoints: [],
      nWindows: 2,
    });
    expect(multi.match(/<polyline /g)).toHaveLength(3);
  });
});

describe("buildAcfSvg", () => {
  const acf = metrics.clusters[0]!.acf;
  const svg = buildAcfSvg(acf);

  it("draws one bar per lag", () => {
    const bars = svg.match(/<rect /g) ?? [];
    // background + significance band + one bar per lag
    expect(bars.length).toBe(acf.values.length + 2);
  });

  it("colors significant lags differently", () => {
    const withSig = buildAcfSvg({
      values: [1, 0.1, 0.8],
      significant: [2],
      band: 0.5,
    });
    const withoutSig = buildAcfSvg({
      values: [1, 0.1, 0.8],
      significant: [],
      band: 0.5,
    });
    expect(withSig).toContain("#cc3333");
    expect(withoutSig).not.toContain("#cc3333");
  });

  it("centers the zero line and bounds bars to [-1, 1]", () => {
    const svg2 = buildAcfSvg({ values: [1, -1], significant: [], band: 0.2 });
    expect(svg2).toContain("<line");
    expect(svg2).toContain("</svg>");
  });
});
