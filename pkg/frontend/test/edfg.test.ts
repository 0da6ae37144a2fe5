import { describe, expect, it } from "vitest";

import { buildEdfgSvg, layoutEdfg } from "../src/edfg.js";
import type { Edfg } from "../src/types.js";
import { fixture } from "./helpers.js";

const edfg = fixture<Edfg>("edfg-0.json"); // the one fixture with overlays

describe("layoutEdfg", () => {
  const layout = layoutEdfg(edfg);

  it("positions every activity exactly once with finite coordinates", () => {
    const seen = new Set(layout.nodes.map((n) => n.activity));
    expect(seen.size).toBe(edfg.dfg.nodes.length);
    for (const n of layout.nodes) {
      expect(Number.isFinite(n.x)).toBe(true);
      expect(Number.isFinite(n.y)).toBe(true);
      expect(n.layer).toBeGreaterThanOrEqual(0);
    }
  });

  it("sends forward edges strictly downward in layers", () => {
    const layer = new Map(layout.nodes.map((n) => [n.activity, n.layer]));
    for (const e of layout.edges) {
      if (e.self || e.backward) continue;
      expect(layer.get(e.target)!).toBeGreaterThan(layer.get(e.source)!);
    }
  });

  it("keeps all dfg arcs, classifying self loops and back edges", () => {
    expect(layout.edges).toHaveLength(edfg.dfg.arcs.length);
    for (const e of layout.edges)
      if (e.self) expect(e.source).toBe(e.target);
  });

  it("carries the constraint overlays through with their colors", () => {
    expect(layout.overlays).toHaveLength(edfg.constraint_arcs.length);
    const names = new Set(layout.nodes.map((n) => n.activity));
    for (const o of layout.overlays) {
      expect(names.has(o.a)).toBe(true);
      expect(names.has(o.b)).toBe(true);
      expect(o.color).toMatch(/^#[0-9a-fA-F]{6}$/);
    }
  });

  it("is deterministic", () => {
    expect(layoutEdfg(edfg)).toEqual(layout);
  });

  it("breaks cycles instead of looping forever", () => {
    const cyclic: Edfg = {
      dfg: {
        nodes: [
          { activity: "x", count: 5 },
          { activity: "y", count: 4 },
          { activity: "z", count: 3 },
        ],
        arcs: [
          { source: "x", target: "y", count: 5 },
          { source: "y", target: "z", count: 4 },
          { source: "z", target: "x", count: 2 },
          { source: "z", target: "z", count: 1 },
        ],
        starts: [{ activity: "x", count: 5 }],
        ends: [{ activity: "z", count: 3 }],
      },
      constraint_arcs: [],
    };
    const out = layoutEdfg(cyclic);
    expect(out.nodes).toHaveLength(3);
    expect(out.edges.filter((e) => e.backward)).toHaveLength(1);
    expect(out.edges.filter((e) => e.self)).toHaveLength(1);
    const layer = new Map(out.nodes.map((n) => [n.activity, n.layer]));
    expect(layer.get("x")).toBe(0);
    expect(layer.get("y")).toBe(1);
    expect(layer.get("z")).toBe(2);
  });
});

describe("buildEdfgSvg", () => {
  const svg = buildEdfgSvg(layoutEdfg(edfg));

  it("renders a node box per activity", () => {
    for (const n of edfg.dfg.nodes)
      expect(svg).toContain(`>${n.activity}</text>`);
  });

  it("labels overlays with kind and confidence", () => {
    const arc = edfg.constraint_arcs[0]!;
    expect(svg).toContain(`${arc.kind} ${arc.confidence.toFixed(2)}`);
    expect(svg).toContain(arc.color);
  });

  it("dashes negated constraint overlays", () => {
    const withNot: Edfg = {
      dfg: {
        nodes: [
          { activity: "m", count: 2 },
          { activity: "n", count: 2 },
        ],
        arcs: [{ source: "m", target: "n", count: 2 }],
        starts: [],
        ends: [],
      },
      constraint_arcs: [
        {
          a: "m",
          b: "n",
          kind: "NotSuccession",
          category: "negative",
          color: "#aa2222",
          confidence: 1,
        },
      ],
    };
    expect(buildEdfgSvg(layoutEdfg(withNot))).toContain("stroke-dasharray");
  });

  it("closes cleanly", () => {
    expect(svg.startsWith("<svg ")).toBe(true);
    expect(svg.endsWith("</svg>")).toBe(true);
  });
});
