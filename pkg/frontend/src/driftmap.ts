/**
 * Drift-map rasterizer.
 *
 * Pure function from the service layout JSON to an RGBA pixel buffer in
 * canvas putImageData order. Keeping it free of DOM state makes the canvas
 * content directly snapshot-testable: the buffer IS the image.
 */

import { visibleRowIndices } from "./filter.js";
import type { DriftMapLayout, LayoutBand } from "./types.js";

export interface DriftMapOptions {
  /** pixels per window column */
  cellW?: number;
  /** pixels per constraint row */
  cellH?: number;
  /** band to highlight; rows of other bands are dimmed */
  highlight?: number | "stable" | null;
  /** show only rows whose constraint mentions this activity */
  activity?: string | null;
}

export interface DriftMapImage {
  width: number;
  height: number;
  /** RGBA, row-major, alpha always 255 */
  data: Uint8ClampedArray<ArrayBuffer>;
  /** visible row position -> index into layout.rows */
  rowIndices: number[];
}

const DIM = 0.55;
const LINE_RGB = [255, 255, 255] as const;

export function renderDriftMap(
  layout: DriftMapLayout,
  opts: DriftMapOptions = {},
): DriftMapImage {
  const cellW = opts.cellW ?? 3;
  const cellH = opts.cellH ?? 2;
  if (cellW < 1 || cellH < 1) throw new RangeError("cell size must be >= 1");
  const highlight = opts.highlight ?? null;
  const rowIndices = visibleRowIndices(layout.rows, opts.activity ?? null);
  const lut = layout.colormap.rgb;

  const width = layout.n_windows * cellW;
  const height = rowIndices.length * cellH;
  const data = new Uint8ClampedArray(width * height * 4);

  rowIndices.forEach((rowIdx, pos) => {
    const row = layout.rows[rowIdx]!;
    const dim = highlight !== null && row.cluster !== highlight;
    for (let w = 0; w < layout.n_windows; w++) {
      const v = row.values[w] ?? 0;
      const clamped = v < 0 ? 0 : v > 1 ? 1 : v;
      const rgb = lut[Math.round(clamped * 255)] ?? [0, 0, 0];
      let [r, g, b] = [rgb[0] ?? 0, rgb[1] ?? 0, rgb[2] ?? 0];
      if (dim) {
        r = Math.floor(r * DIM);
        g = Math.floor(g * DIM);
        b = Math.floor(b * DIM);
      }
      for (let dy = 0; dy < cellH; dy++) {
        const y = pos * cellH + dy;
        let off = (y * width + w * cellW) * 4;
        for (let dx = 0; dx < cellW; dx++) {
          data[off] = r;
          data[off + 1] = g;
          data[off + 2] = b;
          data[off + 3] = 255;
          off += 4;
        }
      }
    }
  });

  // global change-point markers: one white column at the window's left edge
  for (const line of layout.lines) {
    const x = line.window * cellW;
    if (x < 0 || x >= width) continue;
    for (let y = 0; y < height; y++) {
      const off = (y * width + x) * 4;
      data[off] = LINE_RGB[0];
      data[off + 1] = LINE_RGB[1];
      data[off + 2] = LINE_RGB[2];
      data[off + 3] = 255;
    }
  }

  return { width, height, data, rowIndices };
}

/** Layout row index under pixel row y, or null outside the map. */
export function rowAtPixel(
  image: DriftMapImage,
  y: number,
  cellH: number,
): number | null {
  const pos = Math.floor(y / cellH);
  const rowIdx = image.rowIndices[pos];
  return rowIdx === undefined ? null : rowIdx;
}

/** Band containing the given layout row index, if any. */
export function bandOfRow(
  layout: DriftMapLayout,
  rowIdx: number,
): LayoutBand | null {
  for (const band of layout.bands) {
    if (rowIdx >= band.start && rowIdx < band.end) return band;
  }
  return null;
}
