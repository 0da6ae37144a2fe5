/** Activity filter for drift-map rows. */

import type { DriftMapLayout, LayoutRow } from "./types.js";

/** Sorted activities mentioned by any constraint in the layout. */
export function activitiesInLayout(layout: DriftMapLayout): string[] {
  const acts = new Set<string>();
  for (const row of layout.rows) {
    acts.add(row.constraint.a);
    if (row.constraint.b !== null) acts.add(row.constraint.b);
  }
  return [...acts].sort();
}

export function rowMentionsActivity(row: LayoutRow, activity: string): boolean {
  return row.constraint.a === activity || row.constraint.b === activity;
}

/**
 * Indices of the rows to show for the given filter, in layout order.
 * A null or empty filter is the identity.
 */
export function visibleRowIndices(
  rows: LayoutRow[],
  activity: string | null,
): number[] {
  if (!activity) return rows.map((_, i) => i);
  const out: number[] = [];
  rows.forEach((row, i) => {
    if (rowMentionsActivity(row, activity)) out.push(i);
  });
  return out;
}

export interface FilterCounts {
  shown: number;
  total: number;
}

export function filterCounts(
  rows: LayoutRow[],
  activity: string | null,
): FilterCounts {
  return { shown: visibleRowIndices(rows, activity).length, total: rows.length };
}
