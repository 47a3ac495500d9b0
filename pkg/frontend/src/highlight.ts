/**
 * Cross-cell highlighting: one selection, every visible cell.
 *
 * The server owns membership; the view only intersects the selected id set
 * with what each cell actually renders, so the highlighted ids are the same
 * in every cell that contains them.
 */

import type { CellPayload, CellPoint, ClassificationPoint } from "./types.js";

export function cellInstanceIds(payload: CellPayload): Set<number> {
  const points = visiblePoints(payload);
  return new Set(points.map((p) => p.instance));
}

export function visiblePoints(payload: CellPayload): CellPoint[] {
  if (payload.points) return payload.points;
  return payload.noise ?? [];
}

/** Ids to highlight in one cell: selection members the cell renders. */
export function highlightSet(payload: CellPayload, selection: number[]): Set<number> {
  const visible = cellInstanceIds(payload);
  return new Set(selection.filter((id) => visible.has(id)));
}

/** Highlight sets for a whole matrix of cells, keyed by cell index. */
export function highlightAll(
  payloads: CellPayload[],
  selection: number[],
): Set<number>[] {
  return payloads.map((payload) => highlightSet(payload, selection));
}

/**
 * Per-quadrant blue fraction of the highlighted points, driving the
 * quadrant background tint. Quadrants holding no highlighted point are
 * absent from the result.
 */
export function quadrantTintFractions(
  payload: CellPayload,
  selection: number[],
): Map<number, number> {
  const selected = new Set(selection);
  const blue = new Map<number, number>();
  const total = new Map<number, number>();
  for (const point of visiblePoints(payload)) {
    if (!selected.has(point.instance)) continue;
    const q = point.quadrant;
    total.set(q, (total.get(q) ?? 0) + 1);
    if ((point as ClassificationPoint).color === "blue") {
      blue.set(q, (blue.get(q) ?? 0) + 1);
    }
  }
  const fractions = new Map<number, number>();
  for (const [q, n] of total) {
    fractions.set(q, (blue.get(q) ?? 0) / n);
  }
  return fractions;
}
