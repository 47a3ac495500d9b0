/**
 * Render model for the feature interpretation table: bar widths for the
 * gray class bar and the blue/red selection bars, plus the per-column
 * divergence glyph, all normalized and unit-free so the DOM layer only
 * draws rectangles.
 */

import type { FeatureTablePayload } from "./types.js";

export interface BarCell {
  classWidth: number; // gray bar, 0..1
  gWidth: number; // blue bar, 0..1
  nWidth: number; // red bar, 0..1
}

export interface TableRowModel {
  feature: string;
  cells: BarCell[];
}

export interface TableModel {
  columns: string[];
  rows: TableRowModel[];
  /** Divergence glyph areas, normalized by the max across visible columns. */
  divergenceArea: number[];
  divergence: number[];
}

export function featureTableModel(payload: FeatureTablePayload): TableModel {
  // One scale across the whole table keeps bars comparable between rows
  // and columns, mirroring how the aggregates themselves are comparable.
  let max = 0;
  for (const row of payload.rows) {
    for (const cell of row.cells) {
      max = Math.max(max, Math.abs(cell.c), Math.abs(cell.g), Math.abs(cell.n));
    }
  }
  const scale = max > 0 ? 1 / max : 0;
  const rows = payload.rows.map((row) => ({
    feature: row.feature,
    cells: row.cells.map((cell) => ({
      classWidth: Math.abs(cell.c) * scale,
      gWidth: Math.abs(cell.g) * scale,
      nWidth: Math.abs(cell.n) * scale,
    })),
  }));
  const maxDivergence = Math.max(...payload.divergence, 0);
  const divergenceArea = payload.divergence.map((d) =>
    maxDivergence > 0 ? d / maxDivergence : 0,
  );
  return {
    columns: payload.columns,
    rows,
    divergenceArea,
    divergence: payload.divergence,
  };
}
