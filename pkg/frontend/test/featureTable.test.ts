import { describe, expect, it } from "vitest";

import { featureTableModel } from "../src/featureTable.js";
import { initialState, toggleSortKey } from "../src/state.js";
import type { FeatureTablePayload } from "../src/types.js";

import features from "./fixtures/features.json";

const PAYLOAD = features as FeatureTablePayload;

describe("featureTableModel", () => {
  it("keeps the server's column order", () => {
    const model = featureTableModel(PAYLOAD);
    expect(model.columns).toEqual(PAYLOAD.columns);
  });

  it("normalizes every bar into [0, 1] with the max at 1", () => {
    const model = featureTableModel(PAYLOAD);
    const widths = model.rows.flatMap((row) =>
      row.cells.flatMap((cell) => [cell.classWidth, cell.gWidth, cell.nWidth]),
    );
    expect(Math.max(...widths)).toBeCloseTo(1, 12);
    for (const width of widths) {
      expect(width).toBeGreaterThanOrEqual(0);
      expect(width).toBeLessThanOrEqual(1);
    }
  });

  it("normalizes divergence areas by the max across columns", () => {
    const model = featureTableModel(PAYLOAD);
    expect(Math.max(...model.divergenceArea)).toBe(1);
    const argmaxArea = model.divergenceArea.indexOf(1);
    const argmaxRaw = model.divergence.indexOf(Math.max(...model.divergence));
    expect(argmaxArea).toBe(argmaxRaw);
  });

  it("handles an all-zero table without dividing by zero", () => {
    const empty: FeatureTablePayload = {
      ...PAYLOAD,
      divergence: [0, 0, 0],
      rows: [{ feature: "x", cells: [{ c: 0, g: 0, n: 0 }, { c: 0, g: 0, n: 0 }, { c: 0, g: 0, n: 0 }] }],
    };
    const model = featureTableModel(empty);
    expect(model.rows[0].cells[0].classWidth).toBe(0);
    expect(model.divergenceArea).toEqual([0, 0, 0]);
  });
});

describe("sort-key toggling", () => {
  it("keeps at most two active keys", () => {
    let state = initialState(); // starts at ["N"]
    state = toggleSortKey(state, "C");
    expect(state.sortKeys).toEqual(["N", "C"]);
    state = toggleSortKey(state, "G");
    expect(state.sortKeys).toEqual(["C", "G"]);
  });

  it("never drops to zero keys", () => {
    let state = initialState();
    state = toggleSortKey(state, "N"); // deactivating the only key re-arms it
    expect(state.sortKeys).toEqual(["N"]);
  });
});
