/**
 * Filter coherence: the view renders exactly what the server sends, so
 * toggling ALL -> UNION -> GT must strictly shrink the rendered point count
 * (6 -> 4 -> 2 for class A of the toy exchange).
 */

import { describe, expect, it } from "vitest";

import { cellInstanceIds, visiblePoints } from "../src/highlight.js";
import { initialState, setFilterMode } from "../src/state.js";
import type { CellPayload, FilterMode } from "../src/types.js";

import allA from "./fixtures/cell_points_A_all.json";
import gtA from "./fixtures/cell_points_A_gt.json";
import unionA from "./fixtures/cell_points_A_union.json";

const BY_MODE: Record<FilterMode, CellPayload> = {
  ALL: allA as CellPayload,
  UNION: unionA as CellPayload,
  GT: gtA as CellPayload,
};

describe("filter coherence", () => {
  it("renders 6 -> 4 -> 2 points for class A across ALL -> UNION -> GT", () => {
    let state = initialState();
    const rendered: number[] = [];
    for (const mode of ["ALL", "UNION", "GT"] as FilterMode[]) {
      state = setFilterMode(state, mode);
      rendered.push(visiblePoints(BY_MODE[state.filterMode]).length);
    }
    expect(rendered).toEqual([6, 4, 2]);
    expect(rendered[0]).toBeGreaterThan(rendered[1]);
    expect(rendered[1]).toBeGreaterThan(rendered[2]);
  });

  it("narrower modes render subsets, never new instances", () => {
    const all = cellInstanceIds(BY_MODE.ALL);
    const union = cellInstanceIds(BY_MODE.UNION);
    const gt = cellInstanceIds(BY_MODE.GT);
    for (const id of gt) expect(union.has(id)).toBe(true);
    for (const id of union) expect(all.has(id)).toBe(true);
  });

  it("matches the toy member sets exactly", () => {
    expect([...cellInstanceIds(BY_MODE.UNION)].sort()).toEqual([0, 1, 3, 5]);
    expect([...cellInstanceIds(BY_MODE.GT)].sort()).toEqual([0, 1]);
  });
});
