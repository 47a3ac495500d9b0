/**
 * Highlight coherence over real server payloads: a Q2 selection made in the
 * class-A cell must highlight exactly the same instance ids in all three
 * class columns.
 */

import { describe, expect, it } from "vitest";

import { highlightAll, highlightSet, quadrantTintFractions } from "../src/highlight.js";
import type { CellPayload } from "../src/types.js";

import cellA from "./fixtures/cell_points_A_all.json";
import cellB from "./fixtures/cell_points_B_all.json";
import cellC from "./fixtures/cell_points_C_all.json";

const COLUMNS = [cellA, cellB, cellC] as CellPayload[];

// Q2 of the class-A cell holds instances 1 and 5.
const Q2_SELECTION = (cellA as CellPayload).points!
  .filter((p) => p.quadrant === 2)
  .map((p) => p.instance);

describe("highlight coherence", () => {
  it("the Q2 selection is {1, 5}", () => {
    expect(Q2_SELECTION).toEqual([1, 5]);
  });

  it("highlights the same ids in all three class columns", () => {
    const sets = highlightAll(COLUMNS, Q2_SELECTION);
    for (const set of sets) {
      expect([...set].sort()).toEqual([1, 5]);
    }
  });

  it("never highlights ids a cell does not render", () => {
    const restricted: CellPayload = {
      ...(cellA as CellPayload),
      points: (cellA as CellPayload).points!.filter((p) => p.instance !== 5),
    };
    expect([...highlightSet(restricted, Q2_SELECTION)]).toEqual([1]);
  });

  it("empty selection highlights nothing anywhere", () => {
    for (const set of highlightAll(COLUMNS, [])) {
      expect(set.size).toBe(0);
    }
  });
});

describe("quadrant tint fractions", () => {
  it("mixes blue and red in Q2 of the class-A cell", () => {
    const fractions = quadrantTintFractions(cellA as CellPayload, Q2_SELECTION);
    expect(fractions.get(2)).toBe(0.5); // i1 blue, i5 red
    expect(fractions.has(1)).toBe(false); // nothing selected there
  });

  it("tracks the selection into other columns", () => {
    // In the class-C column both i1 and i5 sit in different quadrants.
    const fractions = quadrantTintFractions(cellC as CellPayload, Q2_SELECTION);
    let selectedCount = 0;
    for (const fraction of fractions.values()) {
      expect(fraction).toBeGreaterThanOrEqual(0);
      expect(fraction).toBeLessThanOrEqual(1);
      selectedCount += 1;
    }
    expect(selectedCount).toBeGreaterThan(0);
  });
});
