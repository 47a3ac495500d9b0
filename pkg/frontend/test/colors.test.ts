import { describe, expect, it } from "vitest";

import { BLUE, RED, pointColor, tintColor, toCss } from "../src/colors.js";

describe("tintColor", () => {
  it("hits the red endpoint for an all-red selection", () => {
    expect(tintColor(0)).toEqual([214, 39, 40]);
  });

  it("hits the blue endpoint for an all-blue selection", () => {
    expect(tintColor(1)).toEqual([31, 119, 180]);
  });

  it("interpolates componentwise at the midpoint", () => {
    expect(tintColor(0.5)).toEqual([122, 79, 110]);
  });

  it("is monotone toward blue in every component direction", () => {
    let previous = tintColor(0);
    for (let f = 0.1; f <= 1.0001; f += 0.1) {
      const next = tintColor(Math.min(f, 1));
      expect(next[0]).toBeLessThanOrEqual(previous[0]); // red falls
      expect(next[2]).toBeGreaterThanOrEqual(previous[2]); // blue rises
      previous = next;
    }
  });

  it("rejects fractions outside [0, 1]", () => {
    expect(() => tintColor(-0.01)).toThrow(RangeError);
    expect(() => tintColor(1.01)).toThrow(RangeError);
    expect(() => tintColor(Number.NaN)).toThrow(RangeError);
  });
});

describe("css helpers", () => {
  it("formats rgb and rgba", () => {
    expect(toCss(RED)).toBe("rgb(214,39,40)");
    expect(toCss(BLUE, 0.25)).toBe("rgba(31,119,180,0.25)");
  });

  it("maps point color names", () => {
    expect(pointColor("blue")).toBe(toCss(BLUE));
    expect(pointColor("red")).toBe(toCss(RED));
  });
});
