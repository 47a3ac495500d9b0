/** Point and tint colors shared across every view. */

export type RGB = [number, number, number];

export const RED: RGB = [214, 39, 40];
export const BLUE: RGB = [31, 119, 180];
export const CLASS_BAR_GRAY = "#b0b0b0";

/** Round half-to-even, so interpolation midpoints don't drift upward. */
function roundHalfEven(value: number): number {
  const floor = Math.floor(value);
  const diff = value - floor;
  if (diff > 0.5) return floor + 1;
  if (diff < 0.5) return floor;
  return floor % 2 === 0 ? floor : floor + 1;
}

/**
 * Quadrant-background tint for a selection: componentwise linear
 * interpolation from red (no blue members) to blue (all blue members).
 */
export function tintColor(fractionBlue: number): RGB {
  if (!(fractionBlue >= 0 && fractionBlue <= 1)) {
    throw new RangeError(`fractionBlue must be in [0, 1], got ${fractionBlue}`);
  }
  return [0, 1, 2].map((i) =>
    roundHalfEven(RED[i] + (BLUE[i] - RED[i]) * fractionBlue),
  ) as RGB;
}

export function toCss([r, g, b]: RGB, alpha = 1): string {
  return alpha === 1 ? `rgb(${r},${g},${b})` : `rgba(${r},${g},${b},${alpha})`;
}

export function pointColor(color: string): string {
  return color === "blue" ? toCss(BLUE) : toCss(RED);
}
