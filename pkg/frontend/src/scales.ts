/** Linear scales and the residual display range. */

export interface LinearScale {
  (value: number): number;
  invert(pixel: number): number;
  domain: [number, number];
  range: [number, number];
}

export function linearScale(domain: [number, number], range: [number, number]): LinearScale {
  const [d0, d1] = domain;
  const [r0, r1] = range;
  const span = d1 - d0 || 1;
  const scale = ((value: number) => r0 + ((value - d0) / span) * (r1 - r0)) as LinearScale;
  scale.invert = (pixel: number) => d0 + ((pixel - r0) / (r1 - r0 || 1)) * span;
  scale.domain = domain;
  scale.range = range;
  return scale;
}

/** Linearly interpolated percentile (q in [0, 100]) of an unsorted sample. */
export function percentile(values: number[], q: number): number {
  if (values.length === 0) throw new RangeError("percentile of an empty sample");
  const sorted = [...values].sort((a, b) => a - b);
  const rank = (q / 100) * (sorted.length - 1);
  const lo = Math.floor(rank);
  const hi = Math.ceil(rank);
  if (lo === hi) return sorted[lo];
  return sorted[lo] + (rank - lo) * (sorted[hi] - sorted[lo]);
}

export interface ResidualScale {
  min: number;
  max: number;
  /** Clamp a residual into the display range; overflow marks edge points. */
  clamp(value: number): { value: number; overflow: boolean };
}

/**
 * Symmetric display range for residual cells: half-width is the larger of
 * |1st percentile| and |99th percentile|, so a stray outlier cannot flatten
 * the whole plot. All-zero residuals fall back to [-1, 1].
 */
export function residualAxisScale(residuals: number[]): ResidualScale {
  if (residuals.length === 0) throw new RangeError("no residuals to scale");
  const m = Math.max(
    Math.abs(percentile(residuals, 1)),
    Math.abs(percentile(residuals, 99)),
  );
  const half = m > 0 ? m : 1;
  return {
    min: -half,
    max: half,
    clamp(value: number) {
      if (value > half) return { value: half, overflow: true };
      if (value < -half) return { value: -half, overflow: true };
      return { value, overflow: false };
    },
  };
}
