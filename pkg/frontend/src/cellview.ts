/**
 * SVG rendering of one matrix cell: axes, points or contours, quadrant
 * tint backgrounds, selection affordances (click near a quadrant center
 * selects the quadrant, dragging draws a lasso).
 */

import { pointColor, tintColor, toCss } from "./colors.js";
import { highlightSet, quadrantTintFractions, visiblePoints } from "./highlight.js";
import { linearScale, residualAxisScale } from "./scales.js";
import type { CellPayload, CellRef, SelectionOrigin } from "./types.js";

const SVG_NS = "http://www.w3.org/2000/svg";
export const CELL_SIZE = 180;
const PAD = 8;

function svgElement<K extends keyof SVGElementTagNameMap>(
  tag: K,
  attrs: Record<string, string>,
): SVGElementTagNameMap[K] {
  const el = document.createElementNS(SVG_NS, tag);
  for (const [k, v] of Object.entries(attrs)) el.setAttribute(k, v);
  return el;
}

export interface CellCallbacks {
  onSelect(cell: CellRef, origin: SelectionOrigin): void;
}

export function renderCell(
  payload: CellPayload,
  selection: number[],
  isRegression: boolean,
  callbacks: CellCallbacks,
): SVGSVGElement {
  const svg = svgElement("svg", {
    width: String(CELL_SIZE),
    height: String(CELL_SIZE),
    class: "cell",
  });
  const points = visiblePoints(payload);
  let domain: [number, number] = [-1, 1];
  if (isRegression && points.length > 0) {
    const scale = residualAxisScale(points.flatMap((p) => [p.x, p.y]));
    domain = [scale.min, scale.max];
  }
  const sx = linearScale(domain, [PAD, CELL_SIZE - PAD]);
  const sy = linearScale(domain, [CELL_SIZE - PAD, PAD]);
  const cx = sx(0);
  const cy = sy(0);

  // Quadrant tint backgrounds behind everything else.
  const fractions = quadrantTintFractions(payload, selection);
  const quadRects: Record<number, [number, number, number, number]> = {
    1: [cx, PAD, CELL_SIZE - PAD - cx, cy - PAD],
    2: [PAD, PAD, cx - PAD, cy - PAD],
    3: [PAD, cy, cx - PAD, CELL_SIZE - PAD - cy],
    4: [cx, cy, CELL_SIZE - PAD - cx, CELL_SIZE - PAD - cy],
  };
  for (const [q, fraction] of fractions) {
    const [x, y, w, h] = quadRects[q];
    svg.appendChild(
      svgElement("rect", {
        x: String(x),
        y: String(y),
        width: String(Math.max(w, 0)),
        height: String(Math.max(h, 0)),
        fill: toCss(tintColor(fraction), 0.25),
      }),
    );
  }

  // Axes through the origin.
  for (const attrs of [
    { x1: String(PAD), y1: String(cy), x2: String(CELL_SIZE - PAD), y2: String(cy) },
    { x1: String(cx), y1: String(PAD), x2: String(cx), y2: String(CELL_SIZE - PAD) },
  ]) {
    svg.appendChild(svgElement("line", { ...attrs, stroke: "#999", "stroke-width": "1" }));
  }

  // Contours first (they sit under individual noise points).
  for (const contour of payload.contours ?? []) {
    const path = contour.polygon.map((v, i) => `${i ? "L" : "M"}${sx(v[0])},${sy(v[1])}`);
    svg.appendChild(
      svgElement("path", {
        d: path.join("") + "Z",
        fill: pointColor(contour.color),
        "fill-opacity": "0.3",
        stroke: pointColor(contour.color),
        "stroke-width": "1.5",
      }),
    );
  }

  const highlighted = highlightSet(payload, selection);
  for (const point of points) {
    const isHighlighted = highlighted.has(point.instance);
    const color = "color" in point ? pointColor(point.color) : "#555";
    svg.appendChild(
      svgElement("circle", {
        cx: String(sx(point.x)),
        cy: String(sy(point.y)),
        r: isHighlighted ? "3.5" : "2",
        fill: color,
        "fill-opacity": isHighlighted ? "1" : "0.55",
        stroke: isHighlighted ? "#222" : "none",
        "data-instance": String(point.instance),
      }),
    );
  }

  attachSelectionHandlers(svg, payload.cell, sx.invert, sy.invert, callbacks);
  return svg;
}

/** Short click = quadrant selection; drag = lasso polygon. */
function attachSelectionHandlers(
  svg: SVGSVGElement,
  cell: CellRef,
  invertX: (px: number) => number,
  invertY: (px: number) => number,
  callbacks: CellCallbacks,
): void {
  let trail: [number, number][] = [];
  let dragging = false;
  let preview: SVGPolylineElement | null = null;

  const localPoint = (event: PointerEvent): [number, number] => {
    const rect = svg.getBoundingClientRect();
    return [event.clientX - rect.left, event.clientY - rect.top];
  };

  svg.addEventListener("pointerdown", (event) => {
    dragging = true;
    trail = [localPoint(event)];
    svg.setPointerCapture(event.pointerId);
  });
  svg.addEventListener("pointermove", (event) => {
    if (!dragging) return;
    trail.push(localPoint(event));
    if (trail.length > 2) {
      if (!preview) {
        preview = svgElement("polyline", {
          fill: "rgba(120,120,120,0.15)",
          stroke: "#444",
          "stroke-dasharray": "3,2",
        });
        svg.appendChild(preview);
      }
      preview.setAttribute("points", trail.map(([x, y]) => `${x},${y}`).join(" "));
    }
  });
  svg.addEventListener("pointerup", () => {
    dragging = false;
    preview?.remove();
    preview = null;
    if (trail.length <= 3) {
      const [px, py] = trail[0];
      const x = invertX(px);
      const y = invertY(py);
      const quadrant = x >= 0 ? (y >= 0 ? 1 : 4) : y >= 0 ? 2 : 3;
      callbacks.onSelect(cell, { type: "quadrant", quadrant });
    } else {
      const polygon = trail.map(([px, py]) => [invertX(px), invertY(py)] as [number, number]);
      callbacks.onSelect(cell, { type: "lasso", polygon });
    }
    trail = [];
  });
}
