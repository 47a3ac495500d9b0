/** DOM rendering of the feature interpretation table. */

import { BLUE, CLASS_BAR_GRAY, RED, toCss } from "./colors.js";
import { featureTableModel } from "./featureTable.js";
import type { FeatureTablePayload, SortKey } from "./types.js";

export interface TableCallbacks {
  onSortToggle(key: SortKey): void;
}

export function renderFeatureTable(
  payload: FeatureTablePayload,
  activeKeys: SortKey[],
  callbacks: TableCallbacks,
): HTMLElement {
  const model = featureTableModel(payload);
  const root = document.createElement("div");
  root.className = "feature-table";

  const controls = document.createElement("div");
  controls.className = "sort-buttons";
  for (const key of ["C", "G", "N"] as SortKey[]) {
    const button = document.createElement("button");
    button.textContent = key;
    button.className = activeKeys.includes(key) ? "active" : "";
    button.addEventListener("click", () => callbacks.onSortToggle(key));
    controls.appendChild(button);
  }
  root.appendChild(controls);

  const table = document.createElement("table");
  const head = table.createTHead().insertRow();
  head.insertCell().textContent = "feature";
  model.columns.forEach((column, c) => {
    const cell = head.insertCell();
    cell.appendChild(divergenceGlyph(model.divergenceArea[c], model.divergence[c]));
    const label = document.createElement("div");
    label.textContent = column;
    cell.appendChild(label);
  });

  const body = table.createTBody();
  for (const row of model.rows) {
    const tr = body.insertRow();
    tr.insertCell().textContent = row.feature;
    for (const cell of row.cells) {
      const td = tr.insertCell();
      td.appendChild(bar(cell.classWidth, CLASS_BAR_GRAY, 12));
      td.appendChild(bar(cell.gWidth, toCss(BLUE), 5));
      td.appendChild(bar(cell.nWidth, toCss(RED), 5));
    }
  }
  root.appendChild(table);
  return root;
}

function bar(width: number, color: string, height: number): HTMLElement {
  const outer = document.createElement("div");
  outer.className = "bar-track";
  const inner = document.createElement("div");
  inner.style.width = `${Math.round(width * 100)}%`;
  inner.style.height = `${height}px`;
  inner.style.background = color;
  outer.appendChild(inner);
  return outer;
}

/** Filled line-chart glyph whose area tracks the column divergence. */
function divergenceGlyph(area: number, value: number): HTMLElement {
  const wrapper = document.createElement("div");
  wrapper.className = "divergence-glyph";
  wrapper.title = `KL divergence ${value.toPrecision(4)} nats`;
  const svgNs = "http://www.w3.org/2000/svg";
  const width = 60;
  const height = 18;
  const svg = document.createElementNS(svgNs, "svg");
  svg.setAttribute("width", String(width));
  svg.setAttribute("height", String(height));
  const peak = height - area * (height - 2);
  const path = document.createElementNS(svgNs, "path");
  path.setAttribute(
    "d",
    `M0,${height} Q${width / 2},${peak} ${width},${height} Z`,
  );
  path.setAttribute("fill", "#777");
  svg.appendChild(path);
  wrapper.appendChild(svg);
  return wrapper;
}
