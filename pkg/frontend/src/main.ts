/** Application shell: filter panel, small-multiples matrix, feature table. */

import { ApiClient } from "./api.js";
import { CELL_SIZE, renderCell } from "./cellview.js";
import { initialState, setSelection, toggleSortKey, ViewState } from "./state.js";
import { renderFeatureTable } from "./tableview.js";
import type {
  CellPayload,
  CellRef,
  FilterMode,
  Representation,
  SelectionOrigin,
  SessionPayload,
} from "./types.js";

const api = new ApiClient();
let state: ViewState = initialState();
let session: SessionPayload;

const matrixHost = document.getElementById("matrix")!;
const tableHost = document.getElementById("feature-table")!;
const statusHost = document.getElementById("status")!;

async function boot(): Promise<void> {
  session = await api.openSession();
  state = { ...state, coordinateMode: session.coordinate_mode };
  renderControls();
  await refreshMatrix();
}

function renderControls(): void {
  const host = document.getElementById("controls")!;
  host.textContent = "";

  host.appendChild(buttonGroup("filter", ["ALL", "UNION", "GT"], state.filterMode, async (mode) => {
    state = { ...state, filterMode: mode as FilterMode };
    await refreshMatrix();
  }));
  host.appendChild(
    buttonGroup("view", ["points", "contours"], state.representation, async (rep) => {
      state = { ...state, representation: rep as Representation };
      await refreshMatrix();
    }),
  );
  if (session.models.length > 2) {
    const options = ["all-pairs", ...session.models.map((m) => `${m}-vs-rest`)];
    host.appendChild(buttonGroup("rows", options, state.rows, async (rows) => {
      state = { ...state, rows };
      await refreshMatrix();
    }));
  }
}

function buttonGroup(
  label: string,
  options: string[],
  active: string,
  onPick: (option: string) => void,
): HTMLElement {
  const group = document.createElement("span");
  group.className = "button-group";
  const caption = document.createElement("label");
  caption.textContent = label;
  group.appendChild(caption);
  for (const option of options) {
    const button = document.createElement("button");
    button.textContent = option;
    button.className = option === active ? "active" : "";
    button.addEventListener("click", () => onPick(option));
    group.appendChild(button);
  }
  return group;
}

async function refreshMatrix(): Promise<void> {
  renderControls();
  const matrix = await api.matrix(state);
  if (!matrix) return;

  matrixHost.textContent = "";
  const grid = document.createElement("div");
  grid.style.display = "grid";
  grid.style.gridTemplateColumns = `repeat(${matrix.cols.length + 1}, max-content)`;
  grid.appendChild(cornerLabel());
  for (const column of matrix.cols) grid.appendChild(headerLabel(column));

  const cellRefs: CellRef[] = [];
  const hosts: HTMLElement[] = [];
  matrix.rows.forEach((pair) => {
    grid.appendChild(headerLabel(`${pair.x_model} vs ${pair.y_model}`));
    matrix.cols.forEach((column) => {
      const ref: CellRef = {
        x_model: pair.x_model,
        y_model: pair.y_model,
        column,
        filter_mode: state.filterMode,
        correctness: state.correctness,
      };
      cellRefs.push(ref);
      const host = document.createElement("div");
      host.style.width = `${CELL_SIZE}px`;
      host.style.height = `${CELL_SIZE}px`;
      hosts.push(host);
      grid.appendChild(host);
    });
  });
  matrixHost.appendChild(grid);

  const payloads = await Promise.all(
    cellRefs.map((ref) => api.cell(ref, state.representation)),
  );
  payloads.forEach((payload, i) => {
    if (payload) drawCell(hosts[i], payload);
  });
}

function drawCell(host: HTMLElement, payload: CellPayload): void {
  host.textContent = "";
  host.appendChild(
    renderCell(payload, state.selectionMembers, session.task === "regression", {
      onSelect: handleSelect,
    }),
  );
  host.dataset.cellKey = cellKey(payload.cell);
}

function cellKey(cell: CellRef): string {
  return `${cell.x_model}|${cell.y_model}|${cell.column}`;
}

async function handleSelect(cell: CellRef, origin: SelectionOrigin): Promise<void> {
  try {
    const selection = await api.createSelection(cell, origin);
    state = setSelection(state, selection.id, selection.members);
    statusHost.textContent = `selection ${selection.id}: ${selection.members.length} instances`;
    await refreshMatrix();
    await refreshTable();
  } catch (error) {
    statusHost.textContent = String(error);
  }
}

async function refreshTable(): Promise<void> {
  if (!state.selectionId || state.selectionMembers.length === 0) {
    tableHost.textContent = "";
    return;
  }
  const payload = await api.featureTable(state.selectionId, state.topK, state.sortKeys);
  if (!payload) return;
  tableHost.textContent = "";
  tableHost.appendChild(
    renderFeatureTable(payload, state.sortKeys, {
      onSortToggle: async (key) => {
        state = toggleSortKey(state, key);
        await refreshTable();
      },
    }),
  );
}

function headerLabel(text: string): HTMLElement {
  const label = document.createElement("div");
  label.className = "grid-label";
  label.textContent = text;
  return label;
}

function cornerLabel(): HTMLElement {
  const corner = document.createElement("div");
  corner.className = "grid-label corner";
  return corner;
}

boot().catch((error) => {
  statusHost.textContent = `failed to start: ${error}`;
});
