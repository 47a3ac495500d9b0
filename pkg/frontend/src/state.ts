/**
 * View state: everything the UI needs beyond the server payloads.
 *
 * Every render derives from (payloads, state); the client never recomputes
 * slicing math. State transitions return new objects so stale async
 * responses can be compared against the state that requested them.
 */

import type {
  CorrectnessFilter,
  CoordinateMode,
  FilterMode,
  Representation,
  SortKey,
} from "./types.js";

export interface ViewState {
  rows: string; // "all-pairs" | "<model>-vs-rest" | "<x>:<y>"
  cols: string[] | null; // null = every column
  filterMode: FilterMode;
  correctness: CorrectnessFilter;
  representation: Representation;
  coordinateMode: CoordinateMode;
  selectionId: string | null;
  selectionMembers: number[];
  sortKeys: SortKey[];
  topK: number;
}

export function initialState(): ViewState {
  return {
    rows: "all-pairs",
    cols: null,
    filterMode: "ALL",
    correctness: "any",
    representation: "points",
    coordinateMode: "confidence",
    selectionId: null,
    selectionMembers: [],
    sortKeys: ["N"],
    topK: 20,
  };
}

export function setFilterMode(state: ViewState, filterMode: FilterMode): ViewState {
  return { ...state, filterMode };
}

export function setRepresentation(state: ViewState, representation: Representation): ViewState {
  return { ...state, representation };
}

export function setSelection(
  state: ViewState,
  selectionId: string | null,
  members: number[],
): ViewState {
  return { ...state, selectionId, selectionMembers: [...members] };
}

/** Toggle a sort key; at most two may be active (two sort by difference). */
export function toggleSortKey(state: ViewState, key: SortKey): ViewState {
  const active = state.sortKeys.includes(key);
  let sortKeys: SortKey[];
  if (active) {
    sortKeys = state.sortKeys.filter((k) => k !== key);
  } else {
    sortKeys = [...state.sortKeys, key];
    if (sortKeys.length > 2) sortKeys = sortKeys.slice(-2);
  }
  if (sortKeys.length === 0) sortKeys = [key];
  return { ...state, sortKeys };
}
