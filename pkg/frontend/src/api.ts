/** Typed client for /api/v1 with stale-response rejection per panel. */

import type {
  CellPayload,
  CellRef,
  FeatureTablePayload,
  MatrixPayload,
  Representation,
  SelectionOrigin,
  SelectionPayload,
  SessionPayload,
  SortKey,
} from "./types.js";
import type { ViewState } from "./state.js";

const API = "/api/v1";

async function getJson<T>(path: string, params: Record<string, string>): Promise<T> {
  const query = new URLSearchParams(params).toString();
  const response = await fetch(`${API}${path}?${query}`);
  if (!response.ok) {
    const detail = await response.text();
    throw new Error(`GET ${path} -> ${response.status}: ${detail}`);
  }
  return (await response.json()) as T;
}

async function postJson<T>(path: string, body: unknown): Promise<T> {
  const response = await fetch(`${API}${path}`, {
    method: "POST",
    headers: { "content-type": "application/json" },
    body: JSON.stringify(body),
  });
  if (!response.ok) {
    const detail = await response.text();
    throw new Error(`POST ${path} -> ${response.status}: ${detail}`);
  }
  return (await response.json()) as T;
}

export class ApiClient {
  session = "";
  // One in-flight request per panel; later responses win, earlier are dropped.
  private sequence = new Map<string, number>();

  async openSession(): Promise<SessionPayload> {
    const payload = await getJson<SessionPayload>("/session", {});
    this.session = payload.session;
    return payload;
  }

  /** Wrap a panel fetch so that only the latest response resolves. */
  private async latest<T>(panel: string, run: () => Promise<T>): Promise<T | null> {
    const ticket = (this.sequence.get(panel) ?? 0) + 1;
    this.sequence.set(panel, ticket);
    const result = await run();
    return this.sequence.get(panel) === ticket ? result : null;
  }

  matrix(state: ViewState): Promise<MatrixPayload | null> {
    const params: Record<string, string> = {
      session: this.session,
      rows: state.rows,
      filter_mode: state.filterMode,
      correctness: state.correctness,
    };
    if (state.cols) params.cols = state.cols.join(",");
    return this.latest("matrix", () => getJson<MatrixPayload>("/matrix", params));
  }

  cell(
    cell: CellRef,
    representation: Representation,
  ): Promise<CellPayload | null> {
    const key = `cell:${cell.x_model}:${cell.y_model}:${cell.column}`;
    return this.latest(key, () =>
      getJson<CellPayload>("/cell", {
        session: this.session,
        x_model: cell.x_model,
        y_model: cell.y_model,
        column: cell.column,
        filter_mode: cell.filter_mode,
        correctness: cell.correctness,
        representation,
      }),
    );
  }

  createSelection(cell: CellRef, origin: SelectionOrigin): Promise<SelectionPayload> {
    return postJson<SelectionPayload>("/selection", {
      session: this.session,
      cell,
      origin,
    });
  }

  featureTable(
    selectionId: string,
    topK: number,
    sortKeys: SortKey[],
  ): Promise<FeatureTablePayload | null> {
    return this.latest("features", () =>
      getJson<FeatureTablePayload>("/features", {
        session: this.session,
        selection: selectionId,
        top_k: String(topK),
        sort_keys: sortKeys.join(","),
      }),
    );
  }
}
