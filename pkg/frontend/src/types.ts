/** Wire types mirroring the /api/v1 JSON contract, field for field. */

export type Task = "classification" | "regression";
export type FilterMode = "ALL" | "UNION" | "GT";
export type CorrectnessFilter =
  | "any"
  | "both-correct"
  | "both-wrong"
  | "x-correct-y-wrong"
  | "x-wrong-y-correct";
export type CoordinateMode = "confidence" | "target-score";
export type Representation = "points" | "contours";
export type SortKey = "C" | "G" | "N";

export interface SessionPayload {
  session: string;
  task: Task;
  models: string[];
  classes: string[] | null;
  instances: number;
  features: { name: string; kind: string }[];
  coordinate_mode: CoordinateMode;
  selections: string[];
}

export interface CellRef {
  x_model: string;
  y_model: string;
  column: string;
  filter_mode: FilterMode;
  correctness: CorrectnessFilter;
}

export interface ClassificationPoint {
  instance: number;
  x: number;
  y: number;
  color: "blue" | "red";
  quadrant: 1 | 2 | 3 | 4;
}

export interface RegressionPoint {
  instance: number;
  x: number;
  y: number;
  over_x: boolean;
  over_y: boolean;
  quadrant: 1 | 2 | 3 | 4;
}

export type CellPoint = ClassificationPoint | RegressionPoint;

export interface Contour {
  color: string;
  quadrant: 1 | 2 | 3 | 4;
  polygon: [number, number][];
  member_count: number;
  degenerate: boolean;
}

export interface CellPayload {
  cell: CellRef;
  coordinate_mode: CoordinateMode;
  points?: CellPoint[];
  contours?: Contour[];
  noise?: CellPoint[];
}

export interface MatrixCellSummary {
  counts: [number, number, number, number];
  total: number;
  complementarity: number | null;
}

export interface MatrixPayload {
  rows: { x_model: string; y_model: string }[];
  cols: string[];
  filter_mode: FilterMode;
  correctness: CorrectnessFilter;
  cells: MatrixCellSummary[][];
}

export interface SelectionOrigin {
  type: "quadrant" | "lasso";
  quadrant?: number;
  polygon?: [number, number][];
}

export interface SelectionPayload {
  id: string;
  cell: CellRef | null;
  origin: SelectionOrigin | null;
  members: number[];
}

export interface FeatureRow {
  feature: string;
  cells: { c: number; g: number; n: number }[];
}

export interface FeatureTablePayload {
  selection: string;
  sort_keys: SortKey[];
  top_k: number;
  columns: string[];
  divergence: number[];
  rows: FeatureRow[];
}
