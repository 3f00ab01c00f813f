/** Wire types for the gridloom HTTP API.  The UI never computes any of
 * these values itself; everything here arrives from the server. */

export type DirectionName = "right" | "down" | "left" | "up";

/** A tile is a symbol (single character) or an RGBA tuple. */
export type Tile = string | number[];

export interface PaletteJson {
  kind: "symbol" | "color";
  entries: Tile[];
}

export interface ValidityExport {
  version: number;
  strategy: string;
  n: number;
  palette: PaletteJson;
  patterns: number[][];
  triples: [number, DirectionName, number][];
}

export interface ValidityResponse {
  digest: string;
  iteration: number;
  export: ValidityExport;
}

export interface ExampleOrigin {
  kind: string;
  sample?: string;
  rect?: number[];
}

export interface ExampleInfo {
  id: string;
  label: "positive" | "negative";
  origin: ExampleOrigin;
  wrap: boolean;
  width: number;
  height: number;
}

export interface PortfolioSampleInfo {
  sid: string;
  seed: number;
  status: string;
  restarts: number;
  failing_cell: number | null;
}

export interface PortfolioInfo {
  iteration: number;
  base_seed: number;
  samples: PortfolioSampleInfo[];
}

export interface SessionState {
  id: string;
  examples: ExampleInfo[];
  training_status: "stale" | "fresh" | "training";
  iteration: number;
  revision: number;
  strategy: string;
  pattern: { n: number; wrap_input: boolean; symmetry: string[] };
  palette_kind: string;
  validity_digest: string | null;
  latest_portfolio: PortfolioInfo | null;
}

export interface AddExampleResponse {
  example: ExampleInfo;
  revision: number;
  iteration: number;
  training_status: string;
}

export interface RetrainSummary {
  iteration: number;
  revision: number;
  validity_digest: string;
  catalog_digest: string;
  patterns: number;
  valid_triples: number;
  starved: number;
  training_status: string;
}

export interface PortfolioResponse {
  revision: number;
  iteration: number;
  portfolio: PortfolioInfo;
}

export interface DiffTriple {
  a: Tile[];
  direction: DirectionName;
  b: Tile[];
}

export interface DiffPayload {
  n: number;
  added: DiffTriple[];
  removed: DiffTriple[];
  a: number;
  b: number;
}

export interface PatternGridDoc {
  version: number;
  kind: "pattern-grid";
  width: number;
  height: number;
  wrap: boolean;
  seed: number;
  cells: number[];
  catalog_digest: string;
}

export interface SolveFailureDoc {
  version: number;
  kind: "solve-failure";
  seed: number;
  status: string;
  attempts: number;
  restarts: number;
  failing_cell: number | null;
}

export type SampleDoc = PatternGridDoc | SolveFailureDoc;

/** A rectangle in tile coordinates (x, y = top-left tile; w, h in tiles). */
export interface TileRect {
  x: number;
  y: number;
  w: number;
  h: number;
}
