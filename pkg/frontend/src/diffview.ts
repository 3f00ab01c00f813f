/** Rule diff view-model.
 *
 * The API's diff between two iterations lists added and removed adjacency
 * triples with pattern tile content inline.  The view renders each triple
 * as a pair of pattern thumbnails joined by a direction arrow, preserving
 * the API's order and content exactly — one row per reported triple,
 * nothing merged, nothing dropped.
 */

import { cssColor, tileRows } from "./render.js";
import type { DiffPayload, DiffTriple, DirectionName, Tile } from "./types.js";

export const DIRECTION_ARROWS: Record<DirectionName, string> = {
  right: "→",
  down: "↓",
  left: "←",
  up: "↑",
};

export interface PatternThumb {
  n: number;
  rows: Tile[][];
  /** CSS color per tile, same shape as rows. */
  colors: string[][];
}

export interface DiffRow {
  kind: "added" | "removed";
  sign: "+" | "-";
  a: PatternThumb;
  direction: DirectionName;
  arrow: string;
  b: PatternThumb;
}

export interface DiffViewModel {
  a: number;
  b: number;
  n: number;
  rows: DiffRow[];
  addedCount: number;
  removedCount: number;
  empty: boolean;
}

export function patternThumb(tiles: Tile[], n: number): PatternThumb {
  const rows = tileRows(tiles, n);
  return { n, rows, colors: rows.map((row) => row.map(cssColor)) };
}

function row(kind: "added" | "removed", triple: DiffTriple, n: number): DiffRow {
  return {
    kind,
    sign: kind === "added" ? "+" : "-",
    a: patternThumb(triple.a, n),
    direction: triple.direction,
    arrow: DIRECTION_ARROWS[triple.direction],
    b: patternThumb(triple.b, n),
  };
}

export function diffView(payload: DiffPayload): DiffViewModel {
  const rows = [
    ...payload.added.map((t) => row("added", t, payload.n)),
    ...payload.removed.map((t) => row("removed", t, payload.n)),
  ];
  return {
    a: payload.a,
    b: payload.b,
    n: payload.n,
    rows,
    addedCount: payload.added.length,
    removedCount: payload.removed.length,
    empty: rows.length === 0,
  };
}

/** Flatten a view row back to the API triple shape (used by tests to prove
 * the view is a faithful rendering of the payload). */
export function rowTriple(r: DiffRow): DiffTriple {
  return {
    a: r.a.rows.flat(),
    direction: r.direction,
    b: r.b.rows.flat(),
  };
}
