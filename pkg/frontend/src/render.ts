/** Presentation helpers for tiles and fetched grids.
 *
 * Symbol tiles get a deterministic color (stable across reloads and
 * sessions) so text grids read as textures; color tiles pass through as
 * CSS colors.  This is display plumbing only — grids and patterns arrive
 * fully formed from the server.
 */

import type { Tile } from "./types.js";

/** Deterministic CSS color for a tile.  RGBA tuples map directly; symbols
 * hash to a hue so the same character always gets the same color. */
export function cssColor(tile: Tile): string {
  if (Array.isArray(tile)) {
    const [r = 0, g = 0, b = 0, a = 255] = tile;
    return `rgba(${r}, ${g}, ${b}, ${(a / 255).toFixed(3)})`;
  }
  let hash = 0;
  for (let i = 0; i < tile.length; i++) {
    hash = (hash * 31 + tile.charCodeAt(i)) >>> 0;
  }
  const hue = (hash * 47) % 360;
  return `hsl(${hue}, 65%, 55%)`;
}

export interface TextGrid {
  width: number;
  height: number;
  rows: string[];
}

/** Parse a sample/example text grid (one row per line). */
export function parseTextGrid(text: string): TextGrid {
  const rows = text.replace(/\n+$/, "").split("\n");
  const width = rows[0]?.length ?? 0;
  for (const row of rows) {
    if (row.length !== width) {
      throw new Error("ragged text grid: rows have different lengths");
    }
  }
  return { width, height: rows.length, rows };
}

/** Reshape a flat pattern tile list into n rows of n tiles. */
export function tileRows(tiles: Tile[], n: number): Tile[][] {
  if (tiles.length !== n * n) {
    throw new Error(`pattern has ${tiles.length} tiles, expected ${n * n}`);
  }
  const rows: Tile[][] = [];
  for (let y = 0; y < n; y++) {
    rows.push(tiles.slice(y * n, (y + 1) * n));
  }
  return rows;
}

/** Paint a text grid onto a canvas at 1px per tile; the element is scaled
 * up by an integer factor with image-rendering: pixelated, so tiles stay
 * crisp at any zoom. */
export function paintTextGrid(canvas: HTMLCanvasElement, grid: TextGrid): void {
  canvas.width = grid.width;
  canvas.height = grid.height;
  const ctx = canvas.getContext("2d");
  if (!ctx) return;
  for (let y = 0; y < grid.height; y++) {
    const row = grid.rows[y] ?? "";
    for (let x = 0; x < grid.width; x++) {
      ctx.fillStyle = cssColor(row[x] ?? " ");
      ctx.fillRect(x, y, 1, 1);
    }
  }
}
