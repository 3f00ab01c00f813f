/** Tile-snapped selection geometry.
 *
 * The crop overlay works in two coordinate spaces: screen pixels (pointer
 * events over the zoomed sample) and tile coordinates (what the crop
 * endpoint accepts).  Every rectangle that leaves this module is snapped to
 * whole tiles — a drag that touches any part of a tile selects all of it —
 * and clamped to the sample bounds, so the server only ever sees rectangles
 * that align with the tile lattice.
 */

import type { TileRect } from "./types.js";

export interface PixelPoint {
  x: number;
  y: number;
}

/** Order a free-form drag (any direction) into left/top/right/bottom. */
export function normalizeDrag(a: PixelPoint, b: PixelPoint) {
  return {
    left: Math.min(a.x, b.x),
    top: Math.min(a.y, b.y),
    right: Math.max(a.x, b.x),
    bottom: Math.max(a.y, b.y),
  };
}

/** Clamp a rect's edges to the grid; tiles the original rect never covered
 * are never introduced, so a rect wholly outside collapses to zero area. */
export function clampRect(rect: TileRect, gridW: number, gridH: number): TileRect {
  const x0 = Math.max(0, Math.min(rect.x, gridW));
  const y0 = Math.max(0, Math.min(rect.y, gridH));
  const x1 = Math.max(x0, Math.min(rect.x + rect.w, gridW));
  const y1 = Math.max(y0, Math.min(rect.y + rect.h, gridH));
  return { x: x0, y: y0, w: x1 - x0, h: y1 - y0 };
}

/** Snap a pixel-space drag to the tile lattice.
 *
 * Start edges floor, end edges ceil: touching a tile selects it whole.
 * Returns null for degenerate drags (zero tiles after snapping) so callers
 * can treat a stray click as "no selection" rather than a 0-area request.
 */
export function snapDragToTiles(
  a: PixelPoint,
  b: PixelPoint,
  zoom: number,
  gridW: number,
  gridH: number,
): TileRect | null {
  if (zoom < 1) throw new Error(`zoom must be a positive integer, got ${zoom}`);
  const drag = normalizeDrag(a, b);
  const x0 = Math.floor(drag.left / zoom);
  const y0 = Math.floor(drag.top / zoom);
  const x1 = Math.ceil(drag.right / zoom);
  const y1 = Math.ceil(drag.bottom / zoom);
  const rect = clampRect({ x: x0, y: y0, w: x1 - x0, h: y1 - y0 }, gridW, gridH);
  if (rect.w === 0 || rect.h === 0) return null;
  return rect;
}

/** Tile rect back to overlay pixels at the current zoom. */
export function rectToPixels(rect: TileRect, zoom: number) {
  return {
    left: rect.x * zoom,
    top: rect.y * zoom,
    width: rect.w * zoom,
    height: rect.h * zoom,
  };
}

/** Why a selection cannot be submitted as a counter-example, or null if it
 * can.  A counter-example must contain at least one window pair: its sorted
 * dimensions need lo >= n and hi >= n + 1.  Checked before any request is
 * sent, so undersized selections never reach the server. */
export function negativeSizeIssue(rect: TileRect, n: number): string | null {
  const [lo, hi] = rect.w <= rect.h ? [rect.w, rect.h] : [rect.h, rect.w];
  if (lo < n || hi < n + 1) {
    return (
      `selection is ${rect.w}×${rect.h} tiles; a counter-example needs ` +
      `at least ${n}×${n + 1} (or ${n + 1}×${n})`
    );
  }
  return null;
}

/** Why a selection cannot be submitted as a positive example, or null. */
export function positiveSizeIssue(rect: TileRect, n: number): string | null {
  if (rect.w < n || rect.h < n) {
    return (
      `selection is ${rect.w}×${rect.h} tiles; a positive example ` +
      `needs at least ${n}×${n}`
    );
  }
  return null;
}

export function sizeIssue(
  rect: TileRect,
  n: number,
  label: "positive" | "negative",
): string | null {
  return label === "negative"
    ? negativeSizeIssue(rect, n)
    : positiveSizeIssue(rect, n);
}

/** True when the selection covers the whole sample (used to offer
 * "adopt this sample as a positive example"). */
export function isFullSample(rect: TileRect, gridW: number, gridH: number): boolean {
  return rect.x === 0 && rect.y === 0 && rect.w === gridW && rect.h === gridH;
}

/** Largest integer zoom that fits the grid in the available pixels.
 * Integer-only so nearest-neighbor upscaling never blurs tile edges. */
export function chooseZoom(
  availablePx: number,
  gridTiles: number,
  maxZoom = 24,
): number {
  const fit = Math.floor(availablePx / Math.max(1, gridTiles));
  return Math.max(1, Math.min(maxZoom, fit));
}
