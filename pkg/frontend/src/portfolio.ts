/** Portfolio grid view-model.
 *
 * Every sample of the latest portfolio appears — contradictions included,
 * with their restart stats, because failures are exactly what the teacher
 * needs to see.  Solved samples carry their seed so a result can be quoted
 * and reproduced.
 */

import type { PortfolioInfo, PortfolioSampleInfo } from "./types.js";

export type PortfolioTile =
  | { kind: "sample"; sid: string; seed: number; status: "solved" }
  | {
      kind: "failure";
      sid: string;
      seed: number;
      status: string;
      restarts: number;
      failing_cell: number | null;
    };

export interface PortfolioGridModel {
  iteration: number;
  base_seed: number;
  tiles: PortfolioTile[];
  solved: number;
  failed: number;
  summary: string;
}

function tileFor(sample: PortfolioSampleInfo): PortfolioTile {
  if (sample.status === "solved") {
    return {
      kind: "sample",
      sid: sample.sid,
      seed: sample.seed,
      status: "solved",
    };
  }
  return {
    kind: "failure",
    sid: sample.sid,
    seed: sample.seed,
    status: sample.status,
    restarts: sample.restarts,
    failing_cell: sample.failing_cell,
  };
}

export function portfolioGrid(info: PortfolioInfo): PortfolioGridModel {
  const tiles = info.samples.map(tileFor);
  const solved = tiles.filter((t) => t.kind === "sample").length;
  const failed = tiles.length - solved;
  const summary =
    failed === 0
      ? `${solved} solved`
      : `${solved} solved, ${failed} failed (iteration ${info.iteration})`;
  return {
    iteration: info.iteration,
    base_seed: info.base_seed,
    tiles,
    solved,
    failed,
    summary,
  };
}

/** One-line badge text for a failed solve: status plus restart stats. */
export function failureBadge(tile: PortfolioTile): string {
  if (tile.kind !== "failure") return "";
  const cell =
    tile.failing_cell === null ? "" : ` at cell ${tile.failing_cell}`;
  return `${tile.status}${cell} after ${tile.restarts} restart${
    tile.restarts === 1 ? "" : "s"
  }`;
}
