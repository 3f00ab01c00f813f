/** Teaching-loop orchestration.
 *
 * These functions are the only way the UI mutates a session, and they all
 * follow the same contract: validate locally where the rules are known
 * (selection sizes), send the request, and return state taken verbatim
 * from the server's response.  Nothing is updated optimistically — the
 * iteration and revision counters the UI displays are always the server's.
 */

import type { ApiClient } from "./api.js";
import { diffView, type DiffViewModel } from "./diffview.js";
import {
  recordIteration,
  type IterationEntry,
} from "./history.js";
import { isFullSample, sizeIssue } from "./rect.js";
import type {
  ExampleInfo,
  PortfolioResponse,
  RetrainSummary,
  SessionState,
  TileRect,
} from "./types.js";

export interface CropOutcome {
  /** False when client-side validation rejected the selection; no request
   * was sent and `error` explains why (shown inline at the rectangle). */
  sent: boolean;
  error?: string;
  example?: ExampleInfo;
  state?: SessionState;
}

/** Submit a tile-snapped selection as a new example.
 *
 * Undersized selections are rejected locally — the request is never sent —
 * so the inline error appears with no round trip.  On success the returned
 * state is refetched from the server (the example list, revision, and
 * training status shown afterwards are all the server's own).
 */
export async function submitCropSelection(
  client: ApiClient,
  sid: string,
  sampleId: string,
  rect: TileRect,
  n: number,
  label: "positive" | "negative" = "negative",
): Promise<CropOutcome> {
  const issue = sizeIssue(rect, n, label);
  if (issue !== null) {
    return { sent: false, error: issue };
  }
  const response = await client.cropExample(sid, sampleId, rect, label);
  const state = await client.sessionState(sid);
  return { sent: true, example: response.example, state };
}

/** Adopt a whole sample as a positive example (the full-sample selection
 * shortcut).  The rect must cover the sample exactly. */
export async function adoptSample(
  client: ApiClient,
  sid: string,
  sampleId: string,
  rect: TileRect,
  gridW: number,
  gridH: number,
): Promise<CropOutcome> {
  if (!isFullSample(rect, gridW, gridH)) {
    return {
      sent: false,
      error: "adopting a sample requires selecting all of it",
    };
  }
  const response = await client.cropExample(sid, sampleId, rect, "positive");
  const state = await client.sessionState(sid);
  return { sent: true, example: response.example, state };
}

export interface RetrainOutcome {
  summary: RetrainSummary;
  history: IterationEntry[];
}

/** Retrain and append the server-reported iteration to the history strip.
 * The strip only ever grows from retrain responses, never from local
 * guesses about what the next iteration number will be. */
export async function retrainAndRecord(
  client: ApiClient,
  sid: string,
  history: IterationEntry[],
): Promise<RetrainOutcome> {
  const summary = await client.retrain(sid);
  return {
    summary,
    history: recordIteration(history, {
      iteration: summary.iteration,
      validity_digest: summary.validity_digest,
    }),
  };
}

export async function generatePortfolio(
  client: ApiClient,
  sid: string,
  options: Parameters<ApiClient["generatePortfolio"]>[1] = {},
): Promise<PortfolioResponse> {
  return client.generatePortfolio(sid, options);
}

export async function loadDiff(
  client: ApiClient,
  sid: string,
  a: number,
  b: number,
): Promise<DiffViewModel> {
  return diffView(await client.diff(sid, a, b));
}
