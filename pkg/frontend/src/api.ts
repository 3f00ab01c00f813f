/** Typed client for the gridloom HTTP API.
 *
 * Every method maps one-to-one onto a documented endpoint; the UI owns no
 * other channel to the model.  Domain errors arrive as `{"error": ...}`
 * (validation 400, state conflicts 409, unknown ids 404) and transport
 * errors as `{"detail": ...}` (busy sessions, malformed requests); both are
 * surfaced as `ApiError` with the HTTP status attached.
 */

import type {
  AddExampleResponse,
  DiffPayload,
  PortfolioResponse,
  RetrainSummary,
  SampleDoc,
  SessionState,
  TileRect,
  ValidityResponse,
} from "./types.js";

export class ApiError extends Error {
  constructor(
    readonly status: number,
    message: string,
  ) {
    super(message);
    this.name = "ApiError";
  }

  /** True for 409s: another mutation holds the session, or the model is
   * stale/untrained.  The UI retries or prompts rather than crashing. */
  get conflict(): boolean {
    return this.status === 409;
  }
}

export interface CreateSessionOptions {
  id?: string;
  n?: number;
  wrap_input?: boolean;
  symmetry?: string[];
  strategy?: string;
}

export interface UploadOptions {
  label: "positive" | "negative";
  origin?: string;
  wrap?: boolean;
}

export interface PortfolioOptions {
  count?: number;
  seed?: number;
  width?: number;
  height?: number;
  wrap?: boolean;
  max_restarts?: number;
}

async function parseError(response: Response): Promise<ApiError> {
  let message = `${response.status} ${response.statusText}`;
  try {
    const body = await response.json();
    if (typeof body?.error === "string") message = body.error;
    else if (typeof body?.detail === "string") message = body.detail;
    else if (body?.detail) message = JSON.stringify(body.detail);
  } catch {
    // non-JSON body: keep the status line
  }
  return new ApiError(response.status, message);
}

export class ApiClient {
  constructor(readonly base: string = "") {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const response = await fetch(this.base + path, init);
    if (!response.ok) throw await parseError(response);
    return (await response.json()) as T;
  }

  listSessions(): Promise<{ sessions: string[] }> {
    return this.request("/sessions");
  }

  createSession(options: CreateSessionOptions = {}): Promise<SessionState> {
    return this.request("/sessions", {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(options),
    });
  }

  sessionState(sid: string): Promise<SessionState> {
    return this.request(`/sessions/${sid}`);
  }

  /** Upload a text grid as a new example (multipart, like a file picker). */
  uploadExampleText(
    sid: string,
    filename: string,
    text: string,
    options: UploadOptions,
  ): Promise<AddExampleResponse> {
    const blob = new Blob([text], { type: "text/plain" });
    return this.uploadExampleFile(sid, blob, filename, options);
  }

  uploadExampleFile(
    sid: string,
    file: Blob,
    filename: string,
    options: UploadOptions,
  ): Promise<AddExampleResponse> {
    const form = new FormData();
    form.append("file", file, filename);
    form.append("label", options.label);
    if (options.origin !== undefined) form.append("origin", options.origin);
    if (options.wrap !== undefined) form.append("wrap", String(options.wrap));
    return this.request(`/sessions/${sid}/examples`, {
      method: "POST",
      body: form,
    });
  }

  deleteExample(sid: string, eid: string): Promise<SessionState> {
    return this.request(`/sessions/${sid}/examples/${eid}`, {
      method: "DELETE",
    });
  }

  exampleImageUrl(sid: string, eid: string): string {
    return `${this.base}/sessions/${sid}/examples/${eid}.png`;
  }

  cropExample(
    sid: string,
    sampleId: string,
    rect: TileRect,
    label: "positive" | "negative",
  ): Promise<AddExampleResponse> {
    return this.request(`/sessions/${sid}/examples/crop`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({
        sample_id: sampleId,
        rect: [rect.x, rect.y, rect.w, rect.h],
        label,
      }),
    });
  }

  retrain(sid: string): Promise<RetrainSummary> {
    return this.request(`/sessions/${sid}/retrain`, { method: "POST" });
  }

  validity(sid: string): Promise<ValidityResponse> {
    return this.request(`/sessions/${sid}/validity`);
  }

  generatePortfolio(
    sid: string,
    options: PortfolioOptions = {},
  ): Promise<PortfolioResponse> {
    return this.request(`/sessions/${sid}/portfolio`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(options),
    });
  }

  async sampleText(sid: string, sampleId: string): Promise<string> {
    const response = await fetch(
      `${this.base}/sessions/${sid}/samples/${sampleId}.txt`,
    );
    if (!response.ok) throw await parseError(response);
    return response.text();
  }

  sampleDoc(sid: string, sampleId: string): Promise<SampleDoc> {
    return this.request(`/sessions/${sid}/samples/${sampleId}.json`);
  }

  sampleImageUrl(sid: string, sampleId: string): string {
    return `${this.base}/sessions/${sid}/samples/${sampleId}.png`;
  }

  diff(sid: string, a: number, b: number): Promise<DiffPayload> {
    return this.request(`/sessions/${sid}/diff?a=${a}&b=${b}`);
  }
}
