import { afterEach, describe, expect, it, vi } from "vitest";

import { ApiClient, ApiError } from "../src/api.js";

function jsonResponse(body: unknown, status = 200): Response {
  return new Response(JSON.stringify(body), {
    status,
    headers: { "content-type": "application/json" },
  });
}

function mockFetch(body: unknown, status = 200) {
  const spy = vi.fn(async () => jsonResponse(body, status));
  vi.stubGlobal("fetch", spy);
  return spy;
}

afterEach(() => {
  vi.unstubAllGlobals();
});

describe("ApiClient request shapes", () => {
  it("creates sessions with a JSON body", async () => {
    const spy = mockFetch({ id: "demo" }, 201);
    const client = new ApiClient("http://host");
    await client.createSession({ id: "demo", n: 2, wrap_input: true });
    expect(spy).toHaveBeenCalledOnce();
    const [url, init] = spy.mock.calls[0] as unknown as [string, RequestInit];
    expect(url).toBe("http://host/sessions");
    expect(init.method).toBe("POST");
    expect(JSON.parse(init.body as string)).toEqual({
      id: "demo",
      n: 2,
      wrap_input: true,
    });
  });

  it("uploads examples as multipart form data", async () => {
    const spy = mockFetch({ example: { id: "e0001" } }, 201);
    const client = new ApiClient("");
    await client.uploadExampleText("demo", "grid.txt", "AB\nBA\n", {
      label: "positive",
      wrap: false,
    });
    const [url, init] = spy.mock.calls[0] as unknown as [string, RequestInit];
    expect(url).toBe("/sessions/demo/examples");
    const form = init.body as FormData;
    expect(form).toBeInstanceOf(FormData);
    expect(form.get("label")).toBe("positive");
    expect(form.get("wrap")).toBe("false");
    const file = form.get("file") as File;
    expect(file.name).toBe("grid.txt");
    expect(await file.text()).toBe("AB\nBA\n");
  });

  it("omits optional form fields that were not set", async () => {
    const spy = mockFetch({ example: { id: "e0001" } }, 201);
    await new ApiClient("").uploadExampleText("demo", "g.txt", "AB\n", {
      label: "negative",
    });
    const [, init] = spy.mock.calls[0] as unknown as [string, RequestInit];
    const form = init.body as FormData;
    expect(form.has("wrap")).toBe(false);
    expect(form.has("origin")).toBe(false);
  });

  it("sends crops as [x, y, w, h]", async () => {
    const spy = mockFetch({ example: { id: "e0002" } }, 201);
    await new ApiClient("").cropExample(
      "demo",
      "s0001",
      { x: 11, y: 0, w: 3, h: 4 },
      "negative",
    );
    const [url, init] = spy.mock.calls[0] as unknown as [string, RequestInit];
    expect(url).toBe("/sessions/demo/examples/crop");
    expect(JSON.parse(init.body as string)).toEqual({
      sample_id: "s0001",
      rect: [11, 0, 3, 4],
      label: "negative",
    });
  });

  it("addresses diffs by iteration pair", async () => {
    const spy = mockFetch({ n: 2, added: [], removed: [], a: 1, b: 2 });
    await new ApiClient("").diff("demo", 1, 2);
    const [url] = spy.mock.calls[0] as unknown as [string];
    expect(url).toBe("/sessions/demo/diff?a=1&b=2");
  });

  it("builds stable artifact URLs", () => {
    const client = new ApiClient("http://host");
    expect(client.sampleImageUrl("demo", "s0001")).toBe(
      "http://host/sessions/demo/samples/s0001.png",
    );
    expect(client.exampleImageUrl("demo", "e0001")).toBe(
      "http://host/sessions/demo/examples/e0001.png",
    );
  });
});

describe("ApiClient error mapping", () => {
  it("surfaces domain errors ({error: ...})", async () => {
    mockFetch({ error: "no trained model; retrain the session first" }, 409);
    const err = await new ApiClient("").retrain("demo").catch((e) => e);
    expect(err).toBeInstanceOf(ApiError);
    expect(err.status).toBe(409);
    expect(err.conflict).toBe(true);
    expect(err.message).toContain("retrain the session");
  });

  it("surfaces transport errors ({detail: ...})", async () => {
    mockFetch({ detail: "session is busy with another mutation" }, 409);
    const err = await new ApiClient("").retrain("demo").catch((e) => e);
    expect(err.message).toBe("session is busy with another mutation");
    expect(err.conflict).toBe(true);
  });

  it("keeps the status line when the body is not JSON", async () => {
    vi.stubGlobal(
      "fetch",
      vi.fn(async () => new Response("boom", { status: 500, statusText: "Internal Server Error" })),
    );
    const err = await new ApiClient("").listSessions().catch((e) => e);
    expect(err).toBeInstanceOf(ApiError);
    expect(err.status).toBe(500);
    expect(err.message).toContain("500");
  });

  it("maps 404 bodies through too", async () => {
    mockFetch({ error: "no iteration 9 in session history" }, 404);
    const err = await new ApiClient("").diff("demo", 1, 9).catch((e) => e);
    expect(err.status).toBe(404);
    expect(err.conflict).toBe(false);
  });
});
