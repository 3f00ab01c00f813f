import { describe, expect, it } from "vitest";

import { DIRECTION_ARROWS, diffView, patternThumb, rowTriple } from "../src/diffview.js";
import { cssColor } from "../src/render.js";
import type { DiffPayload } from "../src/types.js";

const PAYLOAD: DiffPayload = {
  n: 2,
  a: 1,
  b: 2,
  added: [
    { a: ["A", "B", "A", "B"], direction: "down", b: ["B", "B", "B", "B"] },
  ],
  removed: [
    { a: ["A", "A", "A", "A"], direction: "left", b: ["A", "A", "A", "A"] },
    { a: ["A", "A", "A", "A"], direction: "right", b: ["A", "A", "A", "A"] },
  ],
};

describe("diffView", () => {
  it("renders one row per reported triple, in API order", () => {
    const view = diffView(PAYLOAD);
    expect(view.rows).toHaveLength(3);
    expect(view.rows.map((r) => r.kind)).toEqual(["added", "removed", "removed"]);
    expect(view.addedCount).toBe(1);
    expect(view.removedCount).toBe(2);
    expect(view.empty).toBe(false);
  });

  it("round-trips each row back to the exact API triple", () => {
    const view = diffView(PAYLOAD);
    const triples = view.rows.map(rowTriple);
    expect(triples).toEqual([...PAYLOAD.added, ...PAYLOAD.removed]);
  });

  it("pairs the thumbnails with the right direction arrow", () => {
    const view = diffView(PAYLOAD);
    expect(view.rows.map((r) => r.arrow)).toEqual(["↓", "←", "→"]);
    expect(DIRECTION_ARROWS.up).toBe("↑");
  });

  it("signs added rows + and removed rows -", () => {
    const view = diffView(PAYLOAD);
    expect(view.rows.map((r) => r.sign)).toEqual(["+", "-", "-"]);
  });

  it("reports an empty diff", () => {
    const view = diffView({ n: 2, a: 3, b: 3, added: [], removed: [] });
    expect(view.empty).toBe(true);
    expect(view.rows).toEqual([]);
  });
});

describe("patternThumb", () => {
  it("reshapes flat tiles into n rows with resolved colors", () => {
    const thumb = patternThumb(["A", "B", "B", "A"], 2);
    expect(thumb.rows).toEqual([
      ["A", "B"],
      ["B", "A"],
    ]);
    expect(thumb.colors).toEqual([
      [cssColor("A"), cssColor("B")],
      [cssColor("B"), cssColor("A")],
    ]);
  });

  it("passes RGBA tile tuples through as CSS colors", () => {
    const red = [255, 0, 0, 255];
    const blue = [0, 0, 255, 255];
    const thumb = patternThumb([red, blue, blue, red], 2);
    expect(thumb.colors[0]![0]).toBe("rgba(255, 0, 0, 1.000)");
    expect(thumb.colors[0]![1]).toBe("rgba(0, 0, 255, 1.000)");
  });

  it("rejects tile lists that are not n*n", () => {
    expect(() => patternThumb(["A", "B", "A"], 2)).toThrow(/3 tiles/);
  });
});
