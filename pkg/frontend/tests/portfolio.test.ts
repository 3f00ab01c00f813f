import { describe, expect, it } from "vitest";

import { failureBadge, portfolioGrid } from "../src/portfolio.js";
import type { PortfolioInfo } from "../src/types.js";

const INFO: PortfolioInfo = {
  iteration: 3,
  base_seed: 99,
  samples: [
    { sid: "s0001", seed: 111, status: "solved", restarts: 0, failing_cell: null },
    { sid: "s0002", seed: 222, status: "solved", restarts: 2, failing_cell: null },
    { sid: "s0003", seed: 333, status: "contradiction", restarts: 4, failing_cell: 17 },
  ],
};

describe("portfolioGrid", () => {
  it("shows every sample, failures included", () => {
    const model = portfolioGrid(INFO);
    expect(model.tiles).toHaveLength(3);
    expect(model.tiles.map((t) => t.sid)).toEqual(["s0001", "s0002", "s0003"]);
  });

  it("keeps seeds visible on all tiles", () => {
    const model = portfolioGrid(INFO);
    expect(model.tiles.map((t) => t.seed)).toEqual([111, 222, 333]);
  });

  it("carries restart stats on failure tiles", () => {
    const model = portfolioGrid(INFO);
    const failure = model.tiles[2];
    expect(failure).toMatchObject({
      kind: "failure",
      status: "contradiction",
      restarts: 4,
      failing_cell: 17,
    });
  });

  it("summarizes solved/failed counts", () => {
    const model = portfolioGrid(INFO);
    expect(model.solved).toBe(2);
    expect(model.failed).toBe(1);
    expect(model.summary).toContain("2 solved");
    expect(model.summary).toContain("1 failed");
  });

  it("omits the failure note when everything solved", () => {
    const model = portfolioGrid({
      ...INFO,
      samples: INFO.samples.slice(0, 2),
    });
    expect(model.summary).toBe("2 solved");
  });
});

describe("failureBadge", () => {
  it("describes the failure with restart stats", () => {
    const model = portfolioGrid(INFO);
    expect(failureBadge(model.tiles[2]!)).toBe(
      "contradiction at cell 17 after 4 restarts",
    );
  });

  it("handles a missing failing cell and singular restarts", () => {
    const model = portfolioGrid({
      ...INFO,
      samples: [
        {
          sid: "s9",
          seed: 1,
          status: "contradiction",
          restarts: 1,
          failing_cell: null,
        },
      ],
    });
    expect(failureBadge(model.tiles[0]!)).toBe("contradiction after 1 restart");
  });

  it("is empty for solved tiles", () => {
    const model = portfolioGrid(INFO);
    expect(failureBadge(model.tiles[0]!)).toBe("");
  });
});
