import { describe, expect, it } from "vitest";

import { buildChart } from "../src/chart.js";
import type { WindowPayload } from "../src/types.js";

function payload(series: Record<string, (number | null)[]>, flags?: number[]): WindowPayload {
  const n = Object.values(series)[0].length;
  return {
    start_utc: "2020-01-06T00:00:00+00:00",
    end_utc: "2020-01-07T00:00:00+00:00",
    keys: Array.from({ length: n }, (_, i) => `2020-01-06_${String(i + 1).padStart(2, "0")}`),
    series,
    flags: flags ?? Array.from({ length: n }, () => 1),
  };
}

describe("stacked geometry", () => {
  it("stacks visible columns in order", () => {
    const p = payload({ A: [10, 10], B: [20, 20] });
    const layout = buildChart(p, ["A", "B"], p.flags, new Set(), 200, 100);
    expect(layout.areas.map((a) => a.column)).toEqual(["A", "B"]);
    expect(layout.maxY).toBeGreaterThanOrEqual(30); // stack top reaches 30
  });

  it("a missing cell breaks the band instead of drawing zero", () => {
    const p = payload({ A: [5, null, 7, 8] });
    const layout = buildChart(p, ["A"], p.flags, new Set(), 200, 100);
    const subpaths = layout.areas[0].d.split("M").filter(Boolean);
    expect(subpaths.length).toBe(2); // one segment each side of the gap
  });

  it("an all-missing column draws nothing", () => {
    const p = payload({ A: [1, 2], B: [null, null] });
    const layout = buildChart(p, ["A", "B"], p.flags, new Set(), 200, 100);
    expect(layout.areas.map((a) => a.column)).toEqual(["A"]);
  });

  it("hidden columns are excluded from the stack height", () => {
    const p = payload({ A: [10, 10], B: [1000, 1000] });
    const tall = buildChart(p, ["A", "B"], p.flags, new Set(), 200, 100);
    const short = buildChart(p, ["A"], p.flags, new Set(), 200, 100);
    expect(short.maxY).toBeLessThan(tall.maxY);
  });

  it("every path coordinate is finite", () => {
    const p = payload({ A: [3, null, 9, 0, 2] });
    const layout = buildChart(p, ["A"], p.flags, new Set(), 300, 120);
    const numbers = layout.areas[0].d.match(/-?\d+(\.\d+)?/g) ?? [];
    expect(numbers.length).toBeGreaterThan(0);
    for (const value of numbers) expect(Number.isFinite(Number(value))).toBe(true);
  });
});

describe("flag bands and hit testing", () => {
  it("consecutive flag=0 rows form one band", () => {
    const p = payload({ A: [1, 1, 1, 1, 1, 1] }, [1, 0, 0, 0, 1, 1]);
    const layout = buildChart(p, ["A"], p.flags, new Set(), 200, 100);
    const flagged = layout.bands.filter((b) => b.kind === "flagged");
    expect(flagged.length).toBe(1);
    expect(flagged[0].x1).toBeGreaterThan(flagged[0].x0);
  });

  it("dirty keys get their own band kind", () => {
    const p = payload({ A: [1, 1, 1] });
    const layout = buildChart(p, ["A"], p.flags, new Set(["2020-01-06_02"]), 200, 100);
    expect(layout.bands.some((b) => b.kind === "dirty")).toBe(true);
  });

  it("keyAt inverts xFor", () => {
    const p = payload({ A: [1, 2, 3, 4, 5] });
    const layout = buildChart(p, ["A"], p.flags, new Set(), 500, 200);
    for (let i = 0; i < 5; i++) {
      expect(layout.keyAt(layout.xFor(i))).toBe(p.keys[i]);
    }
    expect(layout.keyAt(-10_000)).toBeNull();
  });

  it("day boundaries become x ticks", () => {
    const p = payload({ A: [1, 1, 1] });
    const layout = buildChart(p, ["A"], p.flags, new Set(), 200, 100);
    expect(layout.xTicks.length).toBe(1); // only period 01 in this window
    expect(layout.xTicks[0].label).toBe("01-06");
  });
});
