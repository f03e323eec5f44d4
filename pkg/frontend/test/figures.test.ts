import { readFileSync } from "fs";
import { describe, expect, it } from "vitest";

import { plotBank } from "../src/bank.js";
import { curveFromSweep, plotCurve } from "../src/curve.js";
import { EmptyTable, IterationOutOfRange, MalformedArtifact, NonPlanarTrace } from "../src/errors.js";
import { parseGrid } from "../src/grid.js";
import { parseTrace } from "../src/trace.js";

const trace = parseTrace(
  readFileSync(new URL("../fixtures/toy/trace_0.csv", import.meta.url), "utf-8")
);
const grid = parseGrid(
  readFileSync(new URL("../fixtures/toy/grid.csv", import.meta.url), "utf-8")
);
const sweep = JSON.parse(
  readFileSync(new URL("../fixtures/banana/sweep_summary.json", import.meta.url), "utf-8")
);

function count(haystack: string, needle: string): number {
  return haystack.split(needle).length - 1;
}

describe("plotBank", () => {
  it("draws one dot and one ellipse per proposal", () => {
    const svg = plotBank(trace, grid, 20);
    expect(svg.startsWith("<svg")).toBe(true);
    expect(count(svg, 'class="mean"')).toBe(50);
    expect(count(svg, 'class="ellipse"')).toBe(50);
    expect(count(svg, 'class="contour"')).toBeGreaterThan(0);
  });

  it("final-iteration means sit on the two modes", () => {
    const bank = trace.frames.get(20)!;
    const modes = [
      [-5, -5],
      [6, 4],
    ];
    for (const mu of bank.means) {
      const nearest = Math.min(
        ...modes.map((m) => Math.hypot(mu[0] - m[0], mu[1] - m[1]))
      );
      expect(nearest).toBeLessThan(1.0);
    }
  });

  it("rejects an iteration beyond the trace", () => {
    expect(() => plotBank(trace, grid, 99)).toThrow(IterationOutOfRange);
  });

  it("rejects non-planar traces", () => {
    const t3 = parseTrace("t,n,mu1,mu2,mu3,s11,s12,s13,s22,s23,s33\n1,0,0,0,0,1,0,0,1,0,1\n");
    expect(() => plotBank(t3, grid, 1)).toThrow(NonPlanarTrace);
  });

  it("identity covariance renders as a unit circle in data coordinates", () => {
    // Second proposal at (1,1) pins the pixels-per-data-unit mapping on
    // both axes, so the first ellipse can be checked in data space.
    const two = parseTrace(
      "t,n,mu1,mu2,s11,s12,s22\n1,0,0,0,1,0,1\n1,1,1,1,1,0,1\n"
    );
    const flat = {
      xs: [-2, 0, 2],
      ys: [-2, 0, 2],
      values: [
        [-4, -2, -4],
        [-2, 0, -2],
        [-4, -2, -4],
      ],
    };
    const svg = plotBank(two, flat, 1);
    const dots = [...svg.matchAll(/class="mean" cx="([-\d.]+)" cy="([-\d.]+)"/g)].map((m) => [
      Number(m[1]),
      Number(m[2]),
    ]);
    expect(dots.length).toBe(2);
    const [x0, y0] = dots[0];
    const pxPerX = dots[1][0] - x0; // 1 data unit in x
    const pxPerY = dots[1][1] - y0; // 1 data unit in y (negative: y grows downward)
    const match = svg.match(/class="ellipse"[^/]*points="([^"]+)"/);
    expect(match).not.toBeNull();
    const pts = match![1].split(" ").map((p) => p.split(",").map(Number));
    for (const [px, py] of pts) {
      const dx = (px - x0) / pxPerX;
      const dy = (py - y0) / pxPerY;
      expect(Math.hypot(dx, dy)).toBeCloseTo(1, 2);
    }
  });
});

describe("plotCurve", () => {
  it("renders the committed dimension sweep", () => {
    const table = curveFromSweep(sweep, "dimension");
    expect(table.xs).toEqual([2, 3, 5]);
    const svg = plotCurve([table], { logY: true, xLabel: "dimension" });
    expect(svg.startsWith("<svg")).toBe(true);
    expect(count(svg, 'class="curve"')).toBe(1);
  });

  it("draws one line per table", () => {
    const a = { label: "a", xs: [1, 2, 3], ys: [3, 2, 1] };
    const b = { label: "b", xs: [1, 2, 3], ys: [1, 2, 3] };
    const svg = plotCurve([a, b]);
    expect(count(svg, 'class="curve"')).toBe(2);
  });

  it("requires at least one table and two points", () => {
    expect(() => plotCurve([])).toThrow(EmptyTable);
    expect(() => plotCurve([{ label: "x", xs: [1], ys: [1] }])).toThrow(EmptyTable);
  });

  it("rejects mismatched x/y lengths", () => {
    expect(() => plotCurve([{ label: "x", xs: [1, 2, 3], ys: [1, 2] }])).toThrow(
      MalformedArtifact
    );
  });

  it("rejects log scale with non-positive values", () => {
    expect(() =>
      plotCurve([{ label: "x", xs: [1, 2], ys: [0, 1] }], { logY: true })
    ).toThrow(MalformedArtifact);
  });

  it("sorts points by x before drawing", () => {
    const svg = plotCurve([{ label: "x", xs: [3, 1, 2], ys: [9, 1, 4] }]);
    const match = svg.match(/class="curve"[^/]*points="([^"]+)"/);
    const pxs = match![1].split(" ").map((p) => Number(p.split(",")[0]));
    expect(pxs[0]).toBeLessThan(pxs[1]);
    expect(pxs[1]).toBeLessThan(pxs[2]);
  });
});

describe("curveFromSweep", () => {
  it("refuses an axis the summary does not sweep", () => {
    expect(() => curveFromSweep(sweep, "iterations")).toThrow(MalformedArtifact);
  });

  it("refuses rows without numbers", () => {
    expect(() =>
      curveFromSweep({ name: "x", axis: "dimension", rows: [{ value: 1 }] }, "dimension")
    ).toThrow(MalformedArtifact);
  });

  it("refuses an empty sweep", () => {
    expect(() => curveFromSweep({ name: "x", axis: "dimension", rows: [] }, "dimension")).toThrow(
      EmptyTable
    );
  });
});
