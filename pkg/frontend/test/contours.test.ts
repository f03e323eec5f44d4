import { describe, expect, it } from "vitest";

import { contourSegments, defaultLevels } from "../src/contours.js";
import type { DensityGrid } from "../src/grid.js";

function radialGrid(n: number, extent: number): DensityGrid {
  const axis = Array.from({ length: n }, (_, i) => -extent + (2 * extent * i) / (n - 1));
  const values = axis.map((x) => axis.map((y) => -(x * x + y * y)));
  return { xs: axis, ys: axis, values };
}

describe("contourSegments", () => {
  it("traces the unit circle of a radial field", () => {
    const grid = radialGrid(81, 2);
    const segs = contourSegments(grid, -1);
    expect(segs.length).toBeGreaterThan(100);
    for (const [p, q] of segs) {
      expect(Math.hypot(p[0], p[1])).toBeCloseTo(1, 2);
      expect(Math.hypot(q[0], q[1])).toBeCloseTo(1, 2);
    }
  });

  it("returns nothing when the level misses the data range", () => {
    const grid = radialGrid(21, 2);
    expect(contourSegments(grid, 1)).toEqual([]);
    expect(contourSegments(grid, -100)).toEqual([]);
  });

  it("total contour length approximates the circle circumference", () => {
    const grid = radialGrid(161, 2);
    const segs = contourSegments(grid, -1);
    const length = segs.reduce((acc, [p, q]) => acc + Math.hypot(q[0] - p[0], q[1] - p[1]), 0);
    expect(length).toBeCloseTo(2 * Math.PI, 1);
  });
});

describe("defaultLevels", () => {
  it("sits strictly below the grid maximum", () => {
    const grid = radialGrid(21, 2);
    for (const level of defaultLevels(grid)) {
      expect(level).toBeLessThan(0); // peak of -(x^2+y^2) is 0
      expect(level).toBeGreaterThan(-9);
    }
  });
});
