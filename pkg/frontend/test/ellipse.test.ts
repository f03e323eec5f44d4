import { describe, expect, it } from "vitest";

import { eigen2x2, ellipsePoints, orientation } from "../src/ellipse.js";

const ROT30 = Math.PI / 6;

describe("eigen2x2", () => {
  it("diagonal case: eigenvalues are the diagonal, major axis along x", () => {
    const { values, vectors } = eigen2x2(4, 0, 1);
    expect(values[0]).toBeCloseTo(4, 12);
    expect(values[1]).toBeCloseTo(1, 12);
    expect(Math.abs(vectors[0][0])).toBeCloseTo(1, 12);
    expect(vectors[0][1]).toBeCloseTo(0, 12);
  });

  it("diagonal case with the large eigenvalue second", () => {
    const { values, vectors } = eigen2x2(1, 0, 9);
    expect(values[0]).toBeCloseTo(9, 12);
    expect(vectors[0][0]).toBeCloseTo(0, 12);
    expect(Math.abs(vectors[0][1])).toBeCloseTo(1, 12);
  });

  it("recovers a known rotation", () => {
    // R(30deg) diag(9,1) R(30deg)^T
    const a = 9 * Math.cos(ROT30) ** 2 + Math.sin(ROT30) ** 2;
    const b = (9 - 1) * Math.sin(ROT30) * Math.cos(ROT30);
    const c = 9 * Math.sin(ROT30) ** 2 + Math.cos(ROT30) ** 2;
    const { values } = eigen2x2(a, b, c);
    expect(values[0]).toBeCloseTo(9, 10);
    expect(values[1]).toBeCloseTo(1, 10);
    expect(orientation(a, b, c)).toBeCloseTo(ROT30, 10);
  });

  it("eigenvectors are orthonormal", () => {
    const { vectors } = eigen2x2(2.0, 0.7, 1.1);
    const [v1, v2] = vectors;
    expect(v1[0] * v2[0] + v1[1] * v2[1]).toBeCloseTo(0, 12);
    expect(Math.hypot(v1[0], v1[1])).toBeCloseTo(1, 12);
    expect(Math.hypot(v2[0], v2[1])).toBeCloseTo(1, 12);
  });
});

describe("orientation", () => {
  it("is zero for an x-elongated diagonal covariance", () => {
    expect(orientation(4, 0, 1)).toBe(0);
  });

  it("is pi/2 for a y-elongated diagonal covariance", () => {
    expect(Math.abs(orientation(1, 0, 9))).toBeCloseTo(Math.PI / 2, 12);
  });

  it("flips sign with the off-diagonal", () => {
    expect(orientation(3, -1, 1)).toBeCloseTo(-orientation(3, 1, 1), 12);
  });
});

describe("ellipsePoints", () => {
  it("identity covariance gives the unit circle", () => {
    const pts = ellipsePoints([0, 0], [[1, 0], [0, 1]], 1, 32);
    for (const [x, y] of pts) {
      expect(Math.hypot(x, y)).toBeCloseTo(1, 12);
    }
  });

  it("points lie on the 1-sigma quadratic-form contour", () => {
    const cov = [
      [2.0, 0.7],
      [0.7, 1.1],
    ];
    const det = cov[0][0] * cov[1][1] - cov[0][1] * cov[1][0];
    const inv = [
      [cov[1][1] / det, -cov[0][1] / det],
      [-cov[1][0] / det, cov[0][0] / det],
    ];
    const mean = [3, -2];
    for (const [x, y] of ellipsePoints(mean, cov, 1, 48)) {
      const dx = x - mean[0];
      const dy = y - mean[1];
      const q = dx * (inv[0][0] * dx + inv[0][1] * dy) + dy * (inv[1][0] * dx + inv[1][1] * dy);
      expect(q).toBeCloseTo(1, 9);
    }
  });

  it("scales with nSigma", () => {
    const pts = ellipsePoints([0, 0], [[1, 0], [0, 1]], 2.5, 16);
    for (const [x, y] of pts) {
      expect(Math.hypot(x, y)).toBeCloseTo(2.5, 12);
    }
  });
});
