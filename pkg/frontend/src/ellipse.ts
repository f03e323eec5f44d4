import { MalformedArtifact } from "./errors.js";

export interface Eigen2 {
  /** Eigenvalues, largest first. */
  values: [number, number];
  /** Unit eigenvectors, columns matching values. */
  vectors: [[number, number], [number, number]];
}

/**
 * Closed-form eigendecomposition of the symmetric matrix [[a, b], [b, c]].
 * The leading eigenvector sets the ellipse orientation.
 */
export function eigen2x2(a: number, b: number, c: number): Eigen2 {
  const mean = (a + c) / 2;
  const disc = Math.hypot((a - c) / 2, b);
  const l1 = mean + disc;
  const l2 = mean - disc;

  let v1: [number, number];
  if (b !== 0) {
    v1 = [l1 - c, b];
  } else {
    v1 = a >= c ? [1, 0] : [0, 1];
  }
  const n = Math.hypot(v1[0], v1[1]);
  v1 = [v1[0] / n, v1[1] / n];
  const v2: [number, number] = [-v1[1], v1[0]];
  return { values: [l1, l2], vectors: [v1, v2] };
}

/** Angle of the major axis in radians, in (-pi/2, pi/2]. */
export function orientation(a: number, b: number, c: number): number {
  const [vx, vy] = eigen2x2(a, b, c).vectors[0];
  let angle = Math.atan2(vy, vx);
  if (angle <= -Math.PI / 2) angle += Math.PI;
  if (angle > Math.PI / 2) angle -= Math.PI;
  return angle;
}

/**
 * Points on the nSigma-contour of a Gaussian with the given mean and
 * 2x2 covariance: mean + nSigma * (sqrt(l1) v1 cos s + sqrt(l2) v2 sin s).
 */
export function ellipsePoints(
  mean: number[],
  cov: number[][],
  nSigma = 1,
  segments = 64
): [number, number][] {
  const [a, b, c] = [cov[0][0], cov[0][1], cov[1][1]];
  if (Math.abs(cov[1][0] - b) > 1e-9 * Math.max(1, Math.abs(b))) {
    throw new MalformedArtifact("covariance is not symmetric");
  }
  const { values, vectors } = eigen2x2(a, b, c);
  const r1 = Math.sqrt(Math.max(values[0], 0)) * nSigma;
  const r2 = Math.sqrt(Math.max(values[1], 0)) * nSigma;
  const pts: [number, number][] = [];
  for (let k = 0; k <= segments; k++) {
    const s = (2 * Math.PI * k) / segments;
    const u = r1 * Math.cos(s);
    const w = r2 * Math.sin(s);
    pts.push([
      mean[0] + u * vectors[0][0] + w * vectors[1][0],
      mean[1] + u * vectors[0][1] + w * vectors[1][1],
    ]);
  }
  return pts;
}
