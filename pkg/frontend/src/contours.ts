import type { DensityGrid } from "./grid.js";
import { gridMax } from "./grid.js";

export type Segment = [[number, number], [number, number]];

type Edge = "B" | "R" | "T" | "L";

const CASES: Record<number, [Edge, Edge][]> = {
  1: [["L", "B"]],
  2: [["B", "R"]],
  3: [["L", "R"]],
  4: [["T", "R"]],
  6: [["B", "T"]],
  7: [["L", "T"]],
  8: [["L", "T"]],
  9: [["B", "T"]],
  11: [["T", "R"]],
  12: [["L", "R"]],
  13: [["B", "R"]],
  14: [["L", "B"]],
};

/**
 * Marching squares: line segments of the level set values = level.
 * Saddle cells (cases 5 and 10) are split by the cell-center average.
 */
export function contourSegments(grid: DensityGrid, level: number): Segment[] {
  const { xs, ys, values } = grid;
  const segments: Segment[] = [];

  for (let i = 0; i + 1 < xs.length; i++) {
    for (let j = 0; j + 1 < ys.length; j++) {
      const v00 = values[i][j];
      const v10 = values[i + 1][j];
      const v11 = values[i + 1][j + 1];
      const v01 = values[i][j + 1];
      if (![v00, v10, v11, v01].every(Number.isFinite)) continue;

      let idx = 0;
      if (v00 >= level) idx |= 1;
      if (v10 >= level) idx |= 2;
      if (v11 >= level) idx |= 4;
      if (v01 >= level) idx |= 8;
      if (idx === 0 || idx === 15) continue;

      const x0 = xs[i], x1 = xs[i + 1];
      const y0 = ys[j], y1 = ys[j + 1];
      const lerp = (p: number, q: number, vp: number, vq: number) =>
        p + ((level - vp) / (vq - vp)) * (q - p);
      const onEdge = (e: Edge): [number, number] => {
        switch (e) {
          case "B": return [lerp(x0, x1, v00, v10), y0];
          case "R": return [x1, lerp(y0, y1, v10, v11)];
          case "T": return [lerp(x0, x1, v01, v11), y1];
          case "L": return [x0, lerp(y0, y1, v00, v01)];
        }
      };

      let pairs: [Edge, Edge][];
      if (idx === 5 || idx === 10) {
        const center = (v00 + v10 + v11 + v01) / 4;
        const high = center >= level;
        if (idx === 5) {
          pairs = high ? [["L", "T"], ["B", "R"]] : [["L", "B"], ["T", "R"]];
        } else {
          pairs = high ? [["L", "B"], ["T", "R"]] : [["L", "T"], ["B", "R"]];
        }
      } else {
        pairs = CASES[idx];
      }
      for (const [e1, e2] of pairs) {
        segments.push([onEdge(e1), onEdge(e2)]);
      }
    }
  }
  return segments;
}

/** Contour levels for a log-density surface: fixed drops below the peak. */
export function defaultLevels(grid: DensityGrid): number[] {
  const top = gridMax(grid);
  return [-0.5, -1, -2, -3, -5, -8].map((d) => top + d);
}
