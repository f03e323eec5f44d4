import { parseNumericCsv } from "./csv.js";
import { MalformedArtifact } from "./errors.js";

/** Log-density surface sampled on a rectangular grid, values[ix][iy]. */
export interface DensityGrid {
  xs: number[];
  ys: number[];
  values: number[][];
}

export function parseGrid(text: string): DensityGrid {
  const table = parseNumericCsv(text);
  const [cx, cy, cv] = ["x1", "x2", "log_density"].map((name) => {
    const idx = table.header.indexOf(name);
    if (idx < 0) throw new MalformedArtifact(`grid file missing column ${name}`);
    return idx;
  });

  const xs = [...new Set(table.rows.map((r) => r[cx]))].sort((a, b) => a - b);
  const ys = [...new Set(table.rows.map((r) => r[cy]))].sort((a, b) => a - b);
  if (xs.length * ys.length !== table.rows.length) {
    throw new MalformedArtifact(
      `grid is not rectangular: ${xs.length} x ${ys.length} axes vs ${table.rows.length} rows`
    );
  }

  const xIndex = new Map(xs.map((v, i) => [v, i]));
  const yIndex = new Map(ys.map((v, i) => [v, i]));
  const values: number[][] = Array.from({ length: xs.length }, () =>
    new Array(ys.length).fill(Number.NaN)
  );
  for (const row of table.rows) {
    values[xIndex.get(row[cx])!][yIndex.get(row[cy])!] = row[cv];
  }
  return { xs, ys, values };
}

export function gridMax(grid: DensityGrid): number {
  let best = -Infinity;
  for (const col of grid.values) {
    for (const v of col) if (v > best) best = v;
  }
  return best;
}
