import { parseNumericCsv } from "./csv.js";
import { IterationOutOfRange, MalformedArtifact, NonPlanarTrace } from "./errors.js";

/** One iteration's proposal bank: means and full covariances. */
export interface TraceFrame {
  t: number;
  means: number[][];
  covariances: number[][][];
}

export interface Trace {
  dim: number;
  iterations: number[];
  frames: Map<number, TraceFrame>;
}

/**
 * Per-row layout is t, n, d mean coordinates, then the covariance upper
 * triangle (d(d+1)/2 values, row by row). The dimension is recovered
 * from the column count: cols = 2 + d + d(d+1)/2.
 */
function dimFromColumns(nCols: number): number {
  for (let d = 1; d <= 64; d++) {
    if (2 + d + (d * (d + 1)) / 2 === nCols) return d;
  }
  throw new MalformedArtifact(`${nCols} columns does not match any trace layout`);
}

export function parseTrace(text: string): Trace {
  const table = parseNumericCsv(text);
  const d = dimFromColumns(table.header.length);
  const frames = new Map<number, TraceFrame>();
  for (const row of table.rows) {
    const t = row[0];
    let frame = frames.get(t);
    if (!frame) {
      frame = { t, means: [], covariances: [] };
      frames.set(t, frame);
    }
    frame.means.push(row.slice(2, 2 + d));
    const cov: number[][] = Array.from({ length: d }, () => new Array(d).fill(0));
    let k = 2 + d;
    for (let i = 0; i < d; i++) {
      for (let j = i; j < d; j++) {
        cov[i][j] = row[k];
        cov[j][i] = row[k];
        k++;
      }
    }
    frame.covariances.push(cov);
  }
  const iterations = [...frames.keys()].sort((a, b) => a - b);
  return { dim: d, iterations, frames };
}

export function frameAt(trace: Trace, t: number): TraceFrame {
  const frame = trace.frames.get(t);
  if (!frame) {
    const lo = trace.iterations[0];
    const hi = trace.iterations[trace.iterations.length - 1];
    throw new IterationOutOfRange(`t=${t} not in trace (have ${lo}..${hi})`);
  }
  return frame;
}

export function requirePlanar(trace: Trace): void {
  if (trace.dim !== 2) {
    throw new NonPlanarTrace(`bank overlays need a 2-D trace, got d=${trace.dim}`);
  }
}
