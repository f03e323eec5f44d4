import { EmptyTable, MalformedArtifact } from "./errors.js";
import {
  decadeTicks,
  frame,
  linearScale,
  logScale,
  niceTicks,
  openSvg,
  polylinePath,
  DEFAULT_LAYOUT,
  esc,
} from "./svg.js";

export interface CurveTable {
  label: string;
  xs: number[];
  ys: number[];
}

export interface CurvePlotOptions {
  logY?: boolean;
  title?: string;
  xLabel?: string;
  yLabel?: string;
}

const PALETTE = ["#4361ee", "#e63946", "#2d6a4f", "#9d4edd", "#f77f00", "#343a40"];

/** One line per table; log-scale y on request. */
export function plotCurve(tables: CurveTable[], opts: CurvePlotOptions = {}): string {
  if (tables.length === 0) {
    throw new EmptyTable("no curve tables given");
  }
  for (const t of tables) {
    if (t.xs.length !== t.ys.length) {
      throw new MalformedArtifact(
        `${t.label}: ${t.xs.length} x values vs ${t.ys.length} y values`
      );
    }
    if (t.xs.length < 2) {
      throw new EmptyTable(`${t.label}: a curve needs at least 2 points, got ${t.xs.length}`);
    }
  }

  const allX = tables.flatMap((t) => t.xs);
  const allY = tables.flatMap((t) => t.ys);
  const logY = opts.logY ?? false;
  if (logY && allY.some((v) => !(v > 0))) {
    throw new MalformedArtifact("log-scale y needs strictly positive values");
  }

  const l = { ...DEFAULT_LAYOUT, height: 380 };
  const xDom: [number, number] = [Math.min(...allX), Math.max(...allX)];
  const x = linearScale(xDom, [l.ml, l.width - l.mr]);

  let y;
  let yTicks: number[];
  if (logY) {
    const yDom: [number, number] = [Math.min(...allY), Math.max(...allY)];
    y = logScale(yDom, [l.height - l.mb, l.mt]);
    yTicks = decadeTicks(yDom[0], yDom[1]);
  } else {
    const lo = Math.min(...allY, 0);
    const hi = Math.max(...allY) * 1.05;
    y = linearScale([lo, hi], [l.height - l.mb, l.mt]);
    yTicks = niceTicks(lo, hi, 6);
  }

  let s = openSvg(l);
  s += frame(l, x, y, {
    title: opts.title,
    xLabel: opts.xLabel ?? "x",
    yLabel: opts.yLabel ?? "value",
    xTicks: niceTicks(xDom[0], xDom[1], Math.min(8, allX.length + 1)),
    yTicks,
  });

  tables.forEach((t, i) => {
    const color = PALETTE[i % PALETTE.length];
    const order = t.xs.map((_, k) => k).sort((a, b) => t.xs[a] - t.xs[b]);
    const pts = order.map((k) => [x(t.xs[k]), y(t.ys[k])] as [number, number]);
    s += `<polyline class="curve" fill="none" stroke="${color}" stroke-width="1.4" points="${polylinePath(pts)}"/>\n`;
    for (const [px, py] of pts) {
      s += `<circle cx="${px.toFixed(2)}" cy="${py.toFixed(2)}" r="2.2" fill="${color}"/>\n`;
    }
    const [lx, ly] = pts[pts.length - 1];
    s += `<text x="${(lx - 4).toFixed(1)}" y="${(ly - 6).toFixed(1)}" text-anchor="end" font-size="8" fill="${color}">${esc(t.label)}</text>\n`;
  });

  s += `</svg>\n`;
  return s;
}

/** Pull one curve out of a sweep summary: x = swept value, y = mean-estimate MSE. */
export function curveFromSweep(summary: unknown, axis: string): CurveTable {
  const doc = summary as {
    name?: unknown;
    axis?: unknown;
    rows?: { value?: unknown; mse_mean?: unknown }[];
  };
  if (!doc || !Array.isArray(doc.rows)) {
    throw new MalformedArtifact("summary has no rows array");
  }
  if (doc.axis !== axis) {
    throw new MalformedArtifact(`summary sweeps ${String(doc.axis)}, not ${axis}`);
  }
  if (doc.rows.length === 0) {
    throw new EmptyTable("summary has no sweep rows");
  }
  const xs: number[] = [];
  const ys: number[] = [];
  for (const row of doc.rows) {
    if (typeof row.value !== "number" || typeof row.mse_mean !== "number") {
      throw new MalformedArtifact("sweep row missing value/mse_mean");
    }
    xs.push(row.value);
    ys.push(row.mse_mean);
  }
  return { label: typeof doc.name === "string" ? doc.name : "sweep", xs, ys };
}
