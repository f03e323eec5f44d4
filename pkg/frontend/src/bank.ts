import { contourSegments, defaultLevels } from "./contours.js";
import { ellipsePoints } from "./ellipse.js";
import type { DensityGrid } from "./grid.js";
import { frame, linearScale, niceTicks, openSvg, polylinePath, DEFAULT_LAYOUT } from "./svg.js";
import type { Trace } from "./trace.js";
import { frameAt, requirePlanar } from "./trace.js";

export interface BankPlotOptions {
  title?: string;
  nSigma?: number;
  levels?: number[];
}

/**
 * Target contours with the proposal bank at iteration t overlaid:
 * means as dots, covariances as nSigma ellipses.
 */
export function plotBank(
  trace: Trace,
  grid: DensityGrid,
  t: number,
  opts: BankPlotOptions = {}
): string {
  requirePlanar(trace);
  const bank = frameAt(trace, t);
  const nSigma = opts.nSigma ?? 1;

  const l = { ...DEFAULT_LAYOUT };
  // Keep data aspect ratio square-ish: the grid box is the data window.
  const xDom: [number, number] = [grid.xs[0], grid.xs[grid.xs.length - 1]];
  const yDom: [number, number] = [grid.ys[0], grid.ys[grid.ys.length - 1]];
  const x = linearScale(xDom, [l.ml, l.width - l.mr]);
  const y = linearScale(yDom, [l.height - l.mb, l.mt]);

  let s = openSvg(l);
  s += frame(l, x, y, {
    title: opts.title ?? `proposal bank at t=${t}`,
    xLabel: "x1",
    yLabel: "x2",
    xTicks: niceTicks(xDom[0], xDom[1], 7),
    yTicks: niceTicks(yDom[0], yDom[1], 7),
  });

  const clip = `<defs><clipPath id="plot"><rect x="${l.ml}" y="${l.mt}" width="${l.width - l.mr - l.ml}" height="${l.height - l.mb - l.mt}"/></clipPath></defs>\n`;
  s += clip;
  s += `<g clip-path="url(#plot)">\n`;

  const levels = opts.levels ?? defaultLevels(grid);
  for (let li = 0; li < levels.length; li++) {
    const segs = contourSegments(grid, levels[li]);
    if (segs.length === 0) continue;
    const d = segs
      .map(
        ([p, q]) =>
          `M${x(p[0]).toFixed(2)} ${y(p[1]).toFixed(2)}L${x(q[0]).toFixed(2)} ${y(q[1]).toFixed(2)}`
      )
      .join("");
    const shade = 0.25 + (0.55 * li) / Math.max(1, levels.length - 1);
    s += `<path class="contour" d="${d}" fill="none" stroke="#4361ee" stroke-width="0.7" opacity="${shade.toFixed(2)}"/>\n`;
  }

  for (let n = 0; n < bank.means.length; n++) {
    const pts = ellipsePoints(bank.means[n], bank.covariances[n], nSigma);
    const mapped = pts.map(([px, py]) => [x(px), y(py)] as [number, number]);
    s += `<polyline class="ellipse" fill="none" stroke="#111" stroke-width="0.8" points="${polylinePath(mapped)}"/>\n`;
  }
  for (const mu of bank.means) {
    s += `<circle class="mean" cx="${x(mu[0]).toFixed(2)}" cy="${y(mu[1]).toFixed(2)}" r="1.8" fill="#111"/>\n`;
  }

  s += `</g>\n</svg>\n`;
  return s;
}
