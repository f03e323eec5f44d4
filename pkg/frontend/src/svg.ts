export function esc(s: string): string {
  return s.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}

export interface Scale {
  (v: number): number;
  domain: [number, number];
}

export function linearScale(domain: [number, number], range: [number, number]): Scale {
  const [d0, d1] = domain;
  const [r0, r1] = range;
  const span = d1 - d0 || 1;
  const f = ((v: number) => r0 + ((v - d0) / span) * (r1 - r0)) as Scale;
  f.domain = domain;
  return f;
}

export function logScale(domain: [number, number], range: [number, number]): Scale {
  const inner = linearScale([Math.log10(domain[0]), Math.log10(domain[1])], range);
  const f = ((v: number) => inner(Math.log10(v))) as Scale;
  f.domain = domain;
  return f;
}

export function niceTicks(min: number, max: number, count: number): number[] {
  const range = max - min || 1;
  const rough = range / count;
  const mag = Math.pow(10, Math.floor(Math.log10(rough)));
  const step = [1, 2, 5, 10].map((m) => m * mag).find((n) => n >= rough) ?? rough;
  const ticks: number[] = [];
  for (let v = Math.ceil(min / step) * step; v <= max + step * 1e-9; v += step) {
    ticks.push(Math.abs(v) < step * 1e-9 ? 0 : v);
  }
  return ticks;
}

/** Decade ticks covering [min, max], for log axes. */
export function decadeTicks(min: number, max: number): number[] {
  const ticks: number[] = [];
  for (let e = Math.floor(Math.log10(min)); e <= Math.ceil(Math.log10(max)); e++) {
    ticks.push(Math.pow(10, e));
  }
  return ticks;
}

export function fmtTick(v: number): string {
  if (v === 0) return "0";
  const a = Math.abs(v);
  if (a >= 1e4 || a < 1e-3) return v.toExponential(0).replace("e", "e");
  return Number(v.toPrecision(4)).toString();
}

export interface Layout {
  width: number;
  height: number;
  ml: number;
  mr: number;
  mt: number;
  mb: number;
}

export const DEFAULT_LAYOUT: Layout = { width: 560, height: 480, ml: 58, mr: 16, mt: 30, mb: 46 };

export function openSvg(l: Layout): string {
  return (
    `<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 ${l.width} ${l.height}" ` +
    `font-family="Helvetica, Arial, sans-serif">\n` +
    `<rect width="${l.width}" height="${l.height}" fill="#fff"/>\n`
  );
}

/** Axes frame, tick marks, tick labels, and axis titles. */
export function frame(
  l: Layout,
  x: Scale,
  y: Scale,
  opts: {
    title?: string;
    xLabel?: string;
    yLabel?: string;
    xTicks: number[];
    yTicks: number[];
  }
): string {
  const x0 = l.ml, x1 = l.width - l.mr;
  const y0 = l.mt, y1 = l.height - l.mb;
  let s = "";
  if (opts.title) {
    s += `<text x="${x0}" y="${y0 - 10}" font-size="11" font-weight="600" fill="#222">${esc(opts.title)}</text>\n`;
  }
  for (const v of opts.yTicks) {
    const yy = y(v);
    s += `<line x1="${x0}" y1="${yy.toFixed(1)}" x2="${x1}" y2="${yy.toFixed(1)}" stroke="#eee" stroke-width="0.6"/>\n`;
    s += `<line x1="${x0 - 3}" y1="${yy.toFixed(1)}" x2="${x0}" y2="${yy.toFixed(1)}" stroke="#333" stroke-width="0.6"/>\n`;
    s += `<text x="${x0 - 5}" y="${(yy + 2.6).toFixed(1)}" text-anchor="end" font-size="7.5" fill="#555">${esc(fmtTick(v))}</text>\n`;
  }
  for (const v of opts.xTicks) {
    const xx = x(v);
    s += `<line x1="${xx.toFixed(1)}" y1="${y1}" x2="${xx.toFixed(1)}" y2="${y1 + 3}" stroke="#333" stroke-width="0.6"/>\n`;
    s += `<text x="${xx.toFixed(1)}" y="${y1 + 13}" text-anchor="middle" font-size="7.5" fill="#555">${esc(fmtTick(v))}</text>\n`;
  }
  s += `<rect x="${x0}" y="${y0}" width="${x1 - x0}" height="${y1 - y0}" fill="none" stroke="#333" stroke-width="0.8"/>\n`;
  if (opts.xLabel) {
    s += `<text x="${(x0 + x1) / 2}" y="${l.height - 8}" text-anchor="middle" font-size="9" fill="#333">${esc(opts.xLabel)}</text>\n`;
  }
  if (opts.yLabel) {
    const cy = (y0 + y1) / 2;
    s += `<text x="14" y="${cy}" text-anchor="middle" font-size="9" fill="#333" transform="rotate(-90,14,${cy})">${esc(opts.yLabel)}</text>\n`;
  }
  return s;
}

export function polylinePath(pts: [number, number][]): string {
  return pts.map(([px, py]) => `${px.toFixed(2)},${py.toFixed(2)}`).join(" ");
}
