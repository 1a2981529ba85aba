import { scaleLinear, scaleLog } from "d3-scale";

/** Deterministic SVG assembly: fixed palette, 0.01 px coordinate grid. */

export const PALETTE = [
  "#0072b2", "#d55e00", "#009e73", "#cc79a7",
  "#e69f00", "#56b4e9", "#555555", "#994f00",
];

export function fmt(x: number): string {
  const s = x.toFixed(2);
  return s.includes(".") ? s.replace(/\.?0+$/, "") : s;
}

export function escapeXml(s: string): string {
  return s
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

export interface Scale {
  (x: number): number;
  kind: "log" | "linear";
  domain: [number, number];
  range: [number, number];
  ticks: () => number[];
}

function decadeTicks(lo: number, hi: number): number[] {
  const out: number[] = [];
  for (let k = Math.ceil(Math.log10(lo) - 1e-9); k <= Math.floor(Math.log10(hi) + 1e-9); k++) {
    out.push(Math.pow(10, k));
  }
  return out;
}

export function makeScale(
  kind: "log" | "linear",
  domain: [number, number],
  range: [number, number],
): Scale {
  const base = kind === "log" ? scaleLog(domain, range) : scaleLinear(domain, range);
  const f = ((x: number) => base(x) as number) as Scale;
  f.kind = kind;
  f.domain = domain;
  f.range = range;
  f.ticks = () => {
    if (kind === "linear") return scaleLinear(domain, range).ticks(6);
    const dec = decadeTicks(domain[0], domain[1]);
    return dec.length >= 2 ? dec : scaleLog(domain, range).ticks(5);
  };
  return f;
}

export function tickLabel(v: number, kind: "log" | "linear"): string {
  if (kind === "log") {
    const k = Math.log10(v);
    if (Math.abs(k - Math.round(k)) < 1e-9) return `1e${Math.round(k)}`;
  }
  if (v !== 0 && (Math.abs(v) >= 1e5 || Math.abs(v) < 1e-3)) return v.toExponential(0);
  return String(v);
}

export interface Series {
  label: string;
  color: string;
  points: Array<[number, number]>;
  dash?: string;
}

export interface Guide {
  slope: number;
  label: string;
}

export interface PanelSpec {
  x0: number;
  y0: number;
  width: number;
  height: number;
  title: string;
  xLabel: string;
  yLabel: string;
  xScale: Scale;
  yScale: Scale;
  series: Series[];
  guides?: Guide[];
}

const M = { top: 30, right: 16, bottom: 44, left: 64 };

/** Extend [lo, hi] by 5% padding in scale space. */
export function padDomain(kind: "log" | "linear", lo: number, hi: number): [number, number] {
  if (kind === "log") {
    const f = Math.pow(hi / lo, 0.05) || 1.05;
    return [lo / f, hi * f];
  }
  const pad = (hi - lo) * 0.05 || 1;
  return [lo - pad, hi + pad];
}

function pathOf(points: Array<[number, number]>, xs: Scale, ys: Scale): string {
  return points
    .map(([x, y], i) => `${i === 0 ? "M" : "L"}${fmt(xs(x))},${fmt(ys(y))}`)
    .join(" ");
}

/** Straight guide segment of the given log-log slope in the lower data region. */
function guidePath(g: Guide, xs: Scale, ys: Scale): string | null {
  if (xs.kind !== "log" || ys.kind !== "log") return null;
  const [xlo, xhi] = xs.domain;
  const [ylo, yhi] = ys.domain;
  const xspanLog = Math.log(xhi / xlo);
  const yspanLog = Math.log(yhi / ylo);
  // cap the run so the rise stays inside half the y range
  const run = Math.min(0.3 * xspanLog, (0.45 * yspanLog) / Math.max(1e-9, Math.abs(g.slope)));
  const x1 = xlo * Math.exp(0.88 * xspanLog);
  const x0 = x1 / Math.exp(run);
  // anchor the segment's lower end near the bottom of the panel
  const anchor = ylo * Math.exp(0.1 * yspanLog);
  const yAtX0 = g.slope >= 0 ? anchor : anchor * Math.exp(-g.slope * run);
  const y1 = yAtX0 * Math.pow(x1 / x0, g.slope);
  return `M${fmt(xs(x0))},${fmt(ys(yAtX0))} L${fmt(xs(x1))},${fmt(ys(y1))}`;
}

export function renderPanel(spec: PanelSpec): string {
  const { x0, y0, width, height } = spec;
  const plotX = x0 + M.left;
  const plotY = y0 + M.top;
  const plotW = width - M.left - M.right;
  const plotH = height - M.top - M.bottom;
  const xs = spec.xScale;
  const ys = spec.yScale;
  const parts: string[] = [];

  parts.push(
    `<rect x="${fmt(plotX)}" y="${fmt(plotY)}" width="${fmt(plotW)}" height="${fmt(plotH)}" fill="none" stroke="#333" stroke-width="1"/>`,
  );
  parts.push(
    `<text x="${fmt(x0 + width / 2)}" y="${fmt(y0 + 18)}" text-anchor="middle" font-size="13" font-weight="bold">${escapeXml(spec.title)}</text>`,
  );

  for (const v of xs.ticks()) {
    const px = xs(v);
    parts.push(`<line x1="${fmt(px)}" y1="${fmt(plotY + plotH)}" x2="${fmt(px)}" y2="${fmt(plotY + plotH + 4)}" stroke="#333"/>`);
    parts.push(
      `<text x="${fmt(px)}" y="${fmt(plotY + plotH + 17)}" text-anchor="middle" font-size="10">${escapeXml(tickLabel(v, xs.kind))}</text>`,
    );
  }
  for (const v of ys.ticks()) {
    const py = ys(v);
    parts.push(`<line x1="${fmt(plotX - 4)}" y1="${fmt(py)}" x2="${fmt(plotX)}" y2="${fmt(py)}" stroke="#333"/>`);
    parts.push(
      `<text x="${fmt(plotX - 7)}" y="${fmt(py + 3)}" text-anchor="end" font-size="10">${escapeXml(tickLabel(v, ys.kind))}</text>`,
    );
  }
  parts.push(
    `<text x="${fmt(plotX + plotW / 2)}" y="${fmt(y0 + height - 10)}" text-anchor="middle" font-size="11">${escapeXml(spec.xLabel)}</text>`,
  );
  parts.push(
    `<text x="${fmt(x0 + 15)}" y="${fmt(plotY + plotH / 2)}" text-anchor="middle" font-size="11" transform="rotate(-90 ${fmt(x0 + 15)} ${fmt(plotY + plotH / 2)})">${escapeXml(spec.yLabel)}</text>`,
  );

  for (const g of spec.guides ?? []) {
    const d = guidePath(g, xs, ys);
    if (d === null) continue;
    parts.push(`<path class="guide" d="${d}" fill="none" stroke="#888" stroke-width="1" stroke-dasharray="5,3"/>`);
    // descending guides share their lower-right anchor, so label each at
    // its distinct upper end instead
    const start = d.slice(1).split(" L")[0]!.split(",");
    const end = d.split(" L")[1]!.split(",");
    const [lx, ly, anchor, dx] =
      g.slope >= 0
        ? [Number(end[0]), Number(end[1]), "start", 4]
        : [Number(start[0]), Number(start[1]), "end", -4];
    parts.push(
      `<text x="${fmt(lx + dx)}" y="${fmt(ly)}" text-anchor="${anchor}" font-size="10" fill="#666">${escapeXml(g.label)}</text>`,
    );
  }

  for (const s of spec.series) {
    if (s.points.length === 0) continue;
    const dash = s.dash ? ` stroke-dasharray="${s.dash}"` : "";
    parts.push(
      `<path class="series" d="${pathOf(s.points, xs, ys)}" fill="none" stroke="${s.color}" stroke-width="1.5"${dash}/>`,
    );
    for (const [x, y] of s.points) {
      parts.push(`<circle cx="${fmt(xs(x))}" cy="${fmt(ys(y))}" r="2.2" fill="${s.color}"/>`);
    }
  }

  const legends = spec.series.filter((s) => s.points.length > 0);
  legends.forEach((s, i) => {
    const lx = plotX + plotW - 150;
    const ly = plotY + 12 + 14 * i;
    parts.push(`<line x1="${fmt(lx)}" y1="${fmt(ly - 3)}" x2="${fmt(lx + 18)}" y2="${fmt(ly - 3)}" stroke="${s.color}" stroke-width="1.5"${s.dash ? ` stroke-dasharray="${s.dash}"` : ""}/>`);
    parts.push(
      `<text class="legend" x="${fmt(lx + 23)}" y="${fmt(ly)}" font-size="10">${escapeXml(s.label)}</text>`,
    );
  });

  return parts.join("\n");
}

/** Scales sized for a panel at (x0, y0); domains already padded. */
export function panelScales(
  x0: number,
  y0: number,
  width: number,
  height: number,
  xKind: "log" | "linear",
  yKind: "log" | "linear",
  xDomain: [number, number],
  yDomain: [number, number],
): { xScale: Scale; yScale: Scale } {
  return {
    xScale: makeScale(xKind, xDomain, [x0 + M.left, x0 + width - M.right]),
    yScale: makeScale(yKind, yDomain, [y0 + height - M.bottom, y0 + M.top]),
  };
}

export function svgRoot(width: number, height: number, body: string): string {
  return [
    `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}" viewBox="0 0 ${width} ${height}" font-family="Helvetica,Arial,sans-serif">`,
    `<rect width="${width}" height="${height}" fill="white"/>`,
    body,
    `</svg>`,
    ``,
  ].join("\n");
}
