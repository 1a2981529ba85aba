import type { Row } from "../schema.js";
import { PALETTE, padDomain, panelScales, renderPanel, svgRoot, type Series } from "../svg.js";
import { extent, groupBy } from "./util.js";

const PANEL_W = 520;
const PANEL_H = 400;

const SCHEME_ORDER = ["midpoint", "rk2", "rk4"];

function schemeRank(s: string): number {
  const i = SCHEME_ORDER.indexOf(s);
  return i === -1 ? SCHEME_ORDER.length : i;
}

/**
 * Semi-log drift traces over the long horizon, one panel per invariant
 * (mass, energy), one curve per macro scheme.  Zero errors (the initial
 * sample) cannot sit on a log axis and are skipped.
 */
export function renderInvariants(rows: Row[]): string {
  const bySch = groupBy(rows, (r) => r["macro"] ?? "");
  const schemes = [...bySch.keys()].sort((a, b) => schemeRank(a) - schemeRank(b) || a.localeCompare(b));

  const panels: string[] = [];
  (["mass_err", "energy_err"] as const).forEach((col, pi) => {
    const series: Series[] = schemes.map((sch, i) => {
      const pts = bySch.get(sch)!
        .map((r): [number, number] => [Number(r["t"]), Number(r[col])])
        .filter(([, y]) => y > 0)
        .sort((a, b) => a[0] - b[0]);
      return { label: sch, color: PALETTE[i % PALETTE.length]!, points: pts };
    });
    const xsAll = series.flatMap((s) => s.points.map((p) => p[0]));
    const ysAll = series.flatMap((s) => s.points.map((p) => p[1]));
    const x0 = pi * PANEL_W;
    const { xScale, yScale } = panelScales(
      x0, 0, PANEL_W, PANEL_H, "linear", "log",
      padDomain("linear", ...(extent(xsAll) ?? [0, 1])),
      padDomain("log", ...(extent(ysAll) ?? [1e-10, 1e-2])),
    );
    panels.push(renderPanel({
      x0, y0: 0, width: PANEL_W, height: PANEL_H,
      title: col === "mass_err" ? "mass error" : "energy error",
      xLabel: "t",
      yLabel: `|${col === "mass_err" ? "mass" : "energy"} deviation|`,
      xScale, yScale, series,
    }));
  });
  return svgRoot(2 * PANEL_W, PANEL_H, panels.join("\n"));
}
