import type { Row } from "../schema.js";
import { num } from "../schema.js";
import { PALETTE, padDomain, panelScales, renderPanel, svgRoot, type Series } from "../svg.js";
import { epsLabel, extent, groupBy, positivePoints } from "./util.js";

const W = 640;
const H = 460;

/**
 * Log-log error against the macro step: one curve per (model, eps), using
 * each group's finest micro step (the macro sweep), with order 2 and 4
 * slope guides.
 */
export function renderAccuracy(rows: Row[]): string {
  const groups = groupBy(rows, (r) => `${r["model"]}|${r["eps"]}`);
  const models = new Set(rows.map((r) => r["model"]));
  const series: Series[] = [];
  let i = 0;
  for (const key of [...groups.keys()].sort()) {
    const g = groups.get(key)!;
    const hFine = Math.min(...g.map((r) => num(r, "h")));
    const sweep = g.filter((r) => num(r, "h") === hFine);
    const pts = positivePoints(
      sweep.map((r) => ({ ...r, epsH: String(num(r, "eps") * num(r, "H")) })),
      "epsH",
      "error",
    );
    const [model = "", eps = ""] = key.split("|");
    const label =
      models.size > 1 ? `${model} eps=${epsLabel(Number(eps))}` : `eps=${epsLabel(Number(eps))}`;
    series.push({ label, color: PALETTE[i % PALETTE.length]!, points: pts });
    i += 1;
  }

  const xs = extent(series.flatMap((s) => s.points.map((p) => p[0])));
  const ys = extent(series.flatMap((s) => s.points.map((p) => p[1])));
  const { xScale, yScale } = panelScales(
    0, 0, W, H, "log", "log",
    padDomain("log", ...(xs ?? [1e-2, 1])),
    padDomain("log", ...(ys ?? [1e-8, 1e-2])),
  );
  const body = renderPanel({
    x0: 0, y0: 0, width: W, height: H,
    title: "averaged integrator: error vs macro step",
    xLabel: "eps * H",
    yLabel: "L2 error at T",
    xScale, yScale, series,
    guides: xs && ys ? [{ slope: 2, label: "slope 2" }, { slope: 4, label: "slope 4" }] : [],
  });
  return svgRoot(W, H, body);
}
