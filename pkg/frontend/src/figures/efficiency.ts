import type { Row } from "../schema.js";
import { PALETTE, padDomain, panelScales, renderPanel, svgRoot, type Series } from "../svg.js";
import { epsLabel, extent, groupBy, positivePoints } from "./util.js";

const W = 640;
const H = 460;

/**
 * Log-log error against micro-step work: one curve per (model, method, eps);
 * averaged envelopes drawn solid, uniform splitting dashed, with order -2
 * and -4 slope guides.
 */
export function renderEfficiency(rows: Row[]): string {
  const groups = groupBy(rows, (r) => `${r["model"]}|${r["method"]}|${r["eps"]}`);
  const models = new Set(rows.map((r) => r["model"]));
  const series: Series[] = [];
  let i = 0;
  for (const key of [...groups.keys()].sort()) {
    const [model = "", method = "", eps = ""] = key.split("|");
    const prefix = models.size > 1 ? `${model} ` : "";
    series.push({
      label: `${prefix}${method} eps=${epsLabel(Number(eps))}`,
      color: PALETTE[i % PALETTE.length]!,
      points: positivePoints(groups.get(key)!, "N_step", "error"),
      dash: method === "sam" ? undefined : "6,3",
    });
    i += 1;
  }

  const xs = extent(series.flatMap((s) => s.points.map((p) => p[0])));
  const ys = extent(series.flatMap((s) => s.points.map((p) => p[1])));
  const { xScale, yScale } = panelScales(
    0, 0, W, H, "log", "log",
    padDomain("log", ...(xs ?? [1e3, 1e5])),
    padDomain("log", ...(ys ?? [1e-8, 1e-2])),
  );
  const body = renderPanel({
    x0: 0, y0: 0, width: W, height: H,
    title: "work-precision: error vs micro steps",
    xLabel: "N_step",
    yLabel: "L2 error at T",
    xScale, yScale, series,
    guides: xs && ys ? [{ slope: -2, label: "slope -2" }, { slope: -4, label: "slope -4" }] : [],
  });
  return svgRoot(W, H, body);
}
