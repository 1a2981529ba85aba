import type { Row } from "../schema.js";
import { num } from "../schema.js";
import { PALETTE, padDomain, panelScales, renderPanel, svgRoot, type Series } from "../svg.js";
import { epsLabel, extent, groupBy } from "./util.js";

const PANEL_W = 440;
const PANEL_H = 340;
const COLS = 3;

function modeLabel(r: Row): string {
  const my = r["mode_index_y"] ?? "";
  return my === "" ? `k=${r["mode_index_x"]}` : `(${r["mode_index_x"]},${my})`;
}

/**
 * Mode-magnitude histories: one panel per (model, eps, method) run, one
 * semi-log trace per recorded mode.  Exact zeros are skipped (log axis).
 */
export function renderModes(rows: Row[]): string {
  const panelsOf = groupBy(rows, (r) => `${r["model"]}|${r["eps"]}|${r["method"]}`);
  const keys = [...panelsOf.keys()].sort();
  const nPanels = Math.max(1, keys.length);
  const nCols = Math.min(COLS, nPanels);
  const nRows = Math.ceil(nPanels / nCols);
  const panels: string[] = [];

  keys.forEach((key, pi) => {
    const [model = "", eps = "", method = ""] = key.split("|");
    const byMode = groupBy(panelsOf.get(key)!, modeLabel);
    const series: Series[] = [...byMode.keys()].sort().map((mode, i) => {
      const pts = byMode.get(mode)!
        .map((r): [number, number] => [num(r, "t"), num(r, "magnitude")])
        .filter(([, y]) => y > 0)
        .sort((a, b) => a[0] - b[0]);
      return { label: mode, color: PALETTE[i % PALETTE.length]!, points: pts };
    });
    const x0 = (pi % nCols) * PANEL_W;
    const y0 = Math.floor(pi / nCols) * PANEL_H;
    const xsAll = series.flatMap((s) => s.points.map((p) => p[0]));
    const ysAll = series.flatMap((s) => s.points.map((p) => p[1]));
    const { xScale, yScale } = panelScales(
      x0, y0, PANEL_W, PANEL_H, "linear", "log",
      padDomain("linear", ...(extent(xsAll) ?? [0, 1])),
      padDomain("log", ...(extent(ysAll) ?? [1e-8, 1])),
    );
    panels.push(renderPanel({
      x0, y0, width: PANEL_W, height: PANEL_H,
      title: `${model} eps=${epsLabel(Number(eps))} ${method}`,
      xLabel: "t",
      yLabel: "|mode|",
      xScale, yScale, series,
    }));
  });

  if (keys.length === 0) {
    const { xScale, yScale } = panelScales(
      0, 0, PANEL_W, PANEL_H, "linear", "log",
      padDomain("linear", 0, 1), padDomain("log", 1e-8, 1),
    );
    panels.push(renderPanel({
      x0: 0, y0: 0, width: PANEL_W, height: PANEL_H,
      title: "mode histories", xLabel: "t", yLabel: "|mode|",
      xScale, yScale, series: [],
    }));
  }

  return svgRoot(nCols * PANEL_W, nRows * PANEL_H, panels.join("\n"));
}
