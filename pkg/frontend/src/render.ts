import { readAll, type FigureId } from "./schema.js";
import { renderAccuracy } from "./figures/accuracy.js";
import { renderEfficiency } from "./figures/efficiency.js";
import { renderInvariants } from "./figures/invariants.js";
import { renderModes } from "./figures/modes.js";

const RENDERERS: Record<FigureId, (rows: ReturnType<typeof readAll>) => string> = {
  accuracy: renderAccuracy,
  efficiency: renderEfficiency,
  invariants: renderInvariants,
  modes: renderModes,
};

/** Read the CSVs for `figure`, validate them, and return the SVG text. */
export function renderFigure(figure: FigureId, csvPaths: readonly string[]): string {
  return RENDERERS[figure](readAll(figure, csvPaths));
}
