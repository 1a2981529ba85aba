import { readFileSync } from "node:fs";
import Papa from "papaparse";

export const FIGURES = ["accuracy", "efficiency", "invariants", "modes"] as const;
export type FigureId = (typeof FIGURES)[number];

/** Column contract of each harness CSV, in header order. */
export const SCHEMAS: Record<FigureId, readonly string[]> = {
  accuracy: ["model", "eps", "H", "h", "scheme", "stencil", "error"],
  efficiency: ["model", "eps", "method", "N_step", "error"],
  invariants: ["model", "eps", "macro", "t", "mass_err", "energy_err"],
  modes: ["model", "eps", "method", "t", "mode_index_x", "mode_index_y", "magnitude"],
};

/** Columns that must parse as finite numbers (the rest stay strings). */
const NUMERIC: Record<FigureId, readonly string[]> = {
  accuracy: ["eps", "H", "h", "stencil", "error"],
  efficiency: ["eps", "N_step", "error"],
  invariants: ["eps", "t", "mass_err", "energy_err"],
  modes: ["eps", "t", "mode_index_x", "magnitude"],
};

// empty = the column does not apply to this row (1D modes have no y index)
const OPTIONAL_EMPTY = new Set(["mode_index_y"]);

export class SchemaError extends Error {}

export type Row = Record<string, string>;

function describe(figure: FigureId): string {
  return `expected header: ${SCHEMAS[figure].join(",")}`;
}

/** Parse one CSV and check it against the schema of `figure`. */
export function readRows(figure: FigureId, path: string): Row[] {
  let text: string;
  try {
    text = readFileSync(path, "utf8");
  } catch (e) {
    throw new SchemaError(`${path}: cannot read file (${(e as Error).message})`);
  }
  const parsed = Papa.parse<Row>(text, { header: true, skipEmptyLines: true });
  if (parsed.errors.length > 0) {
    const first = parsed.errors[0]!;
    throw new SchemaError(`${path}: CSV parse error: ${first.message}; ${describe(figure)}`);
  }
  const fields = parsed.meta.fields ?? [];
  const missing = SCHEMAS[figure].filter((c) => !fields.includes(c));
  if (missing.length > 0) {
    throw new SchemaError(
      `${path}: missing column(s) ${missing.join(", ")} for figure "${figure}"; ${describe(figure)}`,
    );
  }
  for (const [i, row] of parsed.data.entries()) {
    for (const col of NUMERIC[figure]) {
      const raw = row[col] ?? "";
      if (raw === "" && OPTIONAL_EMPTY.has(col)) continue;
      if (!Number.isFinite(Number(raw))) {
        throw new SchemaError(
          `${path}: row ${i + 2}: column "${col}" is not numeric (got "${raw}"); ${describe(figure)}`,
        );
      }
    }
  }
  return parsed.data;
}

/** Read and concatenate several CSVs sharing one schema. */
export function readAll(figure: FigureId, paths: readonly string[]): Row[] {
  return paths.flatMap((p) => readRows(figure, p));
}

export function num(row: Row, col: string): number {
  return Number(row[col]);
}
