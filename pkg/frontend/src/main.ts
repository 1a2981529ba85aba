import { writeFileSync } from "node:fs";
import yargs from "yargs";
import { FIGURES, SchemaError, type FigureId } from "./schema.js";
import { renderFigure } from "./render.js";

export interface Io {
  error: (msg: string) => void;
}

/**
 * `plot <figure_id> --in <csv...> --out <file>`
 *
 * Exit codes mirror the harness: 0 rendered, 1 input failure (unreadable
 * file, parse error, schema violation), 2 bad usage.
 */
export async function main(argv: string[], io: Io = { error: (m) => console.error(m) }): Promise<number> {
  let usageError: string | null = null;
  const parser = yargs(argv)
    .scriptName("plot")
    .command("$0 <figure>", "render one figure from harness CSV files", (y) =>
      y
        .positional("figure", { choices: FIGURES, demandOption: true, type: "string" })
        .option("in", { type: "string", array: true, demandOption: true, describe: "input CSV file(s)" })
        .option("out", { type: "string", demandOption: true, describe: "output SVG file" }),
    )
    .strict()
    .exitProcess(false)
    .fail((msg, err) => {
      usageError = msg ?? err?.message ?? "bad arguments";
    });

  const args = await parser.parse();
  if (usageError !== null) {
    io.error(`error: ${usageError}`);
    io.error(`usage: plot <${FIGURES.join("|")}> --in <csv...> --out <file>`);
    return 2;
  }

  const figure = args["figure"] as FigureId;
  const paths = args["in"] as string[];
  const out = args["out"] as string;
  try {
    const svg = renderFigure(figure, paths);
    writeFileSync(out, svg);
  } catch (e) {
    if (e instanceof SchemaError) {
      io.error(`error: ${e.message}`);
      return 1;
    }
    io.error(`error: ${(e as Error).message}`);
    return 1;
  }
  return 0;
}
