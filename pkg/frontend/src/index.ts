export { FIGURES, SCHEMAS, SchemaError, readRows, readAll } from "./schema.js";
export type { FigureId, Row } from "./schema.js";
export { renderFigure } from "./render.js";
export { main } from "./main.js";
