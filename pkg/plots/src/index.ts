export { MissingInput, SchemaMismatch } from "./errors.js";
export {
  asymmetrySummary,
  classicalSummary,
  loadCorrelations,
  loadSummary,
  orderSummary,
  weakValueSummary,
  CHANNELS,
  CSV_COLUMNS,
} from "./schema.js";
export type {
  AsymmetrySummary,
  ClassicalSummary,
  CorrelationRow,
  OrderSummary,
  WeakValueSummary,
} from "./schema.js";
export { buildFigure, render, FIGURE_KINDS } from "./render.js";
export type { FigureKind, PlotJob } from "./render.js";
