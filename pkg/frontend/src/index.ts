export { LOG_COLUMNS, STATES_COLUMNS, SchemaError, parseCsv, readLog, readStates, column } from "./csv.js";
export { readSidecar, sidecarPath } from "./sidecar.js";
export { renderChart } from "./svg.js";
export type { Series, ChartOptions } from "./svg.js";
export { renderDecay, renderFigure, renderInputs, renderTrajectory, project } from "./render.js";
export type { FigureKind, PlotSpec } from "./render.js";
export { main, parseArgs, UsageError } from "./cli.js";
