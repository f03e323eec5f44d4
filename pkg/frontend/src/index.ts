export { plotBank } from "./bank.js";
export type { BankPlotOptions } from "./bank.js";
export { contourSegments, defaultLevels } from "./contours.js";
export type { Segment } from "./contours.js";
export { plotCurve, curveFromSweep } from "./curve.js";
export type { CurveTable, CurvePlotOptions } from "./curve.js";
export { eigen2x2, orientation, ellipsePoints } from "./ellipse.js";
export type { Eigen2 } from "./ellipse.js";
export {
  PlotkitError,
  NonPlanarTrace,
  EmptyTable,
  IterationOutOfRange,
  MalformedArtifact,
} from "./errors.js";
export { parseGrid, gridMax } from "./grid.js";
export type { DensityGrid } from "./grid.js";
export { parseNumericCsv, column } from "./csv.js";
export type { NumericTable } from "./csv.js";
export { parseTrace, frameAt, requirePlanar } from "./trace.js";
export type { Trace, TraceFrame } from "./trace.js";
export { main } from "./cli.js";
