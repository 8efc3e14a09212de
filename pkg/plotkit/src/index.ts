export {
  HORAVA_COLUMNS,
  HoravaRow,
  SchemaError,
  TRAJECTORY_COLUMNS,
  TrajectoryRow,
  parseHoravaCsv,
  parseTrajectoryCsv,
} from "./schema.js";
export {
  FIGURE_KINDS,
  FigureKind,
  FigureRequest,
  anisotropyFigure,
  buildFigure,
  entropyFigure,
  horavaScanFigure,
  render,
  trajectoryFigure,
} from "./figures.js";
export { FigureSpec, Series, renderFigure } from "./svg.js";
