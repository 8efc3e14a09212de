/**
 * CSV schemas of the core package's outputs.
 *
 * Trajectory files carry the fixed column order
 *   t,g1,g2,g3,R,C2,F_CS,V,alpha,dF_step
 * and coupling-scan tables
 *   alpha,c,g_newton,lambda_eff,coef_r,coef_const,flag
 * where c/g_newton may be empty on flagged rows.  Validation is strict:
 * any column reordering, a header-only file, non-finite numbers, or broken
 * row invariants (t strictly increasing, V > 0) are rejected.
 */

export const TRAJECTORY_COLUMNS = [
  "t",
  "g1",
  "g2",
  "g3",
  "R",
  "C2",
  "F_CS",
  "V",
  "alpha",
  "dF_step",
] as const;

export const HORAVA_COLUMNS = [
  "alpha",
  "c",
  "g_newton",
  "lambda_eff",
  "coef_r",
  "coef_const",
  "flag",
] as const;

export type TrajectoryColumn = (typeof TRAJECTORY_COLUMNS)[number];

export type TrajectoryRow = Record<TrajectoryColumn, number>;

export interface HoravaRow {
  alpha: number;
  c: number | null;
  g_newton: number | null;
  lambda_eff: number;
  coef_r: number;
  coef_const: number;
  flag: string;
}

export class SchemaError extends Error {
  readonly column?: string;

  constructor(message: string, column?: string) {
    super(column ? `${message} (column: ${column})` : message);
    this.column = column;
    this.name = "SchemaError";
  }
}

function splitCsv(text: string): string[][] {
  return text
    .split(/\r?\n/)
    .filter((line) => line.length > 0)
    .map((line) => line.split(","));
}

function checkHeader(header: string[], expected: readonly string[]): void {
  for (let i = 0; i < Math.max(header.length, expected.length); i++) {
    if (header[i] !== expected[i]) {
      throw new SchemaError(
        `header mismatch at position ${i}: expected ${expected[i] ?? "<end>"}, got ${header[i] ?? "<end>"}`,
        expected[i] ?? header[i],
      );
    }
  }
}

function parseNumber(raw: string, column: string, line: number): number {
  const value = Number(raw);
  if (raw.trim() === "" || !Number.isFinite(value)) {
    throw new SchemaError(`non-finite value ${JSON.stringify(raw)} on line ${line}`, column);
  }
  return value;
}

export function parseTrajectoryCsv(text: string): TrajectoryRow[] {
  const lines = splitCsv(text);
  if (lines.length === 0) {
    throw new SchemaError("empty file: missing header");
  }
  checkHeader(lines[0], TRAJECTORY_COLUMNS);
  if (lines.length === 1) {
    throw new SchemaError("empty trajectory: header without data rows");
  }
  const rows: TrajectoryRow[] = [];
  for (let i = 1; i < lines.length; i++) {
    const cells = lines[i];
    if (cells.length !== TRAJECTORY_COLUMNS.length) {
      throw new SchemaError(`line ${i + 1} has ${cells.length} fields, expected ${TRAJECTORY_COLUMNS.length}`);
    }
    const row = {} as TrajectoryRow;
    TRAJECTORY_COLUMNS.forEach((col, j) => {
      row[col] = parseNumber(cells[j], col, i + 1);
    });
    if (row.V <= 0) {
      throw new SchemaError(`line ${i + 1}: cell volume must be positive`, "V");
    }
    if (rows.length > 0 && row.t <= rows[rows.length - 1].t) {
      throw new SchemaError(`line ${i + 1}: time must be strictly increasing`, "t");
    }
    rows.push(row);
  }
  return rows;
}

export function parseHoravaCsv(text: string): HoravaRow[] {
  const lines = splitCsv(text);
  if (lines.length === 0) {
    throw new SchemaError("empty file: missing header");
  }
  checkHeader(lines[0], HORAVA_COLUMNS);
  if (lines.length === 1) {
    throw new SchemaError("empty scan: header without data rows");
  }
  const rows: HoravaRow[] = [];
  for (let i = 1; i < lines.length; i++) {
    const cells = lines[i];
    if (cells.length !== HORAVA_COLUMNS.length) {
      throw new SchemaError(`line ${i + 1} has ${cells.length} fields, expected ${HORAVA_COLUMNS.length}`);
    }
    const optional = (raw: string, column: string): number | null =>
      raw.trim() === "" ? null : parseNumber(raw, column, i + 1);
    rows.push({
      alpha: parseNumber(cells[0], "alpha", i + 1),
      c: optional(cells[1], "c"),
      g_newton: optional(cells[2], "g_newton"),
      lambda_eff: parseNumber(cells[3], "lambda_eff", i + 1),
      coef_r: parseNumber(cells[4], "coef_r", i + 1),
      coef_const: parseNumber(cells[5], "coef_const", i + 1),
      flag: cells[6] ?? "",
    });
  }
  return rows;
}
