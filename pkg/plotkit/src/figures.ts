/**
 * The four figure kinds, each a pure function from validated CSV text to an
 * SVG string; `render` wires them to the filesystem.  Inputs are never
 * mutated and identical input bytes produce identical figures.
 */

import { readFileSync, writeFileSync } from "fs";

import { parseHoravaCsv, parseTrajectoryCsv, TrajectoryRow } from "./schema.js";
import { renderFigure, Series } from "./svg.js";

export const FIGURE_KINDS = ["trajectory", "entropy", "anisotropy", "horava-scan"] as const;

export type FigureKind = (typeof FIGURE_KINDS)[number];

export interface FigureRequest {
  kind: FigureKind;
  input: string;
  output: string;
}

const PALETTE = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd"];

function coefficientSeries(rows: TrajectoryRow[]): Series[] {
  return (["g1", "g2", "g3"] as const).map((key, i) => ({
    label: key,
    color: PALETTE[i],
    points: rows.map((r) => [r.t, r[key]] as [number, number]),
  }));
}

export function trajectoryFigure(csv: string): string {
  const rows = parseTrajectoryCsv(csv);
  return renderFigure({
    title: "Metric coefficients along the flow",
    xLabel: "t",
    yLabel: "g_i",
    series: coefficientSeries(rows),
  });
}

export function entropyFigure(csv: string): string {
  const rows = parseTrajectoryCsv(csv);
  const steps = rows.slice(1).map((r) => r.dF_step);
  const minStep = steps.length ? Math.min(...steps) : 0;
  return renderFigure({
    title: "Entropy along the flow",
    xLabel: "t",
    yLabel: "F_CS",
    series: [
      {
        label: "F_CS",
        color: PALETTE[0],
        points: rows.map((r) => [r.t, r.F_CS] as [number, number]),
      },
    ],
    note: `min per-step dF = ${minStep.toExponential(3)}`,
  });
}

export function anisotropyFigure(csv: string): string {
  const rows = parseTrajectoryCsv(csv);
  const points = rows
    .map((r) => {
      const gs = [r.g1, r.g2, r.g3];
      return [r.t, Math.max(...gs) / Math.min(...gs) - 1] as [number, number];
    })
    .filter((p) => p[1] > 0);
  if (points.length === 0) {
    // isotropic throughout: fall back to a linear axis at zero
    return renderFigure({
      title: "Anisotropy decay",
      xLabel: "t",
      yLabel: "max g / min g - 1",
      series: [
        {
          label: "anisotropy",
          color: PALETTE[1],
          points: rows.map((r) => [r.t, 0] as [number, number]),
        },
      ],
    });
  }
  return renderFigure({
    title: "Anisotropy decay",
    xLabel: "t",
    yLabel: "max g / min g - 1",
    logY: true,
    series: [{ label: "anisotropy", color: PALETTE[1], points }],
  });
}

export function horavaScanFigure(csv: string): string {
  const rows = parseHoravaCsv(csv);
  const critical = rows.filter((r) => r.flag === "critical").map((r) => r.alpha);
  const speed = rows
    .filter((r) => r.c !== null)
    .map((r) => [r.alpha, r.c as number] as [number, number]);
  const lambda = rows.map((r) => [r.alpha, r.lambda_eff] as [number, number]);
  const series: Series[] = [
    { label: "Lambda(alpha)", color: PALETTE[0], points: lambda },
  ];
  if (speed.length) {
    series.push({ label: "c(alpha)", color: PALETTE[1], points: speed });
  }
  return renderFigure({
    title: "Gauge dependence of the emergent constants",
    xLabel: "alpha",
    yLabel: "value",
    series,
    markers: critical.map((x) => ({ x, label: "alpha*" })),
  });
}

const BUILDERS: Record<FigureKind, (csv: string) => string> = {
  trajectory: trajectoryFigure,
  entropy: entropyFigure,
  anisotropy: anisotropyFigure,
  "horava-scan": horavaScanFigure,
};

export function buildFigure(kind: FigureKind, csv: string): string {
  const builder = BUILDERS[kind];
  if (!builder) {
    throw new Error(`unknown figure kind ${JSON.stringify(kind)}; known: ${FIGURE_KINDS.join(", ")}`);
  }
  return builder(csv);
}

export function render(req: FigureRequest): void {
  const csv = readFileSync(req.input, "utf-8");
  writeFileSync(req.output, buildFigure(req.kind, csv), "utf-8");
}
