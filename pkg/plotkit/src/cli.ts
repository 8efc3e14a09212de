/**
 * Usage: node dist/cli.js render --kind K --in PATH --out PATH
 * where K is trajectory | entropy | anisotropy | horava-scan.
 */

import { parseArgs } from "node:util";

import { FIGURE_KINDS, FigureKind, render } from "./figures.js";
import { SchemaError } from "./schema.js";

export function main(argv: string[]): number {
  if (argv[0] !== "render") {
    process.stderr.write("usage: plotkit render --kind K --in PATH --out PATH\n");
    return 2;
  }
  let values;
  try {
    ({ values } = parseArgs({
      args: argv.slice(1),
      options: {
        kind: { type: "string" },
        in: { type: "string" },
        out: { type: "string" },
      },
    }));
  } catch (err) {
    process.stderr.write(`argument error: ${(err as Error).message}\n`);
    return 2;
  }
  const { kind, in: input, out } = values;
  if (!kind || !input || !out) {
    process.stderr.write("render requires --kind, --in and --out\n");
    return 2;
  }
  if (!(FIGURE_KINDS as readonly string[]).includes(kind)) {
    process.stderr.write(`unknown kind ${kind}; known: ${FIGURE_KINDS.join(", ")}\n`);
    return 2;
  }
  try {
    render({ kind: kind as FigureKind, input, output: out });
  } catch (err) {
    if (err instanceof SchemaError) {
      process.stderr.write(`validation error: ${err.message}\n`);
      return 1;
    }
    process.stderr.write(`error: ${(err as Error).message}\n`);
    return 1;
  }
  process.stdout.write(`${out}\n`);
  return 0;
}

if (process.argv[1] && process.argv[1].endsWith("cli.js")) {
  process.exit(main(process.argv.slice(2)));
}
